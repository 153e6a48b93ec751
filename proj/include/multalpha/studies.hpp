#pragma once
// Parameterized reproductions: the drug cost-effectiveness tables (dichotomous
// and continuous risk differences), the anticipated-effect research scenario,
// and the random-cost simulations.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "multalpha/alphasel.hpp"
#include "multalpha/costengine.hpp"
#include "multalpha/costtable.hpp"
#include "multalpha/format.hpp"
#include "multalpha/parallel.hpp"
#include "multalpha/rng.hpp"
#include "multalpha/scenario.hpp"
#include "multalpha/testmodel.hpp"

namespace multalpha {

// ---------------------------------------------------------------------------
// Risk-difference studies

struct MolnupiravirParams {
    double cT = 707.0;      // treatment course
    double cH = 40000.0;    // hospitalization
    double r1 = 0.092;      // untreated risk
    int per_group_n = 1000;
    double incidence = 1.0;  // population scale I
    bool round_boundary = false;  // use M rounded to 3 decimals (-0.018)
    RiskDiffVariant variant = RiskDiffVariant::TotalN;

    void validate() const {
        detail::require_domain(cT > 0.0 && cH > cT, "need 0 < cT < cH");
        detail::require_domain(r1 > 0.0 && r1 < 1.0, "r1 must lie in (0,1)");
        detail::require_contract(per_group_n >= 2, "per-group size must be at least 2");
        detail::require_domain(incidence > 0.0, "incidence must be positive");
    }

    // Break-even risk difference -cT/cH.
    [[nodiscard]] double boundary() const {
        const double m = -cT / cH;
        return round_boundary ? std::round(m * 1000.0) / 1000.0 : m;
    }

    [[nodiscard]] RiskDifferenceModel model() const {
        validate();
        return {r1, boundary(), TwoGroupDesign(2 * per_group_n), variant};
    }
};

namespace detail {

inline std::vector<std::string> ladder_columns(const AlphaLadder& ladder) {
    std::vector<std::string> cols;
    for (double a : ladder.levels()) cols.push_back("alpha=" + format_label(a));
    cols.emplace_back("multi-level");
    cols.emplace_back("optimal");
    return cols;
}

// Surprisal-proportional schedule scaled so the top level carries (c0, c1).
inline CostSchedule scaled_surprisal_costs(const AlphaLadder& ladder, double c0, double c1) {
    const double top = surprisal(ladder.most_stringent());
    return surprisal_costs(ladder, c0 / top, c1 / top);
}

}  // namespace detail

inline CostTable table1(const MolnupiravirParams& params, const std::vector<double>& rds,
                        const std::vector<double>& Ps, const AlphaLadder& ladder, const SearchOptions& search = {}) {
    const auto model = params.model();
    CostTable t;
    t.title = "Expected total error costs per patient, dichotomous risk-difference scenarios";
    t.columns = detail::ladder_columns(ladder);
    t.single_columns = ladder.size();
    t.decimals = 1;
    for (double rd : rds) {
        detail::require_contract(rd < model.boundary(), "table1: risk difference must lie below the break-even M");
        const double c0 = params.cT * params.incidence;
        const double c1 = (-params.cH * rd - params.cT) * params.incidence;
        for (double P : Ps) {
            const DichotomousPrevalence prev{P, rd, {}};
            CostRow row{"RD = " + format_shortest(rd), "P = " + format_shortest(P), {}};
            for (double a : ladder.levels()) row.cells.push_back({cost_single_dichotomous(prev, model, a, c0, c1)});
            row.cells.push_back(
                {cost_multi_dichotomous(prev, model, ladder, detail::scaled_surprisal_costs(ladder, c0, c1)).total});
            const auto opt = optimal_alpha(
                [&](double a) { return cost_single_dichotomous(prev, model, a, c0, c1); }, search);
            row.cells.push_back({opt.cost_star, opt.alpha_star});
            t.rows.push_back(std::move(row));
        }
    }
    t.mark_minima();
    return t;
}

inline CostTable table2(const MolnupiravirParams& params, const std::vector<std::pair<double, double>>& mean_sd,
                        const AlphaLadder& ladder, const SearchOptions& search = {}) {
    const auto model = params.model();
    const auto costs = riskdiff_costs(params.cT, params.cH, params.incidence);
    const auto levels = surprisal_level_costs(ladder, costs);
    CostTable t;
    t.title = "Expected total error costs per patient, normally distributed risk differences";
    t.columns = detail::ladder_columns(ladder);
    t.single_columns = ladder.size();
    t.decimals = 1;
    for (const auto& [mu, sigma] : mean_sd) {
        const ContinuousPrevalence prev{mu, sigma, model.boundary(), Direction::Below};
        CostRow row{"mu = " + format_shortest(mu), "sigma = " + format_shortest(sigma), {}};
        for (double a : ladder.levels()) row.cells.push_back({cost_single_continuous(prev, model, a, costs)});
        row.cells.push_back({cost_multi_continuous(prev, model, ladder, levels).total});
        const auto opt =
            optimal_alpha([&](double a) { return cost_single_continuous(prev, model, a, costs); }, search);
        row.cells.push_back({opt.cost_star, opt.alpha_star});
        t.rows.push_back(std::move(row));
    }
    t.mark_minima();
    return t;
}

// Inputs of the standard reproductions.
inline AlphaLadder drug_study_ladder() { return {0.25, 0.05, 0.001}; }
inline std::vector<double> table1_risk_differences() { return {-0.025, -0.05}; }
inline std::vector<double> table1_prevalences() { return {0.5, 0.1}; }
inline std::vector<std::pair<double, double>> table2_distributions() {
    return {{0.0, 0.015}, {0.0, 0.025}, {-0.02, 0.015}, {-0.02, 0.025}};
}

// ---------------------------------------------------------------------------
// Anticipated-effect research scenario

// Research teams anticipate standardized effects x ~ N(M + offset, sd) and
// size their two-group study for the given power at design_alpha; true
// effects follow N(true_mean, true_sd). Costs are normalized to C1 = 1 and
// C0 = cost_ratio at the top decision level.
struct AnticipatedScenario {
    double boundary = 0.0;
    double anticipated_offset = 0.4;
    double anticipated_sd = 0.1;
    double true_mean = 0.0;
    double true_sd = 0.2;
    double design_alpha = 0.025;
    double design_power = 0.8;
    double cost_ratio = 1.0;
    // Teams whose plan needs more than this many subjects in total drop out
    // of the average (0 disables the cap). The average is not renormalized.
    double max_total_n = 300.0;
    double min_offset = 0.05;  // anticipated x <= M + min_offset is excluded
    DfMode df_mode = DfMode::Normal;

    void validate() const {
        detail::require_domain(std::isfinite(boundary) && std::isfinite(true_mean), "scenario means must be finite");
        detail::require_domain(anticipated_offset > 0.0, "anticipated offset must be positive");
        detail::require_domain(anticipated_sd > 0.0 && true_sd > 0.0, "scenario sds must be positive");
        detail::require_domain(design_alpha > 0.0 && design_alpha < 1.0, "design alpha must lie in (0,1)");
        detail::require_domain(design_power > 0.0 && design_power < 1.0, "design power must lie in (0,1)");
        detail::require_domain(cost_ratio > 0.0, "cost ratio must be positive");
        detail::require_domain(max_total_n >= 0.0, "max_total_n must be nonnegative");
        detail::require_domain(min_offset > 0.0, "min_offset must be positive");
    }

    [[nodiscard]] double anticipated_mean() const noexcept { return boundary + anticipated_offset; }

    // Real-valued total sample size planned by a team anticipating x.
    [[nodiscard]] double total_n(double x) const {
        return 2.0 * group_size_exact(x - boundary, design_alpha, design_power);
    }

    [[nodiscard]] double anticipated_density(double x) const {
        return density_at(ContinuousPrevalence{anticipated_mean(), anticipated_sd, boundary, Direction::Above}, x);
    }

    [[nodiscard]] ContinuousPrevalence true_prevalence() const {
        return {true_mean, true_sd, boundary, Direction::Above};
    }

    // Range of anticipated effects included in the average.
    [[nodiscard]] Interval anticipated_range() const {
        double lo = std::max(boundary + min_offset, anticipated_mean() - 8.0 * anticipated_sd);
        if (max_total_n > 0.0) {
            const double z = normal_quantile(1.0 - design_alpha) + normal_quantile(design_power);
            lo = std::max(lo, boundary + 2.0 * z / std::sqrt(max_total_n));
        }
        return {lo, anticipated_mean() + 8.0 * anticipated_sd};
    }
};

namespace detail {

inline const QuadratureOptions kOuterQuadrature{1e-9, 1e-10, 18};

template <class TeamCost>
double average_over_teams(const AnticipatedScenario& scn, TeamCost&& team_cost) {
    scn.validate();
    const auto range = scn.anticipated_range();
    return integrate([&](double x) { return team_cost(x) * scn.anticipated_density(x); }, range, kOuterQuadrature)
        .value;
}

inline StandardizedEffectModel team_model(const AnticipatedScenario& scn, double x) {
    return {scn.boundary, scn.total_n(x), Direction::Above, scn.df_mode};
}

}  // namespace detail

// Single-level cost of the team anticipating x.
inline double team_cost(const AnticipatedScenario& scn, double x, double alpha) {
    return cost_single_continuous(scn.true_prevalence(), detail::team_model(scn, x), alpha,
                                  EffectCosts::constant(scn.cost_ratio, 1.0));
}

// Single-level cost averaged over the anticipated-effect distribution.
inline double anticipated_cost(const AnticipatedScenario& scn, double alpha) {
    return detail::average_over_teams(scn, [&](double x) { return team_cost(scn, x, alpha); });
}

// Multi-alpha cost (surprisal-proportional levels) averaged the same way.
inline double anticipated_multi_cost(const AnticipatedScenario& scn, const AlphaLadder& ladder) {
    const auto levels = surprisal_level_costs(ladder, EffectCosts::constant(scn.cost_ratio, 1.0));
    const auto prev = scn.true_prevalence();
    return detail::average_over_teams(
        scn, [&](double x) { return cost_multi_continuous(prev, detail::team_model(scn, x), ladder, levels).total; });
}

inline CostTable table3(const AnticipatedScenario& base, const AlphaLadder& ladder = {0.25, 0.025},
                        const std::vector<double>& ratios = {10.0, 4.0, 1.0},
                        const std::vector<double>& true_offsets = {-0.1, 0.0, 0.4}, const SearchOptions& search = {}) {
    CostTable t;
    t.title = "Expected total error costs averaged over anticipated effect sizes";
    t.columns = detail::ladder_columns(ladder);
    t.single_columns = ladder.size();
    t.decimals = 2;
    for (double ratio : ratios) {
        for (double off : true_offsets) {
            AnticipatedScenario scn = base;
            scn.cost_ratio = ratio;
            scn.true_mean = base.boundary + off;
            const std::string label =
                off == 0.0 ? "true mean = M"
                           : "true mean = M " + std::string(off < 0 ? "- " : "+ ") + format_shortest(std::abs(off));
            CostRow row{"cost ratio = " + format_shortest(ratio), label, {}};
            for (double a : ladder.levels()) row.cells.push_back({anticipated_cost(scn, a)});
            row.cells.push_back({anticipated_multi_cost(scn, ladder)});
            const auto opt = optimal_alpha([&](double a) { return anticipated_cost(scn, a); }, search);
            row.cells.push_back({opt.cost_star, opt.alpha_star});
            t.rows.push_back(std::move(row));
        }
    }
    t.mark_minima();
    return t;
}

// Density of per-group sample sizes induced by the anticipated-effect
// distribution through n(x) = 2 (z_{1-a} + z_pow)^2 / (x - M)^2.
inline double sample_size_density(const AnticipatedScenario& scn, double n_group) {
    detail::require_domain(n_group > 0.0, "sample size must be positive");
    const double z = normal_quantile(1.0 - scn.design_alpha) + normal_quantile(scn.design_power);
    const double x = scn.boundary + z * std::sqrt(2.0 / n_group);
    const double dxdn = z * std::sqrt(2.0) * 0.5 * std::pow(n_group, -1.5);
    return scn.anticipated_density(x) * dxdn;
}

struct Fig1Data {
    // (a) true and anticipated effect densities
    std::vector<double> effect, true_density, anticipated_density;
    // (b) per-group sample size against anticipated effect
    std::vector<double> anticipated;
    std::vector<int> group_size;
    // (c) density of per-group sample sizes
    std::vector<double> sample_size, sample_size_density;
};

inline Fig1Data fig1_data(const AnticipatedScenario& scn, int points = 201) {
    scn.validate();
    detail::require_contract(points >= 2, "fig1_data needs at least 2 points");
    Fig1Data out;
    const auto prev = scn.true_prevalence();
    const double lo = std::min(scn.true_mean - 4.0 * scn.true_sd, scn.anticipated_mean() - 4.0 * scn.anticipated_sd);
    const double hi = std::max(scn.true_mean + 4.0 * scn.true_sd, scn.anticipated_mean() + 4.0 * scn.anticipated_sd);
    for (int i = 0; i < points; ++i) {
        const double e = lo + (hi - lo) * i / (points - 1);
        out.effect.push_back(e);
        out.true_density.push_back(density_at(prev, e));
        out.anticipated_density.push_back(scn.anticipated_density(e));
    }
    const double xlo = scn.boundary + scn.min_offset;
    const double xhi = scn.anticipated_mean() + 4.0 * scn.anticipated_sd;
    for (int i = 0; i < points; ++i) {
        const double x = xlo + (xhi - xlo) * i / (points - 1);
        out.anticipated.push_back(x);
        out.group_size.push_back(required_group_size(x - scn.boundary, scn.design_alpha, scn.design_power));
    }
    const double nlo = group_size_exact(xhi - scn.boundary, scn.design_alpha, scn.design_power);
    const double nhi = group_size_exact(xlo - scn.boundary, scn.design_alpha, scn.design_power);
    for (int i = 0; i < points; ++i) {
        const double n = std::exp(std::log(nlo) + (std::log(nhi) - std::log(nlo)) * i / (points - 1));
        out.sample_size.push_back(n);
        out.sample_size_density.push_back(sample_size_density(scn, n));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random-cost simulations

struct SimConfig {
    std::size_t runs = 2000;
    std::uint64_t seed = 1;
    AlphaLadder ladder{0.025, 0.0025};
    // Dichotomous: effect_true is the meaningful effect. Continuous: the
    // density's boundary must equal `boundary`.
    std::variant<DichotomousPrevalence, ContinuousPrevalence> prevalence = DichotomousPrevalence{};
    double boundary = 0.0;
    int n_total = 24;
    DfMode df_mode = DfMode::StudentT;
    Interval range0{0.0, 100.0};
    Interval range1{0.0, 25.0};
    // Per-run optimum: minimum over the ladder levels and this log-spaced grid.
    Interval optimal_bounds{1e-6, 0.5};
    int optimal_grid = 400;
    unsigned threads = 0;  // 0: worker_count()
};

struct StrategyStats {
    std::string label;
    double mean = 0.0;
    double sd = 0.0;
};

struct SimSummary {
    std::vector<StrategyStats> single;
    StrategyStats multi;
    StrategyStats optimal;
    std::size_t runs = 0;
};

namespace detail {

// Prevalence-weighted error rates at one alpha: cost = C0 * type1 + C1 * type2.
struct RatePair {
    double type1;
    double type2;
};

inline RatePair sim_rates(const SimConfig& cfg, const StandardizedEffectModel& model, double alpha) {
    if (const auto* d = std::get_if<DichotomousPrevalence>(&cfg.prevalence)) {
        const double t1 = (1.0 - d->P) * (d->effect_null ? model.rejection_probability(*d->effect_null, alpha) : alpha);
        const double t2 = d->P * (1.0 - model.rejection_probability(d->effect_true, alpha));
        return {t1, t2};
    }
    const auto& c = std::get<ContinuousPrevalence>(cfg.prevalence);
    const auto terms = continuous_error_costs(c, model, alpha, EffectCosts::constant(1.0, 1.0));
    return {terms.type1, terms.type2};
}

inline StrategyStats summarize(std::string label, const std::vector<double>& x) {
    CompensatedSum s;
    for (double v : x) s.add(v);
    const double mean = s.value() / static_cast<double>(x.size());
    CompensatedSum ss;
    for (double v : x) ss.add((v - mean) * (v - mean));
    const double sd = x.size() > 1 ? std::sqrt(ss.value() / static_cast<double>(x.size() - 1)) : 0.0;
    return {std::move(label), mean, sd};
}

}  // namespace detail

// Each run draws cost differences, prices every strategy with them, and
// records the result; runs use substreams seed + run index so the summary
// does not depend on thread count or scheduling.
inline SimSummary simulate(const SimConfig& cfg) {
    detail::require_contract(cfg.runs >= 1, "simulation needs at least one run");
    detail::require_contract(cfg.optimal_grid >= 2, "optimal grid needs at least 2 points");
    if (const auto* d = std::get_if<DichotomousPrevalence>(&cfg.prevalence)) {
        d->validate();
    } else {
        const auto& c = std::get<ContinuousPrevalence>(cfg.prevalence);
        detail::require_contract(c.boundary == cfg.boundary && c.direction == Direction::Above,
                                 "simulation prevalence must use the configured boundary, meaningful above");
    }
    const unsigned threads = cfg.threads ? cfg.threads : worker_count();
    const StandardizedEffectModel model(cfg.boundary, TwoGroupDesign(cfg.n_total), Direction::Above, cfg.df_mode);
    const std::size_t k = cfg.ladder.size();

    // Error rates do not depend on the drawn costs: evaluate them once.
    std::vector<double> alphas(cfg.ladder.levels().begin(), cfg.ladder.levels().end());
    const double llo = std::log(cfg.optimal_bounds.lo);
    const double lhi = std::log(cfg.optimal_bounds.hi);
    for (int i = 0; i < cfg.optimal_grid; ++i) alphas.push_back(std::exp(llo + (lhi - llo) * i / (cfg.optimal_grid - 1)));
    std::vector<detail::RatePair> rates(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) { rates[i] = detail::sim_rates(cfg, model, alphas[i]); }, threads);

    std::vector<std::vector<double>> single(k, std::vector<double>(cfg.runs));
    std::vector<double> multi(cfg.runs), optimal(cfg.runs);
    parallel_for(
        cfg.runs,
        [&](std::size_t run) {
            auto rng = Xoshiro256StarStar::substream(cfg.seed, run);
            const auto sched = random_costs(rng, k, cfg.range0, cfg.range1);
            const double c0 = sched.top_c0();
            const double c1 = sched.top_c1();
            double best = std::numeric_limits<double>::infinity();
            CompensatedSum m;
            for (std::size_t j = 0; j < k; ++j) {
                const double cost = c0 * rates[j].type1 + c1 * rates[j].type2;
                single[j][run] = cost;
                best = std::min(best, cost);
                m.add(sched.delta_c0(j) * rates[j].type1 + sched.delta_c1(j) * rates[j].type2);
            }
            for (std::size_t i = k; i < rates.size(); ++i) best = std::min(best, c0 * rates[i].type1 + c1 * rates[i].type2);
            multi[run] = m.value();
            optimal[run] = best;
        },
        threads);

    SimSummary out;
    out.runs = cfg.runs;
    for (std::size_t j = 0; j < k; ++j) {
        out.single.push_back(detail::summarize("alpha=" + format_label(cfg.ladder[j]), single[j]));
    }
    out.multi = detail::summarize("multi-level", multi);
    out.optimal = detail::summarize("optimal", optimal);
    return out;
}

// Parameter grids of the simulation tables.
struct DichotomousSimCell {
    double d;  // true effect minus M
    double P;
    int n_total;
};

struct ContinuousSimCell {
    double boundary;
    double sd;
    int n_total;
};

inline std::vector<DichotomousSimCell> default_dichotomous_cells() {
    std::vector<DichotomousSimCell> cells;
    for (double d : {0.15, 0.5}) {
        for (double P : {0.5, 0.1}) {
            for (int n : {24, 192}) cells.push_back({d, P, n});
        }
    }
    return cells;
}

inline std::vector<ContinuousSimCell> default_continuous_cells() {
    std::vector<ContinuousSimCell> cells;
    for (double m : {0.0, 0.64}) {
        for (double sd : {0.5, 1.0}) {
            for (int n : {24, 192}) cells.push_back({m, sd, n});
        }
    }
    return cells;
}

namespace detail {

inline CostRow sim_row(std::string group, std::string label, const SimSummary& s) {
    CostRow row{std::move(group), std::move(label), {}};
    for (const auto& st : s.single) row.cells.push_back({st.mean, std::nullopt, st.sd});
    row.cells.push_back({s.multi.mean, std::nullopt, s.multi.sd});
    row.cells.push_back({s.optimal.mean, std::nullopt, s.optimal.sd});
    return row;
}

inline CostTable sim_table_frame(std::string title, const AlphaLadder& ladder) {
    CostTable t;
    t.title = std::move(title);
    t.columns = ladder_columns(ladder);
    t.single_columns = ladder.size();
    t.decimals = 1;
    return t;
}

}  // namespace detail

// Every cell is simulated with the same seed (common random costs across cells).
inline CostTable simulation_table_dichotomous(const AlphaLadder& ladder, std::size_t runs, std::uint64_t seed,
                                              const std::vector<DichotomousSimCell>& cells = default_dichotomous_cells(),
                                              std::vector<SimSummary>* summaries = nullptr) {
    auto t = detail::sim_table_frame("Average expected total error costs, dichotomous effect distributions", ladder);
    for (const auto& c : cells) {
        SimConfig cfg;
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.ladder = ladder;
        cfg.prevalence = DichotomousPrevalence{c.P, c.d, {}};
        cfg.n_total = c.n_total;
        const auto s = simulate(cfg);
        if (summaries) summaries->push_back(s);
        t.rows.push_back(detail::sim_row("d = " + format_shortest(c.d),
                                         "P = " + format_shortest(c.P) + ", n = " + std::to_string(c.n_total), s));
    }
    t.mark_minima();
    return t;
}

inline CostTable simulation_table_continuous(const AlphaLadder& ladder, std::size_t runs, std::uint64_t seed,
                                             const std::vector<ContinuousSimCell>& cells = default_continuous_cells(),
                                             std::vector<SimSummary>* summaries = nullptr) {
    auto t = detail::sim_table_frame("Average expected total error costs, zero-mean normal effect distributions", ladder);
    for (const auto& c : cells) {
        SimConfig cfg;
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.ladder = ladder;
        cfg.boundary = c.boundary;
        cfg.prevalence = ContinuousPrevalence{0.0, c.sd, c.boundary, Direction::Above};
        cfg.n_total = c.n_total;
        const auto s = simulate(cfg);
        if (summaries) summaries->push_back(s);
        t.rows.push_back(detail::sim_row("M = " + format_shortest(c.boundary),
                                         "sigma = " + format_shortest(c.sd) + ", n = " + std::to_string(c.n_total), s));
    }
    t.mark_minima();
    return t;
}

}  // namespace multalpha
