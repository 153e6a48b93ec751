#pragma once
// Scenario files: JSON documents describing one research scenario (model,
// prevalence, alpha ladder, costs). Unknown fields are rejected.
//
//   {
//     "schema_version": 1,
//     "name": "...",                                  optional
//     "model": {"kind": "standardized", "n_total": 196, "df_mode": "normal" | "t"}
//            | {"kind": "riskdiff", "r1": 0.092, "per_group_n": 1000, "cT": 707, "cH": 40000,
//               "incidence": 1, "n_variant": "total" | "per_group"},
//     "boundary_M": 0.0,             required for standardized; riskdiff default -cT/cH
//     "direction": "above" | "below", standardized only, default "above"
//     "prevalence": {"kind": "dichotomous", "P": 0.5, "effect_true": -0.025, "effect_null": ...}
//                 | {"kind": "continuous", "mean": 0, "sd": 0.015},
//     "alphas": [0.25, 0.05, 0.001],
//     "costs": {"kind": "explicit", "c0": [...], "c1": [...]}
//            | {"kind": "surprisal", "c": 1, "c_prime": 0.25}
//            | {"kind": "surprisal", "top_c0": 707, "top_c1": 293}
//            | {"kind": "random", "seed": 42, "range0": [0, 100], "range1": [0, 25]}
//            | {"kind": "riskdiff"}   drug-cost model, surprisal-proportional across levels
//   }

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "multalpha/alphasel.hpp"
#include "multalpha/costengine.hpp"
#include "multalpha/rng.hpp"
#include "multalpha/scenario.hpp"
#include "multalpha/testmodel.hpp"

namespace multalpha {

inline constexpr int kScenarioSchemaVersion = 1;

struct StandardizedModelSpec {
    int n_total = 0;
    DfMode df_mode = DfMode::Normal;
    friend bool operator==(const StandardizedModelSpec&, const StandardizedModelSpec&) = default;
};

struct RiskDiffModelSpec {
    double r1 = 0.092;
    int per_group_n = 1000;
    double cT = 707.0;
    double cH = 40000.0;
    double incidence = 1.0;
    RiskDiffVariant variant = RiskDiffVariant::TotalN;
    friend bool operator==(const RiskDiffModelSpec&, const RiskDiffModelSpec&) = default;
};

struct ExplicitCostSpec {
    std::vector<double> c0, c1;
    friend bool operator==(const ExplicitCostSpec&, const ExplicitCostSpec&) = default;
};

// Either scale constants (c, c_prime) or the top-level costs.
struct SurprisalCostSpec {
    std::optional<double> c, c_prime, top_c0, top_c1;
    friend bool operator==(const SurprisalCostSpec&, const SurprisalCostSpec&) = default;
};

struct RandomCostSpec {
    std::uint64_t seed = 0;
    double range0_lo = 0.0, range0_hi = 100.0;
    double range1_lo = 0.0, range1_hi = 25.0;
    friend bool operator==(const RandomCostSpec&, const RandomCostSpec&) = default;
};

struct RiskDiffCostSpec {
    friend bool operator==(const RiskDiffCostSpec&, const RiskDiffCostSpec&) = default;
};

struct DichotomousSpec {
    double P = 0.5;
    double effect_true = 0.0;
    std::optional<double> effect_null;
    friend bool operator==(const DichotomousSpec&, const DichotomousSpec&) = default;
};

struct ContinuousSpec {
    double mean = 0.0;
    double sd = 1.0;
    friend bool operator==(const ContinuousSpec&, const ContinuousSpec&) = default;
};

struct ScenarioSpec {
    int schema_version = kScenarioSchemaVersion;
    std::optional<std::string> name;
    std::variant<StandardizedModelSpec, RiskDiffModelSpec> model;
    std::optional<double> boundary;
    std::optional<Direction> direction;
    std::variant<DichotomousSpec, ContinuousSpec> prevalence;
    std::vector<double> alphas;
    std::variant<ExplicitCostSpec, SurprisalCostSpec, RandomCostSpec, RiskDiffCostSpec> costs;
    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

namespace detail {

using nlohmann::json;

class JsonReader {
public:
    JsonReader(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
        require_contract(j.is_object(), path_ + ": expected an object");
        for (const auto& [k, v] : j.items()) {
            if (!allowed.count(k)) throw ContractError(path_ + ": unknown field '" + k + "'");
        }
    }

    [[nodiscard]] bool has(const std::string& k) const { return j_.contains(k); }

    [[nodiscard]] const json& at(const std::string& k) const {
        if (!has(k)) throw ContractError(path_ + ": missing field '" + k + "'");
        return j_.at(k);
    }

    [[nodiscard]] double number(const std::string& k) const {
        const auto& v = at(k);
        require_contract(v.is_number(), field(k) + ": expected a number");
        return v.get<double>();
    }

    [[nodiscard]] std::optional<double> opt_number(const std::string& k) const {
        return has(k) ? std::optional<double>(number(k)) : std::nullopt;
    }

    [[nodiscard]] long long integer(const std::string& k) const {
        const auto& v = at(k);
        require_contract(v.is_number_integer(), field(k) + ": expected an integer");
        return v.get<long long>();
    }

    [[nodiscard]] std::uint64_t unsigned_integer(const std::string& k) const {
        const auto& v = at(k);
        require_contract(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
                         field(k) + ": expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    [[nodiscard]] std::string string(const std::string& k) const {
        const auto& v = at(k);
        require_contract(v.is_string(), field(k) + ": expected a string");
        return v.get<std::string>();
    }

    [[nodiscard]] std::vector<double> numbers(const std::string& k) const {
        const auto& v = at(k);
        require_contract(v.is_array(), field(k) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            require_contract(x.is_number(), field(k) + ": expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    [[nodiscard]] std::pair<double, double> pair(const std::string& k) const {
        const auto v = numbers(k);
        require_contract(v.size() == 2, field(k) + ": expected [lo, hi]");
        return {v[0], v[1]};
    }

    [[nodiscard]] std::string field(const std::string& k) const { return path_ + "." + k; }

private:
    const json& j_;
    std::string path_;
};

}  // namespace detail

inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    using detail::JsonReader;
    JsonReader top(j, "scenario",
                   {"schema_version", "name", "model", "boundary_M", "direction", "prevalence", "alphas", "costs"});
    ScenarioSpec s;
    s.schema_version = static_cast<int>(top.integer("schema_version"));
    detail::require_contract(s.schema_version == kScenarioSchemaVersion,
                             "scenario.schema_version: unsupported version " + std::to_string(s.schema_version));
    if (top.has("name")) s.name = top.string("name");

    const auto& jm = top.at("model");
    const std::string mkind = JsonReader(jm, "scenario.model", {"kind", "n_total", "df_mode", "r1", "per_group_n", "cT",
                                                               "cH", "incidence", "n_variant"})
                                  .string("kind");
    if (mkind == "standardized") {
        JsonReader m(jm, "scenario.model", {"kind", "n_total", "df_mode"});
        StandardizedModelSpec ms;
        ms.n_total = static_cast<int>(m.integer("n_total"));
        if (m.has("df_mode")) {
            const auto d = m.string("df_mode");
            detail::require_contract(d == "normal" || d == "t", "scenario.model.df_mode: expected \"normal\" or \"t\"");
            ms.df_mode = d == "t" ? DfMode::StudentT : DfMode::Normal;
        }
        s.model = ms;
    } else if (mkind == "riskdiff") {
        JsonReader m(jm, "scenario.model", {"kind", "r1", "per_group_n", "cT", "cH", "incidence", "n_variant"});
        RiskDiffModelSpec ms;
        ms.r1 = m.number("r1");
        ms.per_group_n = static_cast<int>(m.integer("per_group_n"));
        ms.cT = m.number("cT");
        ms.cH = m.number("cH");
        if (m.has("incidence")) ms.incidence = m.number("incidence");
        if (m.has("n_variant")) {
            const auto v = m.string("n_variant");
            detail::require_contract(v == "total" || v == "per_group",
                                     "scenario.model.n_variant: expected \"total\" or \"per_group\"");
            ms.variant = v == "total" ? RiskDiffVariant::TotalN : RiskDiffVariant::PerGroupN;
        }
        s.model = ms;
    } else {
        throw ContractError("scenario.model.kind: expected \"standardized\" or \"riskdiff\", got \"" + mkind + "\"");
    }

    s.boundary = top.opt_number("boundary_M");
    if (top.has("direction")) {
        const auto d = top.string("direction");
        detail::require_contract(d == "above" || d == "below", "scenario.direction: expected \"above\" or \"below\"");
        s.direction = d == "above" ? Direction::Above : Direction::Below;
    }
    if (std::holds_alternative<StandardizedModelSpec>(s.model)) {
        detail::require_contract(s.boundary.has_value(), "scenario: missing field 'boundary_M'");
    } else {
        detail::require_contract(!s.direction.has_value() || *s.direction == Direction::Below,
                                 "scenario.direction: risk-difference tests are meaningful below M");
    }

    const auto& jp = top.at("prevalence");
    const std::string pkind =
        JsonReader(jp, "scenario.prevalence", {"kind", "P", "effect_true", "effect_null", "mean", "sd"}).string("kind");
    if (pkind == "dichotomous") {
        JsonReader p(jp, "scenario.prevalence", {"kind", "P", "effect_true", "effect_null"});
        s.prevalence = DichotomousSpec{p.number("P"), p.number("effect_true"), p.opt_number("effect_null")};
    } else if (pkind == "continuous") {
        JsonReader p(jp, "scenario.prevalence", {"kind", "mean", "sd"});
        s.prevalence = ContinuousSpec{p.number("mean"), p.number("sd")};
    } else {
        throw ContractError("scenario.prevalence.kind: expected \"dichotomous\" or \"continuous\", got \"" + pkind +
                            "\"");
    }

    s.alphas = top.numbers("alphas");

    const auto& jc = top.at("costs");
    const std::string ckind = JsonReader(jc, "scenario.costs", {"kind", "c0", "c1", "c", "c_prime", "top_c0", "top_c1",
                                                                "seed", "range0", "range1"})
                                  .string("kind");
    if (ckind == "explicit") {
        JsonReader c(jc, "scenario.costs", {"kind", "c0", "c1"});
        s.costs = ExplicitCostSpec{c.numbers("c0"), c.numbers("c1")};
    } else if (ckind == "surprisal") {
        JsonReader c(jc, "scenario.costs", {"kind", "c", "c_prime", "top_c0", "top_c1"});
        SurprisalCostSpec cs{c.opt_number("c"), c.opt_number("c_prime"), c.opt_number("top_c0"), c.opt_number("top_c1")};
        const bool scales = cs.c && cs.c_prime && !cs.top_c0 && !cs.top_c1;
        const bool tops = !cs.c && !cs.c_prime && cs.top_c0 && cs.top_c1;
        detail::require_contract(scales || tops, "scenario.costs: surprisal costs need either {c, c_prime} or {top_c0, top_c1}");
        s.costs = cs;
    } else if (ckind == "random") {
        JsonReader c(jc, "scenario.costs", {"kind", "seed", "range0", "range1"});
        RandomCostSpec rs;
        rs.seed = c.unsigned_integer("seed");
        if (c.has("range0")) std::tie(rs.range0_lo, rs.range0_hi) = c.pair("range0");
        if (c.has("range1")) std::tie(rs.range1_lo, rs.range1_hi) = c.pair("range1");
        s.costs = rs;
    } else if (ckind == "riskdiff") {
        JsonReader c(jc, "scenario.costs", {"kind"});
        detail::require_contract(std::holds_alternative<RiskDiffModelSpec>(s.model),
                                 "scenario.costs: kind \"riskdiff\" needs a riskdiff model");
        s.costs = RiskDiffCostSpec{};
    } else {
        throw ContractError("scenario.costs.kind: expected explicit, surprisal, random or riskdiff, got \"" + ckind +
                            "\"");
    }
    return s;
}

inline nlohmann::json scenario_to_json(const ScenarioSpec& s) {
    nlohmann::json j;
    j["schema_version"] = s.schema_version;
    if (s.name) j["name"] = *s.name;
    if (const auto* m = std::get_if<StandardizedModelSpec>(&s.model)) {
        j["model"] = {{"kind", "standardized"},
                      {"n_total", m->n_total},
                      {"df_mode", m->df_mode == DfMode::StudentT ? "t" : "normal"}};
    } else {
        const auto& r = std::get<RiskDiffModelSpec>(s.model);
        j["model"] = {{"kind", "riskdiff"},     {"r1", r.r1},
                      {"per_group_n", r.per_group_n}, {"cT", r.cT},
                      {"cH", r.cH},             {"incidence", r.incidence},
                      {"n_variant", r.variant == RiskDiffVariant::TotalN ? "total" : "per_group"}};
    }
    if (s.boundary) j["boundary_M"] = *s.boundary;
    if (s.direction) j["direction"] = *s.direction == Direction::Above ? "above" : "below";
    if (const auto* d = std::get_if<DichotomousSpec>(&s.prevalence)) {
        j["prevalence"] = {{"kind", "dichotomous"}, {"P", d->P}, {"effect_true", d->effect_true}};
        if (d->effect_null) j["prevalence"]["effect_null"] = *d->effect_null;
    } else {
        const auto& c = std::get<ContinuousSpec>(s.prevalence);
        j["prevalence"] = {{"kind", "continuous"}, {"mean", c.mean}, {"sd", c.sd}};
    }
    j["alphas"] = s.alphas;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ExplicitCostSpec>) {
                j["costs"] = {{"kind", "explicit"}, {"c0", c.c0}, {"c1", c.c1}};
            } else if constexpr (std::is_same_v<T, SurprisalCostSpec>) {
                j["costs"] = {{"kind", "surprisal"}};
                if (c.c) j["costs"]["c"] = *c.c;
                if (c.c_prime) j["costs"]["c_prime"] = *c.c_prime;
                if (c.top_c0) j["costs"]["top_c0"] = *c.top_c0;
                if (c.top_c1) j["costs"]["top_c1"] = *c.top_c1;
            } else if constexpr (std::is_same_v<T, RandomCostSpec>) {
                j["costs"] = {{"kind", "random"},
                              {"seed", c.seed},
                              {"range0", {c.range0_lo, c.range0_hi}},
                              {"range1", {c.range1_lo, c.range1_hi}}};
            } else {
                j["costs"] = {{"kind", "riskdiff"}};
            }
        },
        s.costs);
    return j;
}

inline ScenarioSpec parse_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into a line number.
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
        throw ContractError("scenario JSON: line " + std::to_string(line) + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("cannot read scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Evaluation

// A scenario resolved into engine objects.
class ResolvedScenario {
public:
    explicit ResolvedScenario(const ScenarioSpec& spec) : spec_(spec), ladder_(spec.alphas) {
        if (const auto* m = std::get_if<StandardizedModelSpec>(&spec.model)) {
            model_.emplace<StandardizedEffectModel>(*spec.boundary, TwoGroupDesign(m->n_total),
                                                    spec.direction.value_or(Direction::Above), m->df_mode);
        } else {
            const auto& r = std::get<RiskDiffModelSpec>(spec.model);
            detail::require_domain(r.cT > 0.0 && r.cH > 0.0, "scenario.model: cT and cH must be positive");
            detail::require_contract(r.per_group_n >= 2, "scenario.model.per_group_n must be at least 2");
            model_.emplace<RiskDifferenceModel>(r.r1, spec.boundary.value_or(-r.cT / r.cH),
                                                TwoGroupDesign(2 * r.per_group_n), r.variant);
        }
        resolve_costs();
    }

    [[nodiscard]] const AlphaLadder& ladder() const noexcept { return ladder_; }
    [[nodiscard]] bool dichotomous() const noexcept {
        return std::holds_alternative<DichotomousSpec>(spec_.prevalence);
    }
    [[nodiscard]] std::optional<std::vector<double>> weights() const {
        if (schedule_) {
            try {
                return weighted_decomposition(ladder_, *schedule_);
            } catch (const ContractError&) {
                return std::nullopt;
            }
        }
        return levels_.weights;
    }

    // Multi-alpha breakdown with per-level single-test costs.
    [[nodiscard]] CostBreakdown cost() const {
        return std::visit(
            [&](const auto& model) -> CostBreakdown {
                if (const auto* d = std::get_if<DichotomousSpec>(&spec_.prevalence)) {
                    return cost_multi_dichotomous(dichotomous_prevalence(*d), model, ladder_, *schedule_);
                }
                return cost_multi_continuous(continuous_prevalence(model), model, ladder_, levels_);
            },
            model_);
    }

    // Single-level cost at alpha with the top-level costs.
    [[nodiscard]] double single_cost(double alpha) const {
        return std::visit(
            [&](const auto& model) -> double {
                if (const auto* d = std::get_if<DichotomousSpec>(&spec_.prevalence)) {
                    return cost_single_dichotomous(dichotomous_prevalence(*d), model, alpha, schedule_->top_c0(),
                                                   schedule_->top_c1());
                }
                return cost_single_continuous(continuous_prevalence(model), model, alpha, top_);
            },
            model_);
    }

    [[nodiscard]] Optimum optimize(const SearchOptions& opt = {}) const {
        return optimal_alpha([&](double a) { return single_cost(a); }, opt);
    }

    [[nodiscard]] std::optional<CostSchedule> schedule() const { return schedule_; }

private:
    static DichotomousPrevalence dichotomous_prevalence(const DichotomousSpec& d) {
        return {d.P, d.effect_true, d.effect_null};
    }

    template <class Model>
    ContinuousPrevalence continuous_prevalence(const Model& model) const {
        const auto& c = std::get<ContinuousSpec>(spec_.prevalence);
        return {c.mean, c.sd, model.boundary(), model.direction()};
    }

    void resolve_costs() {
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, ExplicitCostSpec>) {
                    schedule_ = CostSchedule(c.c0, c.c1);
                } else if constexpr (std::is_same_v<T, SurprisalCostSpec>) {
                    if (c.c) {
                        schedule_ = surprisal_costs(ladder_, *c.c, *c.c_prime);
                    } else {
                        const double top = surprisal(ladder_.most_stringent());
                        schedule_ = surprisal_costs(ladder_, *c.top_c0 / top, *c.top_c1 / top);
                    }
                } else if constexpr (std::is_same_v<T, RandomCostSpec>) {
                    Xoshiro256StarStar rng(c.seed);
                    schedule_ = random_costs(rng, ladder_.size(), {c.range0_lo, c.range0_hi}, {c.range1_lo, c.range1_hi});
                } else {
                    const auto& r = std::get<RiskDiffModelSpec>(spec_.model);
                    if (const auto* d = std::get_if<DichotomousSpec>(&spec_.prevalence)) {
                        const double c0 = r.cT * r.incidence;
                        const double c1 = (-r.cH * d->effect_true - r.cT) * r.incidence;
                        detail::require_contract(c1 > 0.0, "scenario: riskdiff costs need effect_true below -cT/cH");
                        const double top = surprisal(ladder_.most_stringent());
                        schedule_ = surprisal_costs(ladder_, c0 / top, c1 / top);
                    } else {
                        top_ = riskdiff_costs(r.cT, r.cH, r.incidence);
                        levels_ = surprisal_level_costs(ladder_, top_);
                    }
                }
            },
            spec_.costs);
        if (schedule_) {
            detail::require_contract(schedule_->size() == ladder_.size(),
                                     "scenario: cost schedule length differs from the number of alphas");
            top_ = EffectCosts::constant(schedule_->top_c0(), schedule_->top_c1());
            levels_ = constant_level_costs(*schedule_);
            try {
                levels_.weights = weighted_decomposition(ladder_, *schedule_);
            } catch (const ContractError&) {
                // not proportional: no weights
            }
        }
    }

    ScenarioSpec spec_;
    AlphaLadder ladder_;
    std::variant<StandardizedEffectModel, RiskDifferenceModel> model_{std::in_place_index<0>, 0.0, 4.0};
    std::optional<CostSchedule> schedule_;
    EffectCosts top_;
    LevelCosts levels_;
};

}  // namespace multalpha
