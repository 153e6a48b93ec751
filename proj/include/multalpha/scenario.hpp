#pragma once
// Research scenarios: prevalence of true effects, alpha ladders, and the
// per-decision cost schedules attached to them.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "multalpha/error.hpp"
#include "multalpha/quadrature.hpp"
#include "multalpha/rng.hpp"
#include "multalpha/specfun.hpp"
#include "multalpha/testmodel.hpp"

namespace multalpha {

// Proportion P of meaningful (true) research hypotheses. The meaningful
// effect sits at `effect_true`; the others sit on the boundary, where the
// test's Type I rate is exactly alpha, unless `effect_null` says otherwise.
struct DichotomousPrevalence {
    double P = 0.5;
    double effect_true = 0.0;
    std::optional<double> effect_null;

    void validate() const {
        detail::require_domain(P >= 0.0 && P <= 1.0, "prevalence P must lie in [0,1]");
        detail::require_domain(std::isfinite(effect_true), "effect_true must be finite");
    }
};

// Normal density of true effects; `boundary` and `direction` mark the
// meaningful region.
struct ContinuousPrevalence {
    double mean = 0.0;
    double sd = 1.0;
    double boundary = 0.0;
    Direction direction = Direction::Above;

    void validate() const {
        detail::require_domain(std::isfinite(mean), "prevalence mean must be finite");
        detail::require_domain(sd > 0.0 && std::isfinite(sd), "prevalence sd must be positive");
        detail::require_domain(std::isfinite(boundary), "prevalence boundary must be finite");
    }

    // Support used for integration.
    [[nodiscard]] Interval support(double width_sd = 8.0) const noexcept {
        return {mean - width_sd * sd, mean + width_sd * sd};
    }
};

inline double density_at(const ContinuousPrevalence& prev, double e) {
    prev.validate();
    const double z = (e - prev.mean) / prev.sd;
    return std::exp(-0.5 * z * z) / (prev.sd * std::sqrt(2.0 * std::numbers::pi));
}

inline double meaningful_probability(const ContinuousPrevalence& prev) {
    prev.validate();
    const double z = (prev.boundary - prev.mean) / prev.sd;
    return prev.direction == Direction::Above ? normal_cdf(-z) : normal_cdf(z);
}

// Strictly decreasing alpha levels a_1 > ... > a_k in (0,1), with the
// implicit sentinel a_{k+1} = 0.
class AlphaLadder {
public:
    explicit AlphaLadder(std::vector<double> levels) : levels_(std::move(levels)) {
        detail::require_contract(!levels_.empty(), "alpha ladder needs at least one level");
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            const double a = levels_[i];
            detail::require_contract(a > 0.0 && a < 1.0, "alpha level outside (0,1): " + std::to_string(a));
            if (i > 0) {
                detail::require_contract(a < levels_[i - 1], "alpha ladder must be strictly decreasing at level " +
                                                                 std::to_string(i + 1));
            }
        }
    }

    AlphaLadder(std::initializer_list<double> levels) : AlphaLadder(std::vector<double>(levels)) {}

    [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return levels_.at(i); }
    [[nodiscard]] std::span<const double> levels() const noexcept { return levels_; }
    // a_{i+1} with the zero sentinel past the end (0-based).
    [[nodiscard]] double next_or_zero(std::size_t i) const noexcept {
        return i + 1 < levels_.size() ? levels_[i + 1] : 0.0;
    }
    [[nodiscard]] double least_stringent() const noexcept { return levels_.front(); }
    [[nodiscard]] double most_stringent() const noexcept { return levels_.back(); }

    friend bool operator==(const AlphaLadder&, const AlphaLadder&) = default;

private:
    std::vector<double> levels_;
};

// Type I costs C0(m) and Type II payoffs C1(m) for decisions D(1)..D(k);
// C0(0) = C1(0) = 0 is implicit.
class CostSchedule {
public:
    CostSchedule(std::vector<double> c0, std::vector<double> c1) : c0_(std::move(c0)), c1_(std::move(c1)) {
        detail::require_contract(!c0_.empty(), "cost schedule needs at least one level");
        detail::require_contract(c0_.size() == c1_.size(), "cost schedule: C0 and C1 lengths differ");
        check_nondecreasing(c0_, "C0");
        check_nondecreasing(c1_, "C1");
    }

    [[nodiscard]] std::size_t size() const noexcept { return c0_.size(); }
    [[nodiscard]] std::span<const double> c0() const noexcept { return c0_; }
    [[nodiscard]] std::span<const double> c1() const noexcept { return c1_; }
    [[nodiscard]] double top_c0() const noexcept { return c0_.back(); }
    [[nodiscard]] double top_c1() const noexcept { return c1_.back(); }
    [[nodiscard]] double delta_c0(std::size_t m) const { return c0_.at(m) - (m == 0 ? 0.0 : c0_[m - 1]); }
    [[nodiscard]] double delta_c1(std::size_t m) const { return c1_.at(m) - (m == 0 ? 0.0 : c1_[m - 1]); }

    static CostSchedule from_deltas(std::span<const double> d0, std::span<const double> d1) {
        detail::require_contract(d0.size() == d1.size(), "cost deltas: lengths differ");
        std::vector<double> c0(d0.size()), c1(d1.size());
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t m = 0; m < d0.size(); ++m) {
            s0 += d0[m];
            s1 += d1[m];
            c0[m] = s0;
            c1[m] = s1;
        }
        return CostSchedule(std::move(c0), std::move(c1));
    }

private:
    static void check_nondecreasing(const std::vector<double>& c, const char* name) {
        double prev = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) {
            if (!(std::isfinite(c[m]) && c[m] >= prev)) {
                std::ostringstream msg;
                msg << "cost schedule " << name << " must be nonnegative and nondecreasing; level " << (m + 1)
                    << " has " << c[m] << " after " << prev;
                throw ContractError(msg.str());
            }
            prev = c[m];
        }
    }

    std::vector<double> c0_;
    std::vector<double> c1_;
};

// C0(m) = c * surprisal(a_m), C1(m) = c' * surprisal(a_m).
inline CostSchedule surprisal_costs(const AlphaLadder& ladder, double c, double c_prime) {
    detail::require_domain(c > 0.0 && c_prime > 0.0, "surprisal costs: scale constants must be positive");
    std::vector<double> c0, c1;
    for (double a : ladder.levels()) {
        c0.push_back(c * surprisal(a));
        c1.push_back(c_prime * surprisal(a));
    }
    return CostSchedule(std::move(c0), std::move(c1));
}

// Cost differences drawn independently and uniformly from range0 / range1,
// accumulated into a schedule.
inline CostSchedule random_costs(Xoshiro256StarStar& rng, std::size_t k, Interval range0 = {0.0, 100.0},
                                 Interval range1 = {0.0, 25.0}) {
    detail::require_domain(k >= 1, "random costs: k must be at least 1");
    for (const auto& r : {range0, range1}) {
        detail::require_domain(r.lo >= 0.0 && r.hi > r.lo && std::isfinite(r.hi),
                               "random costs: intervals must be nonempty and nonnegative");
    }
    std::vector<double> d0(k), d1(k);
    for (std::size_t m = 0; m < k; ++m) {
        d0[m] = rng.uniform(range0.lo, range0.hi);
        d1[m] = rng.uniform(range1.lo, range1.hi);
    }
    return CostSchedule::from_deltas(d0, d1);
}

// Effect-dependent costs of a single decision: Type I cost on the
// non-meaningful region, Type II loss on the meaningful region.
struct EffectCosts {
    std::function<double(double)> type1;
    std::function<double(double)> type2;

    static EffectCosts constant(double c0, double c1) {
        return {[c0](double) { return c0; }, [c1](double) { return c1; }};
    }

    [[nodiscard]] EffectCosts scaled(double factor) const {
        return {[f = type1, factor](double e) { return factor * f(e); },
                [f = type2, factor](double e) { return factor * f(e); }};
    }
};

// Per-level cost differences dC0(m; e), dC1(m; e) for the multi-alpha
// continuous cost. `weights` is set when every level is a fixed fraction of
// the top-level costs.
struct LevelCosts {
    std::vector<EffectCosts> deltas;
    std::optional<std::vector<double>> weights;
};

// Weights (log2 a_m - log2 a_{m-1}) / log2 a_k, with log2 a_0 = 0.
inline std::vector<double> surprisal_weights(const AlphaLadder& ladder) {
    const double top = surprisal(ladder.most_stringent());
    std::vector<double> w;
    double prev = 0.0;
    for (double a : ladder.levels()) {
        const double s = surprisal(a);
        w.push_back((s - prev) / top);
        prev = s;
    }
    return w;
}

// Costs proportional to surprisal at every effect size: the top level
// carries `top`, level m the share of its surprisal increment.
inline LevelCosts surprisal_level_costs(const AlphaLadder& ladder, const EffectCosts& top) {
    LevelCosts out;
    out.weights = surprisal_weights(ladder);
    for (double w : *out.weights) out.deltas.push_back(top.scaled(w));
    return out;
}

// Effect-independent differences taken from a schedule.
inline LevelCosts constant_level_costs(const CostSchedule& sched) {
    LevelCosts out;
    for (std::size_t m = 0; m < sched.size(); ++m) {
        out.deltas.push_back(EffectCosts::constant(sched.delta_c0(m), sched.delta_c1(m)));
    }
    return out;
}

// Cost of a treatment decision per unit of population incidence: the drug
// costs cT per treated patient and saves cH per avoided hospitalization.
// C1(rd) = cH (r1 - r2) - cT = -cH rd - cT on meaningful risk reductions,
// zero elsewhere.
inline EffectCosts riskdiff_costs(double cT, double cH, double incidence = 1.0) {
    detail::require_domain(cT > 0.0 && cH > 0.0 && incidence > 0.0, "risk-difference costs must be positive");
    const double boundary = -cT / cH;
    return {[cT, incidence](double) { return cT * incidence; },
            [cT, cH, incidence, boundary](double rd) { return rd < boundary ? (-cH * rd - cT) * incidence : 0.0; }};
}

}  // namespace multalpha
