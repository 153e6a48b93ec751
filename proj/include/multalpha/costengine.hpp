#pragma once
// Expected total error costs of single-alpha and multi-alpha tests.
//
// Dichotomous scenarios follow
//     omega(d, a) = C0 (1 - P) a + C1 P beta(d, a)
// and, for a ladder a_1 > ... > a_k with cost increments dC0(m), dC1(m),
//     omega = sum_m (1 - P) dC0(m) a_m + P dC1(m) beta(a_m).
// Continuous scenarios replace the prevalence weights with integrals of the
// Type I / Type II rates against the density of true effects.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "multalpha/error.hpp"
#include "multalpha/quadrature.hpp"
#include "multalpha/scenario.hpp"
#include "multalpha/testmodel.hpp"

namespace multalpha {

struct CostBreakdown {
    double omega0 = 0.0;  // expected Type I cost
    double omega1 = 0.0;  // expected Type II cost
    double total = 0.0;
    std::vector<double> per_level;  // single-level cost at each a_m with the top-level costs
    std::optional<std::vector<double>> weights;
};

namespace detail {

template <ErrorRateModel Model>
void check_dichotomous(const DichotomousPrevalence& prev, const Model& model) {
    prev.validate();
    if (prev.P > 0.0) {
        require_contract(is_meaningful(prev.effect_true, model.boundary(), model.direction()),
                         "dichotomous prevalence: effect_true must lie in the meaningful region");
    }
}

template <ErrorRateModel Model>
double type1_rate(const DichotomousPrevalence& prev, const Model& model, double alpha) {
    return prev.effect_null ? model.rejection_probability(*prev.effect_null, alpha) : alpha;
}

inline void check_finite(double v, double alpha, const char* what) {
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << what << " is not finite at alpha=" << alpha;
        throw NumericalError(msg.str());
    }
}

template <ErrorRateModel Model>
void check_continuous(const ContinuousPrevalence& prev, const Model& model) {
    prev.validate();
    require_contract(std::abs(prev.boundary - model.boundary()) <= 1e-12 && prev.direction == model.direction(),
                     "continuous prevalence boundary/direction do not match the test model");
}

// Integration panels for the non-meaningful (E) and meaningful (R - E)
// regions: the prevalence support clipped to the model's domain and split at
// the boundary.
struct Regions {
    Interval null_region{};
    Interval meaningful_region{};
};

template <ErrorRateModel Model>
Regions regions(const ContinuousPrevalence& prev, const Model& model) {
    const Interval support = prev.support();
    const Interval domain = model.effect_domain();
    const double lo = std::max(support.lo, domain.lo);
    const double hi = std::min(support.hi, domain.hi);
    const double m = std::clamp(model.boundary(), lo, hi);
    if (model.direction() == Direction::Above) return {{lo, m}, {m, hi}};
    return {{m, hi}, {lo, m}};
}

}  // namespace detail

// Expected error cost of one test at level alpha.
template <ErrorRateModel Model>
double cost_single_dichotomous(const DichotomousPrevalence& prev, const Model& model, double alpha, double c0,
                               double c1) {
    detail::check_dichotomous(prev, model);
    const double beta = prev.P > 0.0 ? 1.0 - model.rejection_probability(prev.effect_true, alpha) : 0.0;
    const double cost = c0 * (1.0 - prev.P) * detail::type1_rate(prev, model, alpha) + c1 * prev.P * beta;
    detail::check_finite(cost, alpha, "dichotomous cost");
    return cost;
}

// Expected Type I and Type II costs of one test in a continuous scenario.
struct ErrorCostTerms {
    double type1 = 0.0;
    double type2 = 0.0;
    [[nodiscard]] double total() const noexcept { return type1 + type2; }
};

template <ErrorRateModel Model>
ErrorCostTerms continuous_error_costs(const ContinuousPrevalence& prev, const Model& model, double alpha,
                                      const EffectCosts& costs, const QuadratureOptions& opt = {}) {
    detail::check_continuous(prev, model);
    const auto curve = model.rejection_curve(alpha);
    const auto reg = detail::regions(prev, model);
    const auto type1 = integrate(
        [&](double e) { return costs.type1(e) * curve(e) * density_at(prev, e); }, reg.null_region, opt);
    const auto type2 = integrate(
        [&](double e) { return costs.type2(e) * (1.0 - curve(e)) * density_at(prev, e); }, reg.meaningful_region,
        opt);
    detail::check_finite(type1.value + type2.value, alpha, "continuous cost");
    return {type1.value, type2.value};
}

template <ErrorRateModel Model>
double cost_single_continuous(const ContinuousPrevalence& prev, const Model& model, double alpha,
                              const EffectCosts& costs, const QuadratureOptions& opt = {}) {
    return continuous_error_costs(prev, model, alpha, costs, opt).total();
}

namespace detail {

inline std::optional<double> proportional_ratio(const CostSchedule& sched, double tol = 1e-9) {
    if (sched.top_c0() <= 0.0) return std::nullopt;
    const double r = sched.top_c1() / sched.top_c0();
    for (std::size_t m = 0; m < sched.size(); ++m) {
        const double expect = r * sched.c0()[m];
        if (std::abs(sched.c1()[m] - expect) > tol * std::max(1.0, std::abs(expect))) return std::nullopt;
    }
    return r;
}

}  // namespace detail

// Weights dC0(m) / C0(k) under which the multi-alpha cost is the weighted
// average of the single-level costs. Requires C1 = r C0 at every level.
inline std::vector<double> weighted_decomposition(const AlphaLadder& ladder, const CostSchedule& sched) {
    detail::require_contract(ladder.size() == sched.size(), "ladder and cost schedule lengths differ");
    if (!detail::proportional_ratio(sched)) {
        std::ostringstream msg;
        msg << "cost schedule is not proportional (C1(m) = r C0(m) violated):";
        for (std::size_t m = 0; m < sched.size(); ++m) {
            msg << " C1/C0 at level " << (m + 1) << " = " << (sched.c0()[m] > 0 ? sched.c1()[m] / sched.c0()[m] : NAN)
                << ";";
        }
        throw ContractError(msg.str());
    }
    std::vector<double> w;
    for (std::size_t m = 0; m < sched.size(); ++m) w.push_back(sched.delta_c0(m) / sched.top_c0());
    return w;
}

template <ErrorRateModel Model>
CostBreakdown cost_multi_dichotomous(const DichotomousPrevalence& prev, const Model& model, const AlphaLadder& ladder,
                                     const CostSchedule& sched) {
    detail::require_contract(ladder.size() == sched.size(), "ladder and cost schedule lengths differ");
    detail::check_dichotomous(prev, model);

    CompensatedSum omega0, omega1;
    CostBreakdown out;
    for (std::size_t m = 0; m < ladder.size(); ++m) {
        const double a = ladder[m];
        const double beta = prev.P > 0.0 ? 1.0 - model.rejection_probability(prev.effect_true, a) : 0.0;
        omega0.add((1.0 - prev.P) * sched.delta_c0(m) * detail::type1_rate(prev, model, a));
        omega1.add(prev.P * sched.delta_c1(m) * beta);
        out.per_level.push_back(cost_single_dichotomous(prev, model, a, sched.top_c0(), sched.top_c1()));
    }
    out.omega0 = omega0.value();
    out.omega1 = omega1.value();
    out.total = out.omega0 + out.omega1;
    detail::check_finite(out.total, ladder.least_stringent(), "multi-alpha cost");
    if (detail::proportional_ratio(sched)) out.weights = weighted_decomposition(ladder, sched);
    return out;
}

// Sum of the per-level differences: the costs of the decision taken at the
// most stringent level.
inline EffectCosts top_level_costs(const LevelCosts& levels) {
    auto deltas = levels.deltas;
    return {[deltas](double e) {
                CompensatedSum s;
                for (const auto& d : deltas) s.add(d.type1(e));
                return s.value();
            },
            [deltas](double e) {
                CompensatedSum s;
                for (const auto& d : deltas) s.add(d.type2(e));
                return s.value();
            }};
}

template <ErrorRateModel Model>
CostBreakdown cost_multi_continuous(const ContinuousPrevalence& prev, const Model& model, const AlphaLadder& ladder,
                                    const LevelCosts& levels, const QuadratureOptions& opt = {}) {
    detail::require_contract(ladder.size() == levels.deltas.size(), "ladder and level cost lengths differ");
    if (levels.weights) {
        detail::require_contract(levels.weights->size() == ladder.size(), "ladder and weight lengths differ");
    }

    const EffectCosts top = top_level_costs(levels);
    CompensatedSum omega0, omega1;
    CostBreakdown out;
    for (std::size_t m = 0; m < ladder.size(); ++m) {
        const auto terms = continuous_error_costs(prev, model, ladder[m], levels.deltas[m], opt);
        omega0.add(terms.type1);
        omega1.add(terms.type2);
        out.per_level.push_back(cost_single_continuous(prev, model, ladder[m], top, opt));
    }
    out.omega0 = omega0.value();
    out.omega1 = omega1.value();
    out.total = out.omega0 + out.omega1;
    out.weights = levels.weights;
    return out;
}

}  // namespace multalpha
