#pragma once
// Cost-optimal single alpha and the surprisal mappings between cost
// schedules, alpha ladders and decision scale.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "multalpha/error.hpp"
#include "multalpha/quadrature.hpp"
#include "multalpha/scenario.hpp"
#include "multalpha/specfun.hpp"

namespace multalpha {

struct TracePoint {
    double alpha;
    double cost;
};

struct Optimum {
    double alpha_star = 0.0;
    double cost_star = 0.0;
    std::vector<TracePoint> trace;  // the coarse grid, increasing in alpha

    // Two decimals, as printed in cost tables.
    [[nodiscard]] double rounded() const { return std::round(alpha_star * 100.0) / 100.0; }
};

struct SearchOptions {
    Interval bounds{1e-6, 0.5};
    int resolution = 200;
    double alpha_tol = 1e-4;
};

namespace detail {

template <class F>
double checked_cost(F& costfn, double alpha) {
    const double c = costfn(alpha);
    if (!std::isfinite(c)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "cost function returned " << c << " at alpha=" << alpha;
        throw NumericalError(msg.str());
    }
    return c;
}

}  // namespace detail

// Log-spaced grid over the bounds, then golden-section search in log alpha
// over the bracket around the best grid point. Ties go to the smaller alpha.
template <class F>
Optimum optimal_alpha(F&& costfn, const SearchOptions& opt = {}) {
    const auto [lo, hi] = opt.bounds;
    detail::require_contract(lo > 0.0 && hi <= 0.5 && lo <= hi, "search bounds must lie in (0, 0.5]");
    detail::require_contract(opt.resolution >= 2 || lo == hi, "search resolution must be at least 2");

    Optimum out;
    if (lo == hi) {
        out.alpha_star = lo;
        out.cost_star = detail::checked_cost(costfn, lo);
        out.trace.push_back({lo, out.cost_star});
        return out;
    }

    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    const int n = opt.resolution;
    out.trace.reserve(n);
    std::size_t best = 0;
    for (int i = 0; i < n; ++i) {
        const double a = i == n - 1 ? hi : std::exp(llo + (lhi - llo) * i / (n - 1));
        out.trace.push_back({a, detail::checked_cost(costfn, a)});
        if (out.trace[i].cost < out.trace[best].cost) best = i;
    }
    out.alpha_star = out.trace[best].alpha;
    out.cost_star = out.trace[best].cost;

    // Bracket [a, b] in log alpha; stop when the bracket is below alpha_tol in alpha.
    double a = std::log(out.trace[best == 0 ? 0 : best - 1].alpha);
    double b = std::log(out.trace[std::min<std::size_t>(best + 1, n - 1)].alpha);
    constexpr double kInvPhi = 1.0 / std::numbers::phi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = detail::checked_cost(costfn, std::exp(x1));
    double f2 = detail::checked_cost(costfn, std::exp(x2));
    for (int iter = 0; iter < 200 && std::exp(b) - std::exp(a) > opt.alpha_tol * 1e-2; ++iter) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = detail::checked_cost(costfn, std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = detail::checked_cost(costfn, std::exp(x2));
        }
    }
    const double xr = f1 <= f2 ? x1 : x2;
    const double fr = std::min(f1, f2);
    if (fr < out.cost_star) {
        out.alpha_star = std::clamp(std::exp(xr), lo, hi);
        out.cost_star = fr;
    }
    return out;
}

// a_m = 2^{log2(a_1) C0(m) / C0(1)}: the ladder whose surprisal grows in
// proportion to the Type I costs.
inline AlphaLadder ladder_from_costs(double alpha1, std::span<const double> c0) {
    detail::require_domain(alpha1 > 0.0 && alpha1 < 1.0, "ladder_from_costs: alpha1 must lie in (0,1)");
    detail::require_domain(!c0.empty() && c0[0] > 0.0, "ladder_from_costs: first cost must be positive");
    std::vector<double> levels;
    double prev = 0.0;
    for (double c : c0) {
        detail::require_domain(std::isfinite(c) && c >= prev, "ladder_from_costs: costs must be nondecreasing");
        prev = c;
        levels.push_back(std::exp2(std::log2(alpha1) * c / c0[0]));
    }
    return AlphaLadder(std::move(levels));
}

// q(m) = q(1) log2(a_m) / log2(a_1).
inline std::vector<double> population_scale(double q1, const AlphaLadder& ladder) {
    detail::require_domain(q1 > 0.0 && std::isfinite(q1), "population_scale: q1 must be positive");
    const double s1 = surprisal(ladder.least_stringent());
    std::vector<double> q;
    for (double a : ladder.levels()) q.push_back(q1 * surprisal(a) / s1);
    return q;
}

}  // namespace multalpha
