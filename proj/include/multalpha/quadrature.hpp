#pragma once
// Adaptive Gauss-Kronrod integration with an explicit error contract.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "multalpha/error.hpp"

namespace multalpha {

struct Interval {
    double lo;
    double hi;

    [[nodiscard]] bool empty() const noexcept { return !(hi > lo); }
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    unsigned max_depth = 18;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

// Integrates f over [lo, hi]. Throws NumericalError when the estimated error
// exceeds max(abs_tol, rel_tol * L1).
template <class F>
QuadratureResult integrate(F&& f, Interval range, const QuadratureOptions& opt = {}) {
    if (range.empty()) return {};
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double error = 0.0;
    double l1 = 0.0;
    // Boost refines until error <= tol * L1; translate the absolute tolerance
    // with a single-panel L1 estimate so tiny integrals stop early.
    GK::integrate(f, range.lo, range.hi, 0, 0.0, &error, &l1);
    const double tol = l1 > 0.0 ? std::max(opt.rel_tol, 0.5 * opt.abs_tol / l1) : opt.rel_tol;
    const double value = GK::integrate(f, range.lo, range.hi, opt.max_depth, tol, &error, &l1);
    if (!std::isfinite(value) || error > std::max(opt.abs_tol, opt.rel_tol * l1)) {
        std::ostringstream msg;
        msg << "quadrature did not converge on [" << range.lo << ", " << range.hi << "]: value=" << value
            << " error_estimate=" << error << " L1=" << l1;
        throw NumericalError(msg.str());
    }
    return {value, error};
}

// Sum of integrals over consecutive panels [b0,b1], [b1,b2], ...
template <class F>
QuadratureResult integrate_panels(F&& f, const std::vector<double>& breaks, const QuadratureOptions& opt = {}) {
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto part = integrate(f, Interval{breaks[i], breaks[i + 1]}, opt);
        total.value += part.value;
        total.error += part.error;
    }
    return total;
}

// Neumaier compensated summation; terms are added in the order given.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace multalpha
