#pragma once
// Special functions behind every error-rate and quantile computation:
// standard normal CDF/quantile, regularized incomplete beta, Student t
// CDF/quantile and the surprisal (-log2) of a probability.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "multalpha/error.hpp"

namespace multalpha {

// Thin validated wrappers. Functions below accept plain doubles and check
// their own preconditions; these exist for signatures that want the intent
// spelled out.
struct Probability {
    double value;
    explicit Probability(double v) : value(v) {
        detail::require_domain(v >= 0.0 && v <= 1.0, "probability outside [0,1]: " + std::to_string(v));
    }
    operator double() const noexcept { return value; }
};

struct DegreesOfFreedom {
    double value;
    explicit DegreesOfFreedom(double v) : value(v) {
        detail::require_domain(v > 0.0 && std::isfinite(v),
                               "degrees of freedom must be positive: " + std::to_string(v));
    }
    operator double() const noexcept { return value; }
};

inline double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Phi(x) through the complementary error function; erfc keeps full relative
// precision in the lower tail.
inline double normal_cdf(double x) {
    detail::require_domain(std::isfinite(x), "normal_cdf: non-finite argument");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Wichura's AS241 (PPND16), relative accuracy about 1e-16, followed by one
// Halley step against normal_cdf.
inline double normal_quantile(double p) {
    detail::require_domain(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0,1), got " + std::to_string(p));

    const double q = p - 0.5;
    double x;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            ((((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                  45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
               133.14166789178437745) * r + 3.387132872796366608));
        const double den =
            ((((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                  21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
               42.313330701600911252) * r + 1.0));
        x = q * num / den;
    } else {
        double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
        double num, den;
        if (r <= 5.0) {
            r -= 1.6;
            num = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                       1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                    4.6303378461565452959) * r + 1.42343711074968357734);
            den = (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                       0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                    2.05319162663775882187) * r + 1.0);
        } else {
            r -= 5.0;
            num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                       0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                    5.4637849111641143699) * r + 6.6579046435011037772);
            den = (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                       7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                    0.59983220655588793769) * r + 1.0);
        }
        x = num / den;
        if (q < 0.0) x = -x;
    }

    // Halley refinement; the residual is taken on the tail that keeps precision.
    const double e = (x <= 0.0) ? normal_cdf(x) - p : (1.0 - p) - normal_cdf(-x);
    const double u = (x <= 0.0 ? e : -e) / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

namespace detail {

// Continued fraction for I_x(a,b) (modified Lentz), valid for x < (a+1)/(a+b+2).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 100000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h;
    }
    throw NumericalError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                         ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

}  // namespace detail

inline double regularized_incomplete_beta(double a, double b, double x) {
    detail::require_domain(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
                           "regularized_incomplete_beta: shape parameters must be positive");
    detail::require_domain(x >= 0.0 && x <= 1.0, "regularized_incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
    return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

inline double t_pdf(double x, double df) {
    detail::require_domain(df > 0.0, "t_pdf: degrees of freedom must be positive");
    const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                            0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

inline double t_cdf(double x, double df) {
    detail::require_domain(df > 0.0 && !std::isnan(df), "t_cdf: degrees of freedom must be positive");
    detail::require_domain(std::isfinite(x), "t_cdf: non-finite argument");
    if (x == 0.0) return 0.5;
    const double x2 = x * x;
    // Lower-tail mass beyond |x|: 0.5 * I_{df/(df+x^2)}(df/2, 1/2). For small x^2
    // the complementary form avoids cancellation in df/(df+x^2).
    double tail;
    if (x2 < df) {
        tail = 0.5 * (1.0 - regularized_incomplete_beta(0.5, 0.5 * df, x2 / (df + x2)));
    } else {
        tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + x2));
    }
    return x > 0.0 ? 1.0 - tail : tail;
}

// Safeguarded Newton iteration inside a bisection bracket.
inline double t_quantile(double p, double df) {
    detail::require_domain(p > 0.0 && p < 1.0, "t_quantile: p must lie in (0,1), got " + std::to_string(p));
    detail::require_domain(df > 0.0 && std::isfinite(df), "t_quantile: degrees of freedom must be positive");
    if (p == 0.5) return 0.0;

    // Solve on the lower tail and reflect, so residuals stay small numbers.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;

    double hi = 0.0;
    double lo = -1.0;
    while (t_cdf(lo, df) > target) {
        hi = lo;
        lo *= 2.0;
        if (lo < -1e300) throw NumericalError("t_quantile: failed to bracket root");
    }

    double x = std::max(lo, std::min(hi, normal_quantile(target)));
    for (int iter = 0; iter < 200; ++iter) {
        const double f = t_cdf(x, df) - target;
        if (f == 0.0) break;
        if (f > 0.0) hi = x; else lo = x;

        const double dens = t_pdf(x, df);
        double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 1e-14 * std::max(1.0, std::abs(x)) || (hi - lo) <= 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    return upper ? -x : x;
}

// -log2(alpha): information carried by a rejection at level alpha, in bits.
inline double surprisal(double alpha) {
    detail::require_domain(alpha > 0.0 && alpha <= 1.0, "surprisal: alpha must lie in (0,1], got " + std::to_string(alpha));
    return -std::log2(alpha);
}

}  // namespace multalpha
