#pragma once
// Error-rate models: the probability that a one-sided test rejects the test
// hypothesis ("effect is not meaningful") as a function of the true effect.
// For effects outside the meaningful region this is the Type I rate beta0,
// inside it one minus the Type II rate beta1.

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <utility>

#include "multalpha/error.hpp"
#include "multalpha/quadrature.hpp"
#include "multalpha/specfun.hpp"

namespace multalpha {

// Side of the boundary M on which effects are practically meaningful.
enum class Direction { Above, Below };

enum class DfMode { Normal, StudentT };

inline bool is_meaningful(double effect, double boundary, Direction dir) noexcept {
    return dir == Direction::Above ? effect > boundary : effect < boundary;
}

namespace detail {

inline void require_alpha(double alpha) {
    require_domain(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1), got " + std::to_string(alpha));
}

}  // namespace detail

// Two equal groups.
class TwoGroupDesign {
public:
    explicit TwoGroupDesign(int n_total) : n_total_(n_total) {
        detail::require_contract(n_total >= 4 && n_total % 2 == 0,
                                 "two-group design needs an even total of at least 4, got " + std::to_string(n_total));
    }

    [[nodiscard]] int n_total() const noexcept { return n_total_; }
    [[nodiscard]] int group_size() const noexcept { return n_total_ / 2; }

private:
    int n_total_;
};

// Any model the cost engine can integrate against.
template <class M>
concept ErrorRateModel = requires(const M& m, double e, double alpha) {
    { m.rejection_probability(e, alpha) } -> std::convertible_to<double>;
    { m.boundary() } -> std::convertible_to<double>;
    { m.direction() } -> std::same_as<Direction>;
    { m.effect_domain() } -> std::same_as<Interval>;
    { m.rejection_curve(alpha)(e) } -> std::convertible_to<double>;
};

// Standardized mean difference between two equal groups; standard error
// 2/sqrt(n_total). The sample size may be real-valued so that averages over
// research teams with different planned sizes stay smooth.
class StandardizedEffectModel {
public:
    StandardizedEffectModel(double boundary, double n_total, Direction dir = Direction::Above,
                            DfMode mode = DfMode::Normal)
        : boundary_(boundary), n_total_(n_total), direction_(dir), mode_(mode) {
        detail::require_domain(std::isfinite(boundary), "boundary must be finite");
        detail::require_contract(n_total > 2.0, "standardized model needs n_total > 2");
    }

    StandardizedEffectModel(double boundary, TwoGroupDesign design, Direction dir = Direction::Above,
                            DfMode mode = DfMode::Normal)
        : StandardizedEffectModel(boundary, static_cast<double>(design.n_total()), dir, mode) {}

    [[nodiscard]] double boundary() const noexcept { return boundary_; }
    [[nodiscard]] Direction direction() const noexcept { return direction_; }
    [[nodiscard]] DfMode df_mode() const noexcept { return mode_; }
    [[nodiscard]] double n_total() const noexcept { return n_total_; }
    [[nodiscard]] double degrees_of_freedom() const noexcept { return n_total_ - 2.0; }
    [[nodiscard]] double standard_error() const noexcept { return 2.0 / std::sqrt(n_total_); }
    [[nodiscard]] Interval effect_domain() const noexcept {
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }

    // Critical value of the standardized statistic, z_{1-alpha} or t_{1-alpha, n-2}.
    [[nodiscard]] double critical_value(double alpha) const {
        detail::require_alpha(alpha);
        return mode_ == DfMode::Normal ? normal_quantile(1.0 - alpha) : t_quantile(1.0 - alpha, degrees_of_freedom());
    }

    [[nodiscard]] double rejection_probability(double e, double alpha) const {
        return rejection_probability_at(e, critical_value(alpha));
    }

    // e -> rejection probability at a fixed alpha.
    [[nodiscard]] auto rejection_curve(double alpha) const {
        return [m = *this, c = critical_value(alpha)](double e) { return m.rejection_probability_at(e, c); };
    }

    // Effect value at which the observed statistic crosses the critical value.
    [[nodiscard]] double critical_effect(double alpha) const {
        const double offset = critical_value(alpha) * standard_error();
        return direction_ == Direction::Above ? boundary_ + offset : boundary_ - offset;
    }

    [[nodiscard]] double sampling_sd(double /*e*/) const noexcept { return standard_error(); }

    [[nodiscard]] double rejection_probability_at(double e, double critical) const {
        const double shift = direction_ == Direction::Above ? e - boundary_ : boundary_ - e;
        const double arg = shift / standard_error() - critical;
        if (mode_ == DfMode::Normal) return normal_cdf(arg);
        return t_cdf(arg, degrees_of_freedom());
    }

private:
    double boundary_;
    double n_total_;
    Direction direction_;
    DfMode mode_;
};

// How `n` in the risk-difference standard deviations is read. TotalN uses the
// total number of subjects (two groups of 1000 -> n = 2000); PerGroupN plugs
// the group size into the same expression, doubling the variance.
enum class RiskDiffVariant { TotalN, PerGroupN };

struct RiskDiffSds {
    double s;   // at the boundary r2 = r1 + M
    double ss;  // at the true risk r2
};

// Two-group risk-difference test of rd = r2 - r1 against a negative
// break-even boundary M; meaningful effects are risk reductions beyond M.
class RiskDifferenceModel {
public:
    RiskDifferenceModel(double r1, double boundary, TwoGroupDesign design,
                        RiskDiffVariant variant = RiskDiffVariant::TotalN)
        : r1_(r1), boundary_(boundary), design_(design), variant_(variant) {
        detail::require_domain(r1 > 0.0 && r1 < 1.0, "r1 must lie in (0,1)");
        detail::require_domain(r1 + boundary > 0.0 && r1 + boundary < 1.0, "r1 + M must lie in (0,1)");
        const double v = r1_ * (1.0 - r1_) + (r1_ + boundary_) * (1.0 - r1_ - boundary_);
        s_ = std::sqrt(2.0 * v / formula_n());
    }

    [[nodiscard]] double r1() const noexcept { return r1_; }
    [[nodiscard]] double boundary() const noexcept { return boundary_; }
    [[nodiscard]] Direction direction() const noexcept { return Direction::Below; }
    [[nodiscard]] const TwoGroupDesign& design() const noexcept { return design_; }
    [[nodiscard]] RiskDiffVariant variant() const noexcept { return variant_; }
    // r2 must stay a probability.
    [[nodiscard]] Interval effect_domain() const noexcept { return {-r1_, 1.0 - r1_}; }

    [[nodiscard]] double formula_n() const noexcept {
        return variant_ == RiskDiffVariant::TotalN ? design_.n_total() : design_.group_size();
    }

    [[nodiscard]] RiskDiffSds sds(double r2) const {
        detail::require_domain(r2 >= 0.0 && r2 <= 1.0, "r2 outside [0,1]: " + std::to_string(r2));
        const double ss = std::sqrt(2.0 * (r1_ * (1.0 - r1_) + r2 * (1.0 - r2)) / formula_n());
        return {s_, ss};
    }

    // Probability that the observed difference falls below the expected
    // critical value M + s z_alpha when the true difference is rd.
    [[nodiscard]] double rejection_probability(double rd, double alpha) const {
        detail::require_alpha(alpha);
        return rejection_probability_at(rd, normal_quantile(alpha));
    }

    [[nodiscard]] auto rejection_curve(double alpha) const {
        detail::require_alpha(alpha);
        return [m = *this, z = normal_quantile(alpha)](double rd) { return m.rejection_probability_at(rd, z); };
    }

    [[nodiscard]] double critical_effect(double alpha) const {
        detail::require_alpha(alpha);
        return boundary_ + s_ * normal_quantile(alpha);
    }

    [[nodiscard]] double sampling_sd(double rd) const { return sds(r1_ + rd).ss; }

    [[nodiscard]] double rejection_probability_at(double rd, double z_alpha) const {
        const auto [s, ss] = sds(r1_ + rd);
        if (ss == 0.0) return (rd < boundary_ + s * z_alpha) ? 1.0 : 0.0;
        return normal_cdf((-rd + boundary_ + s * z_alpha) / ss);
    }

private:
    double r1_;
    double boundary_;
    TwoGroupDesign design_;
    RiskDiffVariant variant_;
    double s_ = 0.0;
};

inline RiskDiffSds riskdiff_sds(const RiskDifferenceModel& model, double r2) {
    detail::require_domain(r2 > 0.0 && r2 < 1.0, "riskdiff_sds: r2 must lie in (0,1)");
    return model.sds(r2);
}

// Type II error rate beta(d, alpha) of the risk-difference test at true
// difference rd (d = rd - M).
inline double beta_riskdiff(const RiskDifferenceModel& model, double rd, double alpha) {
    const double r2 = model.r1() + rd;
    detail::require_domain(r2 > 0.0 && r2 < 1.0, "beta_riskdiff: r2 = r1 + rd must lie in (0,1)");
    return 1.0 - model.rejection_probability(rd, alpha);
}

template <ErrorRateModel Model>
double rejection_probability(const Model& model, double e, double alpha) {
    return model.rejection_probability(e, alpha);
}

// Real-valued per-group size 2 (z_{1-alpha} + z_power)^2 / delta^2.
inline double group_size_exact(double delta, double alpha, double power) {
    detail::require_domain(delta > 0.0 && std::isfinite(delta), "sample size: delta must be positive");
    detail::require_alpha(alpha);
    detail::require_domain(power > 0.0 && power < 1.0, "sample size: power must lie in (0,1)");
    const double z = normal_quantile(1.0 - alpha) + normal_quantile(power);
    return 2.0 * z * z / (delta * delta);
}

// Per-group sample size for a one-sided two-sample z test, rounded up and
// floored at 2.
inline int required_group_size(double delta, double alpha, double power) {
    const double n = group_size_exact(delta, alpha, power);
    detail::require_domain(n < 1e9, "sample size overflow");
    return std::max(2, static_cast<int>(std::ceil(n - 1e-9)));
}

}  // namespace multalpha
