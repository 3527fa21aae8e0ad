#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ordmix/baseline.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/transform.hpp"

namespace ordmix {

namespace detail {

inline double factorial(int r)
{
    double out = 1.0;
    for (int k = 2; k <= r; ++k)
        out *= k;
    return out;
}

inline void require_moment_order(int r)
{
    if (r < 1)
        throw DomainError("moment order must be >= 1, got " + std::to_string(r));
}

} // namespace detail

/// Closed forms of G_lambda applied to Exp(theta):
/// G(x) = (1 - e^{-theta x})(1 + lambda e^{-theta x}), x >= 0.
class TransformedExponential {
public:
    TransformedExponential(double theta, double lambda) : theta_(theta), lambda_(lambda)
    {
        detail::require_positive(theta, "theta");
        detail::require_lambda(lambda);
    }

    double theta() const noexcept { return theta_; }
    double lambda() const noexcept { return lambda_; }
    double lower() const noexcept { return 0.0; }
    double upper() const noexcept { return inf; }
    std::string name() const
    {
        return "texp(" + detail::short_num(theta_) + "," + detail::short_num(lambda_) + ")";
    }

    /// The same law built through the generic engine.
    Transformed<Exponential> as_transform() const { return {Exponential(theta_), lambda_}; }

    double cdf(double x) const
    {
        if (x <= 0.0)
            return 0.0;
        const double e = std::exp(-theta_ * x);
        return -std::expm1(-theta_ * x) * (1.0 + lambda_ * e);
    }

    double survival(double x) const
    {
        if (x <= 0.0)
            return 1.0;
        const double e = std::exp(-theta_ * x);
        return e * denominator(x);
    }

    double pdf(double x) const
    {
        require_nonnegative(x);
        const double e = std::exp(-theta_ * x);
        return theta_ * e * std::max(0.0, (1.0 - lambda_) + 2.0 * lambda_ * e);
    }

    double hazard(double x) const
    {
        require_nonnegative(x);
        const double e = std::exp(-theta_ * x);
        return theta_ * ((1.0 - lambda_) + 2.0 * lambda_ * e) / denominator(x);
    }

    /// -(1/theta) ln((lambda - 1 + sqrt(D)) / (2 lambda)) with D = (1+lambda)^2 - 4 lambda q,
    /// rationalized to 2(1-q) / (1 - lambda + sqrt(D)) so lambda = 0 needs no special case.
    double quantile(double q) const
    {
        detail::require_probability(q);
        if (q == 1.0)
            return inf;
        const double a = 1.0 + lambda_;
        const double root = std::sqrt(std::max(0.0, a * a - 4.0 * lambda_ * q));
        return -std::log(2.0 * (1.0 - q) / (1.0 - lambda_ + root)) / theta_;
    }

    double median() const { return quantile(0.5); }
    double mean() const { return (2.0 - lambda_) / (2.0 * theta_); }

    /// Zero for lambda >= -1/3, interior maximizer otherwise.
    double mode() const
    {
        if (lambda_ >= -1.0 / 3.0)
            return 0.0;
        return -std::log((lambda_ - 1.0) / (4.0 * lambda_)) / theta_;
    }

    double raw_moment(int r) const
    {
        detail::require_moment_order(r);
        return (1.0 + lambda_ * (std::ldexp(1.0, -r) - 1.0)) * detail::factorial(r) / std::pow(theta_, r);
    }

    double mgf(double t) const
    {
        if (!(t < theta_))
            throw DomainError("mgf requires t < theta");
        return theta_ * (2.0 * theta_ - (1.0 + lambda_) * t) / ((theta_ - t) * (2.0 * theta_ - t));
    }

    /// beta(t) = lambda e^{-theta t} / (1 + lambda (e^{-theta t} - 1)).
    double residual_mix_parameter(double t) const
    {
        if (t <= 0.0)
            return lambda_;
        return lambda_ * std::exp(-theta_ * t) / denominator(t);
    }

    /// e^{-theta x} {1 + beta (e^{-theta x} - 1)}.
    double residual_life_survival(double t, double x) const
    {
        if (!(x >= 0.0))
            throw DomainError("residual time must be >= 0");
        const double beta = residual_mix_parameter(t);
        const double e = std::exp(-theta_ * x);
        return e * (1.0 + beta * std::expm1(-theta_ * x));
    }

    /// E(X - t | X > t) = (1 + lambda (e^{-theta t}/2 - 1)) / (theta (1 + lambda (e^{-theta t} - 1))).
    double mean_residual_life(double t) const
    {
        if (!(t >= 0.0))
            throw DomainError("mean residual life requires t >= 0");
        const double e = std::exp(-theta_ * t);
        return ((1.0 - lambda_) + 0.5 * lambda_ * e) / (theta_ * denominator(t));
    }

private:
    // 1 + lambda (e^{-theta x} - 1), written without cancellation for lambda near 1.
    double denominator(double x) const
    {
        return std::exp(-theta_ * x) + (1.0 - lambda_) * -std::expm1(-theta_ * x);
    }

    static void require_nonnegative(double x)
    {
        if (!(x >= 0.0))
            throw DomainError("transformed exponential requires x >= 0");
    }

    double theta_;
    double lambda_;
};

struct SkewLaplaceSummary {
    double mean;
    double variance;
    double skewness;
    double kurtosis;
};

/// G_lambda applied to the symmetric Laplace law with scale theta.
class SkewLaplace {
public:
    SkewLaplace(double theta, double lambda) : theta_(theta), lambda_(lambda)
    {
        detail::require_positive(theta, "theta");
        detail::require_lambda(lambda);
    }

    double theta() const noexcept { return theta_; }
    double lambda() const noexcept { return lambda_; }
    double lower() const noexcept { return -inf; }
    double upper() const noexcept { return inf; }
    std::string name() const
    {
        return "slaplace(" + detail::short_num(theta_) + "," + detail::short_num(lambda_) + ")";
    }

    Transformed<Laplace> as_transform() const { return {Laplace(theta_), lambda_}; }

    double cdf(double x) const
    {
        if (x <= 0.0) {
            const double h = 0.5 * std::exp(x / theta_);
            return h * (1.0 + lambda_ * (1.0 - h));
        }
        return 1.0 - upper_tail(x);
    }

    double survival(double x) const
    {
        if (x <= 0.0) {
            const double h = 0.5 * std::exp(x / theta_);
            return 1.0 - h * (1.0 + lambda_ * (1.0 - h));
        }
        return upper_tail(x);
    }

    double pdf(double x) const
    {
        if (x <= 0.0) {
            const double e = std::exp(x / theta_);
            return e / (2.0 * theta_) * ((1.0 + lambda_) - lambda_ * e);
        }
        const double e = std::exp(-x / theta_);
        return e / (2.0 * theta_) * ((1.0 - lambda_) + lambda_ * e);
    }

    double hazard(double x) const
    {
        const double s = survival(x);
        if (!(s > 0.0))
            throw SupportExhausted("survival is zero at x = " + std::to_string(x));
        return pdf(x) / s;
    }

    double quantile(double q) const
    {
        detail::require_probability(q);
        return as_transform().quantile(q);
    }

    double median() const { return quantile(0.5); }

    /// Odd r: r! lambda theta^r (1 - 2^{r+1}) / 2^{r+1}; even r: r! theta^r.
    double raw_moment(int r) const
    {
        detail::require_moment_order(r);
        const double base = detail::factorial(r) * std::pow(theta_, r);
        if (r % 2 == 0)
            return base;
        const double p = std::ldexp(1.0, r + 1);
        return base * lambda_ * (1.0 - p) / p;
    }

    double mgf(double t) const
    {
        const double u = theta_ * t;
        if (!(std::abs(u) < 1.0))
            throw DomainError("mgf requires |t| < 1/theta");
        return (1.0 - lambda_ * u) / (1.0 - u * u) + lambda_ * u / (4.0 - u * u);
    }

    /// Mean, variance, skewness and (non-excess) kurtosis.
    ///
    /// The variance is theta^2 (2 - 9 lambda^2 / 16) = E X^2 - (E X)^2; the skewness and
    /// kurtosis closed forms are standardized by this variance. 32 - 9 lambda^2 >= 23.
    SkewLaplaceSummary summary() const
    {
        const double l2 = lambda_ * lambda_;
        const double w = 32.0 - 9.0 * l2;
        return SkewLaplaceSummary{
            -0.75 * lambda_ * theta_,
            theta_ * theta_ * w / 16.0,
            18.0 * lambda_ * (4.0 + 3.0 * l2) / ((9.0 * l2 - 32.0) * std::sqrt(w)),
            (6144.0 - 243.0 * l2 * l2 - 2592.0 * l2) / (w * w),
        };
    }

private:
    // (1/2) e^{-x/theta} {1 - lambda (1 - (1/2) e^{-x/theta})}, x >= 0
    double upper_tail(double x) const
    {
        const double h = 0.5 * std::exp(-x / theta_);
        return h * ((1.0 - lambda_) + lambda_ * h);
    }

    double theta_;
    double lambda_;
};

} // namespace ordmix
