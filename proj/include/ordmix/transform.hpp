#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ordmix/baseline.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/random.hpp"

namespace ordmix {

/// psi(t) = t + lambda t (1 - t): the unit-interval distortion F -> G_lambda[F].
inline double psi(double lambda, double t)
{
    detail::require_lambda(lambda);
    detail::require_probability(t);
    return t + lambda * t * (1.0 - t);
}

/// Inverse of psi in the conjugate form 2s / (1 + lambda + sqrt((1+lambda)^2 - 4 lambda s)).
///
/// This form has no 0/0 at lambda = 0 and no cancellation for small |lambda|.
/// The radicand is clamped at zero: it is exactly zero at (lambda, s) = (1, 1)
/// and rounding can push it slightly negative there.
inline double psi_inv(double lambda, double s)
{
    detail::require_lambda(lambda);
    detail::require_probability(s);
    if (s == 0.0)
        return 0.0;
    const double a = 1.0 + lambda;
    const double radicand = std::max(0.0, a * a - 4.0 * lambda * s);
    const double t = 2.0 * s / (a + std::sqrt(radicand));
    return std::clamp(t, 0.0, 1.0);
}

/// Bernoulli selector of the stochastic mixture: the sample minimum is taken
/// with probability (1 + lambda) / 2, the maximum otherwise.
struct MixtureIndicator {
    double p_min;

    static MixtureIndicator from_lambda(double lambda)
    {
        detail::require_lambda(lambda);
        return MixtureIndicator{0.5 * (1.0 + lambda)};
    }

    double p_max() const noexcept { return 1.0 - p_min; }

    /// true selects the minimum.
    bool draw(Stream& rng) const noexcept { return rng.bernoulli(p_min); }
};

/// G_lambda[F](x) = F(x) {1 + lambda (1 - F(x))}: the law of a (1+lambda)/2 :
/// (1-lambda)/2 mixture of the minimum and maximum of two iid draws from F.
///
/// Everything is evaluated from F and its survival S = 1 - F separately, using
/// 1 - lambda F = S + (1 - lambda) F, so upper tails keep full relative precision.
template <Univariate Base>
class Transformed {
public:
    Transformed(Base base, double lambda) : base_(std::move(base)), lambda_(lambda)
    {
        detail::require_lambda(lambda);
    }

    const Base& base() const noexcept { return base_; }
    double lambda() const noexcept { return lambda_; }
    double lower() const { return base_.lower(); }
    double upper() const { return base_.upper(); }
    std::string name() const { return "G[" + detail::short_num(lambda_) + "](" + base_.name() + ")"; }

    MixtureIndicator indicator() const { return MixtureIndicator::from_lambda(lambda_); }

    double cdf(double x) const
    {
        const double f = base_.cdf(x);
        const double s = ordmix::survival(base_, x);
        return std::clamp(f * (1.0 + lambda_ * s), 0.0, 1.0);
    }

    double survival(double x) const
    {
        const double f = base_.cdf(x);
        const double s = ordmix::survival(base_, x);
        return std::clamp(s * (s + (1.0 - lambda_) * f), 0.0, 1.0);
    }

    double pdf(double x) const
        requires HasDensity<Base>
    {
        const double f = base_.cdf(x);
        const double s = ordmix::survival(base_, x);
        return std::max(0.0, base_.pdf(x) * (1.0 + lambda_ * (s - f)));
    }

    /// h_F(x) (1 + lambda S(x) / (1 - lambda F(x))).
    double hazard(double x) const
        requires HasDensity<Base>
    {
        const double f = base_.cdf(x);
        const double s = ordmix::survival(base_, x);
        const double one_minus_lf = s + (1.0 - lambda_) * f;
        if (!(s > 0.0) || !(one_minus_lf > 0.0))
            throw SupportExhausted("transformed survival is zero at x = " + std::to_string(x));
        return ordmix::hazard(base_, x) * (1.0 + lambda_ * s / one_minus_lf);
    }

    /// Above the median the upper tail is inverted instead, using
    /// 1 - psi_lambda^{-1}(q) = psi_{-lambda}^{-1}(1 - q).
    double quantile(double q) const
    {
        detail::require_probability(q);
        if (lambda_ == 0.0)
            return ordmix::quantile(base_, q);
        if constexpr (HasUpperQuantile<Base>) {
            if (q > 0.5)
                return base_.upper_quantile(psi_inv(-lambda_, 1.0 - q));
        }
        return ordmix::quantile(base_, psi_inv(lambda_, q));
    }

    double upper_quantile(double p) const
    {
        detail::require_probability(p);
        return ordmix::upper_quantile(base_, psi_inv(-lambda_, p));
    }

    double median() const { return quantile(0.5); }

    /// beta(t) = lambda S(t) / (1 - lambda F(t)): the mixing parameter of the
    /// residual life at age t.
    double residual_mix_parameter(double t) const
    {
        const double f = base_.cdf(t);
        const double s = ordmix::survival(base_, t);
        const double one_minus_lf = s + (1.0 - lambda_) * f;
        if (!(s > 0.0) || !(one_minus_lf > 0.0))
            throw SupportExhausted("transformed survival is zero at t = " + std::to_string(t));
        return std::clamp(lambda_ * s / one_minus_lf, -1.0, 1.0);
    }

    /// P(X > t + x | X > t) = S_G(x + t) / S_G(t).
    double residual_life_survival(double t, double x) const
    {
        if (!(x >= 0.0))
            throw DomainError("residual time must be >= 0");
        const double at_t = survival(t);
        if (!(at_t > 0.0))
            throw SupportExhausted("transformed survival is zero at t = " + std::to_string(t));
        return survival(x + t) / at_t;
    }

    /// Exact draws through the order-statistics mixture: two baseline draws by
    /// inverse transform, then the minimum or the maximum per the indicator.
    std::vector<double> sample(std::size_t n, Stream& rng) const
    {
        const MixtureIndicator z = indicator();
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x1 = ordmix::quantile(base_, rng.uniform());
            const double x2 = ordmix::quantile(base_, rng.uniform());
            out.push_back(z.draw(rng) ? std::min(x1, x2) : std::max(x1, x2));
        }
        return out;
    }

    /// Draws through the transformed quantile; an independent route to the
    /// same law as sample().
    std::vector<double> sample_inverse(std::size_t n, Stream& rng) const
    {
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(quantile(rng.uniform()));
        return out;
    }

private:
    Base base_;
    double lambda_;
};

/// Residual life X - t | X > t of a baseline, as a distribution on [0, upper - t).
template <Univariate Base>
class ResidualLife {
public:
    ResidualLife(Base base, double age) : base_(std::move(base)), age_(age)
    {
        at_age_ = ordmix::survival(base_, age_);
        if (!(at_age_ > 0.0))
            throw SupportExhausted("survival is zero at age " + std::to_string(age));
        cdf_age_ = base_.cdf(age_);
    }

    double age() const noexcept { return age_; }
    double lower() const noexcept { return 0.0; }
    double upper() const { return base_.upper() - age_; }
    std::string name() const { return base_.name() + "|>" + detail::short_num(age_); }

    double cdf(double x) const
    {
        if (x <= 0.0)
            return 0.0;
        return std::clamp((base_.cdf(x + age_) - cdf_age_) / at_age_, 0.0, 1.0);
    }

    double survival(double x) const
    {
        if (x <= 0.0)
            return 1.0;
        return std::clamp(ordmix::survival(base_, x + age_) / at_age_, 0.0, 1.0);
    }

    double pdf(double x) const
        requires HasDensity<Base>
    {
        return x < 0.0 ? 0.0 : base_.pdf(x + age_) / at_age_;
    }

private:
    Base base_;
    double age_;
    double at_age_ = 1.0;
    double cdf_age_ = 0.0;
};

/// Marshall-Olkin proportional-odds cdf F / (1 - (1 - alpha) S), evaluated as
/// F / (F + alpha S).
template <Univariate Base>
double proportional_odds_cdf(const Base& base, double alpha, double x)
{
    detail::require_positive(alpha, "alpha");
    const double f = base.cdf(x);
    const double s = ordmix::survival(base, x);
    if (f == 0.0)
        return 0.0;
    return std::clamp(f / (f + alpha * s), 0.0, 1.0);
}

} // namespace ordmix
