#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "ordmix/config.hpp"
#include "ordmix/errors.hpp"

namespace ordmix {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// A continuous univariate law. Only the cdf and the support are mandatory;
// density, survival, quantile and hazard are picked up when the type has them.
template <class D>
concept Univariate = requires(const D& d, double x) {
    { d.cdf(x) } -> std::convertible_to<double>;
    { d.lower() } -> std::convertible_to<double>;
    { d.upper() } -> std::convertible_to<double>;
    { d.name() } -> std::convertible_to<std::string>;
};

template <class D>
concept HasDensity = Univariate<D> && requires(const D& d, double x) {
    { d.pdf(x) } -> std::convertible_to<double>;
};

template <class D>
concept HasQuantile = Univariate<D> && requires(const D& d, double q) {
    { d.quantile(q) } -> std::convertible_to<double>;
};

/// Inverse of the survival function, x with S(x) = p; exact in the upper tail.
template <class D>
concept HasUpperQuantile = Univariate<D> && requires(const D& d, double p) {
    { d.upper_quantile(p) } -> std::convertible_to<double>;
};

template <class D>
concept HasSurvival = Univariate<D> && requires(const D& d, double x) {
    { d.survival(x) } -> std::convertible_to<double>;
};

/// Runtime capability query; type-erased distributions answer dynamically.
template <Univariate D>
bool has_density(const D& d)
{
    if constexpr (requires { { d.has_density() } -> std::convertible_to<bool>; })
        return d.has_density();
    else
        return HasDensity<D>;
}

template <Univariate D>
double survival(const D& d, double x)
{
    if constexpr (HasSurvival<D>)
        return d.survival(x);
    else
        return 1.0 - d.cdf(x);
}

/// Inverts a cdf by bracketed bisection. Infinite support ends are bracketed
/// by doubling outward from the finite end (or from 0).
template <Univariate D>
double bisection_quantile(const D& d, double q)
{
    detail::require_probability(q);
    double lo = d.lower();
    double hi = d.upper();
    if (q == 0.0)
        return lo;
    if (q == 1.0)
        return hi;

    if (!std::isfinite(lo)) {
        double step = 1.0;
        lo = std::isfinite(hi) ? hi - step : 0.0;
        while (d.cdf(lo) > q) {
            lo -= step;
            step *= 2.0;
        }
    }
    if (!std::isfinite(hi)) {
        double step = 1.0;
        hi = lo + step;
        while (d.cdf(hi) < q) {
            hi += step;
            step *= 2.0;
        }
    }

    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < config::bisection_max_iter; ++i) {
        mid = 0.5 * (lo + hi);
        const double c = d.cdf(mid);
        if (std::abs(c - q) <= config::bisection_prob_tol || mid == lo || mid == hi)
            break;
        (c < q ? lo : hi) = mid;
    }
    return mid;
}

template <Univariate D>
double quantile(const D& d, double q)
{
    if constexpr (HasQuantile<D>)
        return d.quantile(q);
    else
        return bisection_quantile(d, q);
}

template <Univariate D>
double upper_quantile(const D& d, double p)
{
    if constexpr (HasUpperQuantile<D>)
        return d.upper_quantile(p);
    else {
        detail::require_probability(p);
        return quantile(d, 1.0 - p);
    }
}

/// f(x) / S(x); throws SupportExhausted where the survival vanishes.
template <HasDensity D>
double hazard(const D& d, double x)
{
    if constexpr (requires { { d.hazard(x) } -> std::convertible_to<double>; })
        return d.hazard(x);
    else {
        const double s = survival(d, x);
        if (!(s > 0.0))
            throw SupportExhausted("survival is zero at x = " + std::to_string(x));
        return d.pdf(x) / s;
    }
}

class Exponential {
public:
    explicit Exponential(double rate = 1.0) : rate_(rate) { detail::require_positive(rate, "rate"); }

    double rate() const noexcept { return rate_; }
    double lower() const noexcept { return 0.0; }
    double upper() const noexcept { return inf; }
    std::string name() const;

    double cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x); }
    double survival(double x) const { return x <= 0.0 ? 1.0 : std::exp(-rate_ * x); }
    double pdf(double x) const { return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x); }
    double hazard(double x) const { return x < 0.0 ? 0.0 : rate_; }

    double quantile(double q) const
    {
        detail::require_probability(q);
        return -std::log1p(-q) / rate_;
    }
    double upper_quantile(double p) const
    {
        detail::require_probability(p);
        return -std::log(p) / rate_;
    }

private:
    double rate_;
};

/// Symmetric Laplace with density exp(-|x|/scale) / (2 scale).
class Laplace {
public:
    explicit Laplace(double scale = 1.0) : scale_(scale) { detail::require_positive(scale, "scale"); }

    double scale() const noexcept { return scale_; }
    double lower() const noexcept { return -inf; }
    double upper() const noexcept { return inf; }
    std::string name() const;

    double cdf(double x) const
    {
        return x <= 0.0 ? 0.5 * std::exp(x / scale_) : 1.0 - 0.5 * std::exp(-x / scale_);
    }
    double survival(double x) const
    {
        return x <= 0.0 ? 1.0 - 0.5 * std::exp(x / scale_) : 0.5 * std::exp(-x / scale_);
    }
    double pdf(double x) const { return std::exp(-std::abs(x) / scale_) / (2.0 * scale_); }

    double quantile(double q) const
    {
        detail::require_probability(q);
        return q <= 0.5 ? scale_ * std::log(2.0 * q) : -scale_ * std::log(2.0 * (1.0 - q));
    }
    double upper_quantile(double p) const
    {
        detail::require_probability(p);
        return p <= 0.5 ? -scale_ * std::log(2.0 * p) : scale_ * std::log(2.0 * (1.0 - p));
    }

private:
    double scale_;
};

class Weibull {
public:
    Weibull(double shape, double scale) : shape_(shape), scale_(scale)
    {
        detail::require_positive(shape, "shape");
        detail::require_positive(scale, "scale");
    }

    double shape() const noexcept { return shape_; }
    double scale() const noexcept { return scale_; }
    double lower() const noexcept { return 0.0; }
    double upper() const noexcept { return inf; }
    std::string name() const;

    double cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / scale_, shape_)); }
    double survival(double x) const { return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / scale_, shape_)); }

    double pdf(double x) const
    {
        if (x < 0.0)
            return 0.0;
        const double z = x / scale_;
        return shape_ / scale_ * std::pow(z, shape_ - 1.0) * std::exp(-std::pow(z, shape_));
    }

    double hazard(double x) const
    {
        return x < 0.0 ? 0.0 : shape_ / scale_ * std::pow(x / scale_, shape_ - 1.0);
    }

    double quantile(double q) const
    {
        detail::require_probability(q);
        return scale_ * std::pow(-std::log1p(-q), 1.0 / shape_);
    }
    double upper_quantile(double p) const
    {
        detail::require_probability(p);
        return scale_ * std::pow(-std::log(p), 1.0 / shape_);
    }

private:
    double shape_;
    double scale_;
};

class Uniform {
public:
    Uniform(double a, double b) : a_(a), b_(b)
    {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
            throw DomainError("uniform bounds must be finite with a < b");
    }

    double lower() const noexcept { return a_; }
    double upper() const noexcept { return b_; }
    std::string name() const;

    double cdf(double x) const
    {
        if (x <= a_)
            return 0.0;
        if (x >= b_)
            return 1.0;
        return (x - a_) / (b_ - a_);
    }
    double survival(double x) const
    {
        if (x <= a_)
            return 1.0;
        if (x >= b_)
            return 0.0;
        return (b_ - x) / (b_ - a_);
    }
    double pdf(double x) const { return (x < a_ || x > b_) ? 0.0 : 1.0 / (b_ - a_); }

    double quantile(double q) const
    {
        detail::require_probability(q);
        return q == 1.0 ? b_ : a_ + q * (b_ - a_);
    }
    double upper_quantile(double p) const
    {
        detail::require_probability(p);
        return p == 1.0 ? a_ : b_ - p * (b_ - a_);
    }

private:
    double a_;
    double b_;
};

namespace detail {

inline std::string short_num(double v)
{
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s;
}

} // namespace detail

inline std::string Exponential::name() const { return "Exp(" + detail::short_num(rate_) + ")"; }
inline std::string Laplace::name() const { return "Laplace(" + detail::short_num(scale_) + ")"; }
inline std::string Weibull::name() const
{
    return "Weibull(" + detail::short_num(shape_) + "," + detail::short_num(scale_) + ")";
}
inline std::string Uniform::name() const
{
    return "Uniform(" + detail::short_num(a_) + "," + detail::short_num(b_) + ")";
}

/// Type-erased univariate distribution for runtime composition (CLI specs).
class AnyDistribution {
public:
    template <Univariate D>
        requires(!std::same_as<D, AnyDistribution>)
    AnyDistribution(D d) : self_(std::make_shared<Model<D>>(std::move(d)))
    {}

    double cdf(double x) const { return self_->cdf(x); }
    double survival(double x) const { return self_->survival(x); }
    double pdf(double x) const { return self_->pdf(x); }
    double quantile(double q) const { return self_->quantile(q); }
    double upper_quantile(double p) const { return self_->upper_quantile(p); }
    double lower() const { return self_->lower(); }
    double upper() const { return self_->upper(); }
    std::string name() const { return self_->name(); }
    bool has_density() const { return self_->has_density(); }

private:
    struct Concept {
        virtual ~Concept() = default;
        virtual double cdf(double) const = 0;
        virtual double survival(double) const = 0;
        virtual double pdf(double) const = 0;
        virtual double quantile(double) const = 0;
        virtual double upper_quantile(double) const = 0;
        virtual double lower() const = 0;
        virtual double upper() const = 0;
        virtual std::string name() const = 0;
        virtual bool has_density() const = 0;
    };

    template <class D>
    struct Model final : Concept {
        explicit Model(D d) : d(std::move(d)) {}
        double cdf(double x) const override { return d.cdf(x); }
        double survival(double x) const override { return ordmix::survival(d, x); }
        double pdf(double x) const override
        {
            if constexpr (HasDensity<D>)
                return d.pdf(x);
            else
                throw UnsupportedOrder(d.name() + " has no density");
        }
        double quantile(double q) const override { return ordmix::quantile(d, q); }
        double upper_quantile(double p) const override { return ordmix::upper_quantile(d, p); }
        double lower() const override { return d.lower(); }
        double upper() const override { return d.upper(); }
        std::string name() const override { return d.name(); }
        bool has_density() const override { return ordmix::has_density(d); }
        D d;
    };

    std::shared_ptr<const Concept> self_;
};

} // namespace ordmix
