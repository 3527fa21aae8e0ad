#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "ordmix/baseline.hpp"
#include "ordmix/config.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/quadrature.hpp"

// Independent numerical oracles. Nothing here calls a closed form it checks:
// quadrature consumes density evaluations only, KS consumes cdf evaluations only.
namespace ordmix::verify {

template <class T>
struct SampleBatch {
    std::vector<T> values;
    std::uint64_t seed = 0;

    std::size_t n() const noexcept { return values.size(); }
};

using PairBatch = SampleBatch<std::pair<double, double>>;

struct GofResult {
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

inline double ks_threshold(std::size_t n) { return config::ks_critical_5pct / std::sqrt(static_cast<double>(n)); }

inline double ks_two_sample_threshold(std::size_t n, std::size_t m)
{
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return config::ks_critical_5pct * std::sqrt((nn + mm) / (nn * mm));
}

/// One-sample Kolmogorov-Smirnov distance against an analytic cdf,
/// compared with the 5% asymptotic critical value 1.36 / sqrt(n).
template <class Cdf>
GofResult ks_statistic(const SampleBatch<double>& batch, Cdf&& cdf)
{
    if (batch.n() == 0)
        throw EmptySample("ks_statistic needs at least one sample");
    std::vector<double> xs = batch.values;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = cdf(xs[i]);
        d = std::max({d, std::abs((i + 1) / n - c), std::abs(c - i / n)});
    }
    const double threshold = ks_threshold(xs.size());
    return {d, threshold, d <= threshold};
}

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
inline GofResult ks_two_sample(const SampleBatch<double>& a, const SampleBatch<double>& b)
{
    if (a.n() == 0 || b.n() == 0)
        throw EmptySample("ks_two_sample needs two nonempty samples");
    std::vector<double> xs = a.values;
    std::vector<double> ys = b.values;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n = static_cast<double>(xs.size());
    const double m = static_cast<double>(ys.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double t = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == t)
            ++i;
        while (j < ys.size() && ys[j] == t)
            ++j;
        d = std::max(d, std::abs(i / n - j / m));
    }
    const double threshold = ks_two_sample_threshold(xs.size(), ys.size());
    return {d, threshold, d <= threshold};
}

/// Adaptive-Simpson estimate of the r-th raw moment of a density.
///
/// Breakpoints (lower, split points, upper) delimit pieces integrated
/// separately, so kinks of piecewise densities sit on piece boundaries.
/// Infinite ends are handled by doubling windows instead of truncation.
template <class Pdf>
double quadrature_moment(Pdf&& pdf, int r, double lower, double upper, std::vector<double> split_points = {},
                         double tol = config::quad_abs_tol)
{
    if (r < 0)
        throw DomainError("moment order must be >= 0");
    auto integrand = [&](double x) {
        const double f = pdf(x);
        return f == 0.0 ? 0.0 : std::pow(x, r) * f;
    };

    std::vector<double> knots;
    for (double s : split_points)
        if (s > lower && s < upper)
            knots.push_back(s);
    if (knots.empty() && !std::isfinite(lower) && !std::isfinite(upper))
        knots.push_back(0.0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> edges;
    edges.push_back(lower);
    edges.insert(edges.end(), knots.begin(), knots.end());
    edges.push_back(upper);

    const double piece_tol = tol / static_cast<double>(edges.size());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = edges[k];
        const double b = edges[k + 1];
        if (std::isfinite(a) && std::isfinite(b))
            total += adaptive_simpson(integrand, a, b, piece_tol);
        else if (std::isfinite(a))
            total += integrate_tail(integrand, a, +1, piece_tol);
        else if (std::isfinite(b))
            total += integrate_tail(integrand, b, -1, piece_tol);
        else
            throw DomainError("quadrature piece unbounded on both sides");
    }
    return total;
}

/// Rank-based empirical copula C_n(u, v) = #{R_i <= n u, S_i <= n v} / n.
class EmpiricalCopula {
public:
    explicit EmpiricalCopula(const PairBatch& batch)
    {
        if (batch.n() == 0)
            throw EmptySample("empirical copula needs at least one pair");
        const std::size_t n = batch.n();
        std::vector<std::size_t> idx(n);
        ranks_.assign(n, {0.0, 0.0});

        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return batch.values[a].first < batch.values[b].first; });
        for (std::size_t k = 0; k < n; ++k)
            ranks_[idx[k]].first = static_cast<double>(k + 1) / n;

        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return batch.values[a].second < batch.values[b].second; });
        for (std::size_t k = 0; k < n; ++k)
            ranks_[idx[k]].second = static_cast<double>(k + 1) / n;
    }

    double operator()(double u, double v) const
    {
        std::size_t hits = 0;
        for (const auto& [r, s] : ranks_)
            if (r <= u && s <= v)
                ++hits;
        return static_cast<double>(hits) / ranks_.size();
    }

private:
    std::vector<std::pair<double, double>> ranks_;
};

inline double empirical_copula(const PairBatch& batch, double u, double v)
{
    return EmpiricalCopula(batch)(u, v);
}

/// Fraction of pairs with X <= x and Y <= y.
inline double empirical_joint_cdf(const PairBatch& batch, double x, double y)
{
    if (batch.n() == 0)
        throw EmptySample("empirical joint cdf needs at least one pair");
    std::size_t hits = 0;
    for (const auto& [a, b] : batch.values)
        if (a <= x && b <= y)
            ++hits;
    return static_cast<double>(hits) / batch.n();
}

/// k-sigma binomial half-width sqrt(p (1 - p) / n).
inline double binomial_bound(double p, std::size_t n, double k = 3.0)
{
    return k * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

} // namespace ordmix::verify
