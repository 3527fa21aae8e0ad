#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "ordmix/errors.hpp"
#include "ordmix/transform.hpp"

namespace ordmix {

template <class C>
concept Copula = requires(const C& c, double u, double v) {
    { c.value(u, v) } -> std::convertible_to<double>;
    { c.name() } -> std::convertible_to<std::string>;
};

/// Which pair sampler can realize a coupling.
enum class CouplingKind { independence, comonotone, countermonotone, other };

template <Copula C>
CouplingKind coupling_kind(const C& c)
{
    if constexpr (requires { { c.kind() } -> std::convertible_to<CouplingKind>; })
        return c.kind();
    else
        return CouplingKind::other;
}

/// Survival function D-bar(u, v) = 1 - u - v + D(u, v).
template <Copula C>
double copula_survival(const C& c, double u, double v)
{
    return 1.0 - u - v + c.value(u, v);
}

struct IndependenceCopula {
    double value(double u, double v) const { return u * v; }
    std::string name() const { return "independence"; }
    CouplingKind kind() const { return CouplingKind::independence; }
};

/// Frechet-Hoeffding upper bound M(u, v) = min(u, v).
struct UpperFrechet {
    double value(double u, double v) const { return std::min(u, v); }
    std::string name() const { return "M"; }
    CouplingKind kind() const { return CouplingKind::comonotone; }
};

/// Frechet-Hoeffding lower bound W(u, v) = max(u + v - 1, 0).
struct LowerFrechet {
    double value(double u, double v) const { return std::max(u + v - 1.0, 0.0); }
    std::string name() const { return "W"; }
    CouplingKind kind() const { return CouplingKind::countermonotone; }
};

/// Arbitrary function on the unit square, e.g. a candidate under certification.
class FunctionCopula {
public:
    FunctionCopula(std::string name, std::function<double(double, double)> fn)
        : name_(std::move(name)), fn_(std::move(fn))
    {}

    double value(double u, double v) const { return fn_(u, v); }
    std::string name() const { return name_; }

private:
    std::string name_;
    std::function<double(double, double)> fn_;
};

/// Copula of the transformed bivariate law built from a baseline copula D:
///
///   C_lambda(psi(a), psi(b)) = (1 + lambda) {a b + D(a, b) Dbar(a, b)} - lambda D(a, b)^2,
///
/// evaluated at arbitrary (u, v) by a = psi^{-1}(u), b = psi^{-1}(v).
/// The boundary rows are returned exactly.
template <Copula D>
class TransformedCopula {
public:
    TransformedCopula(D base, double lambda) : base_(std::move(base)), lambda_(lambda)
    {
        detail::require_lambda(lambda);
    }

    const D& base() const noexcept { return base_; }
    double lambda() const noexcept { return lambda_; }
    std::string name() const { return "C[" + detail::short_num(lambda_) + "](" + base_.name() + ")"; }

    double value(double u, double v) const
    {
        detail::require_probability(u);
        detail::require_probability(v);
        if (u == 0.0 || v == 0.0)
            return 0.0;
        if (u == 1.0)
            return v;
        if (v == 1.0)
            return u;
        return at_preimage(psi_inv(lambda_, u), psi_inv(lambda_, v));
    }

    /// Right-hand side in the baseline coordinates (a, b).
    double at_preimage(double a, double b) const
    {
        const double d = base_.value(a, b);
        const double dbar = 1.0 - a - b + d;
        return std::clamp((1.0 + lambda_) * (a * b + d * dbar) - lambda_ * d * d, 0.0, 1.0);
    }

private:
    D base_;
    double lambda_;
};

/// Type-erased copula for runtime selection.
class AnyCopula {
public:
    template <Copula C>
        requires(!std::same_as<C, AnyCopula>)
    AnyCopula(C c)
        : kind_(coupling_kind(c)), name_(c.name()),
          fn_([c = std::move(c)](double u, double v) { return c.value(u, v); })
    {}

    double value(double u, double v) const { return fn_(u, v); }
    std::string name() const { return name_; }
    CouplingKind kind() const { return kind_; }

private:
    CouplingKind kind_;
    std::string name_;
    std::function<double(double, double)> fn_;
};

struct ValidityReport {
    bool valid = true;
    bool grounded = true;
    bool uniform_margins = true;
    bool two_increasing = true;
    double max_ground_error = 0.0;
    double max_margin_error = 0.0;
    double worst_volume = 0.0;
    double worst_u = 0.0; // lower-left corner of the worst rectangle
    double worst_v = 0.0;
    std::optional<std::pair<double, double>> witness; // first failing location
};

/// Certifies groundedness, uniform margins and 2-increasingness of c on the
/// (n+1) x (n+1) grid of nodes i/n. Rectangle volumes may dip to -tol.
template <Copula C>
ValidityReport copula_validity(const C& c, int resolution, double tol)
{
    if (resolution < 3)
        throw DomainError("copula_validity needs resolution >= 3");
    const int n = resolution;
    std::vector<double> node(n + 1);
    for (int i = 0; i <= n; ++i)
        node[i] = static_cast<double>(i) / n;

    std::vector<double> grid(static_cast<std::size_t>(n + 1) * (n + 1));
    auto at = [&](int i, int j) -> double& { return grid[static_cast<std::size_t>(i) * (n + 1) + j]; };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            at(i, j) = c.value(node[i], node[j]);

    ValidityReport rep;
    rep.worst_volume = inf;
    auto fail = [&](double u, double v) {
        if (!rep.witness)
            rep.witness = std::make_pair(u, v);
    };

    for (int k = 0; k <= n; ++k) {
        const double g = std::max(std::abs(at(k, 0)), std::abs(at(0, k)));
        rep.max_ground_error = std::max(rep.max_ground_error, g);
        if (g > tol) {
            rep.grounded = false;
            fail(std::abs(at(k, 0)) > tol ? node[k] : 0.0, std::abs(at(k, 0)) > tol ? 0.0 : node[k]);
        }
        const double m1 = std::abs(at(k, n) - node[k]);
        const double m2 = std::abs(at(n, k) - node[k]);
        rep.max_margin_error = std::max({rep.max_margin_error, m1, m2});
        if (std::max(m1, m2) > tol) {
            rep.uniform_margins = false;
            fail(m1 > tol ? node[k] : 1.0, m1 > tol ? 1.0 : node[k]);
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double vol = at(i + 1, j + 1) - at(i, j + 1) - at(i + 1, j) + at(i, j);
            if (vol < rep.worst_volume) {
                rep.worst_volume = vol;
                rep.worst_u = node[i];
                rep.worst_v = node[j];
            }
            if (vol < -tol) {
                rep.two_increasing = false;
                fail(node[i], node[j]);
            }
        }

    rep.valid = rep.grounded && rep.uniform_margins && rep.two_increasing;
    return rep;
}

} // namespace ordmix
