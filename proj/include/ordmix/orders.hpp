#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordmix/baseline.hpp"
#include "ordmix/config.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/transform.hpp"

// Grid-based falsification checkers for stochastic orders and aging classes.
// "holds" means no counterexample beyond tolerance on the supplied grid.
namespace ordmix {

class Grid {
public:
    explicit Grid(std::vector<double> points) : points_(std::move(points))
    {
        if (points_.size() < 3)
            throw DomainError("grid needs at least 3 points");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!std::isfinite(points_[i]))
                throw DomainError("grid points must be finite");
            if (i > 0 && !(points_[i] > points_[i - 1]))
                throw DomainError("grid points must be strictly increasing");
        }
    }

    static Grid uniform(double a, double b, int n)
    {
        if (n < 3)
            throw DomainError("grid needs at least 3 points");
        std::vector<double> pts(n);
        for (int i = 0; i < n; ++i)
            pts[i] = a + (b - a) * i / (n - 1);
        return Grid(std::move(pts));
    }

    /// Points at the quantile levels (i - 0.5) / n of d, clear of the support ends.
    template <Univariate D>
    static Grid quantile_spaced(const D& d, int n = config::order_grid_size)
    {
        if (n < 3)
            throw DomainError("grid needs at least 3 points");
        std::vector<double> pts;
        pts.reserve(n);
        for (int i = 1; i <= n; ++i) {
            const double x = ordmix::quantile(d, (i - 0.5) / n);
            if (pts.empty() || x > pts.back())
                pts.push_back(x);
        }
        return Grid(std::move(pts));
    }

    std::span<const double> points() const noexcept { return points_; }
    std::size_t resolution() const noexcept { return points_.size(); }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    /// At most m points, evenly strided, always keeping both ends.
    std::vector<double> subsample(std::size_t m) const
    {
        if (points_.size() <= m)
            return points_;
        std::vector<double> out;
        out.reserve(m);
        for (std::size_t k = 0; k < m; ++k)
            out.push_back(points_[k * (points_.size() - 1) / (m - 1)]);
        return out;
    }

private:
    std::vector<double> points_;
};

enum class OrderKind { st, hr, lr, convex, star, superadditive, dispersive };

inline constexpr std::array<OrderKind, 7> all_order_kinds{OrderKind::st,     OrderKind::hr,
                                                         OrderKind::lr,     OrderKind::convex,
                                                         OrderKind::star,   OrderKind::superadditive,
                                                         OrderKind::dispersive};

inline std::string_view to_string(OrderKind k)
{
    switch (k) {
    case OrderKind::st: return "st";
    case OrderKind::hr: return "hr";
    case OrderKind::lr: return "lr";
    case OrderKind::convex: return "convex";
    case OrderKind::star: return "star";
    case OrderKind::superadditive: return "superadditive";
    case OrderKind::dispersive: return "dispersive";
    }
    return "?";
}

inline std::optional<OrderKind> parse_order_kind(std::string_view s)
{
    for (OrderKind k : all_order_kinds)
        if (to_string(k) == s)
            return k;
    if (s == "c")
        return OrderKind::convex;
    if (s == "su")
        return OrderKind::superadditive;
    if (s == "disp")
        return OrderKind::dispersive;
    return std::nullopt;
}

/// Location of the worst violation; y is set for two-point (pair) checks.
struct Witness {
    double x = 0.0;
    std::optional<double> y;
    double slack = 0.0;
};

struct OrderReport {
    OrderKind kind = OrderKind::st;
    bool holds = true;
    std::optional<Witness> witness;
    double margin = inf; // worst signed slack; negative means violated
};

namespace detail {

// Running minimum of normalized slacks.
class SlackTracker {
public:
    void record(double slack, double x, std::optional<double> y = std::nullopt)
    {
        if (slack < worst_.slack || !seen_) {
            worst_ = Witness{x, y, slack};
            seen_ = true;
        }
    }

    double margin() const { return seen_ ? worst_.slack : inf; }
    bool holds(double tol) const { return margin() >= -tol; }

    std::optional<Witness> witness(double tol) const
    {
        if (holds(tol))
            return std::nullopt;
        return worst_;
    }

private:
    Witness worst_{0.0, std::nullopt, inf};
    bool seen_ = false;
};

inline double scaled(double diff, double a, double b)
{
    return diff / std::max({1.0, std::abs(a), std::abs(b)});
}

template <Univariate D1, Univariate D2>
double compose(const D1& f1, const D2& f2, double x)
{
    return ordmix::quantile(f2, f1.cdf(x));
}

} // namespace detail

/// Checks F1 <_kind F2 on the grid.
///
/// Slacks for hazard, likelihood ratio and the transform orders are divided by
/// max(1, |magnitudes|) so that tol acts relatively for large values.
template <Univariate D1, Univariate D2>
OrderReport check_order(OrderKind kind, const D1& f1, const D2& f2, const Grid& grid,
                        double tol = config::order_tol_closed_form)
{
    detail::SlackTracker tr;
    const auto xs = grid.points();

    auto needs_density = [&] {
        if (!has_density(f1) || !has_density(f2))
            throw UnsupportedOrder(std::string(to_string(kind)) + " order needs both densities");
    };

    switch (kind) {
    case OrderKind::st:
        for (double x : xs)
            tr.record(f1.cdf(x) - f2.cdf(x), x);
        break;

    case OrderKind::hr:
        if constexpr (HasDensity<D1> && HasDensity<D2>) {
            needs_density();
            for (double x : xs) {
                const double s1 = ordmix::survival(f1, x);
                const double s2 = ordmix::survival(f2, x);
                if (!(s1 > 0.0))
                    continue;
                if (!(s2 > 0.0)) {
                    tr.record(-1.0, x); // F2 exhausted while F1 is not
                    continue;
                }
                const double h1 = ordmix::hazard(f1, x);
                const double h2 = ordmix::hazard(f2, x);
                tr.record(detail::scaled(h1 - h2, h1, h2), x);
            }
        } else
            throw UnsupportedOrder("hr order needs both densities");
        break;

    case OrderKind::lr:
        if constexpr (HasDensity<D1> && HasDensity<D2>) {
            needs_density();
            std::optional<double> prev;
            for (double x : xs) {
                const double d1 = f1.pdf(x);
                if (!(d1 > 0.0))
                    continue;
                const double r = f2.pdf(x) / d1;
                if (prev)
                    tr.record(detail::scaled(r - *prev, r, *prev), x);
                prev = r;
            }
        } else
            throw UnsupportedOrder("lr order needs both densities");
        break;

    case OrderKind::convex: {
        std::vector<double> phi(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            phi[i] = detail::compose(f1, f2, xs[i]);
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
            const double s_left = (phi[i] - phi[i - 1]) / (xs[i] - xs[i - 1]);
            const double s_right = (phi[i + 1] - phi[i]) / (xs[i + 1] - xs[i]);
            tr.record(detail::scaled(s_right - s_left, s_left, s_right), xs[i]);
        }
        break;
    }

    case OrderKind::star: {
        std::optional<double> prev;
        for (double x : xs) {
            if (x < config::star_min_x)
                continue;
            const double ratio = detail::compose(f1, f2, x) / x;
            if (prev)
                tr.record(detail::scaled(ratio - *prev, ratio, *prev), x);
            prev = ratio;
        }
        if (!prev)
            throw DomainError("star order needs grid points > 0");
        break;
    }

    case OrderKind::superadditive: {
        const std::vector<double> sub = grid.subsample(config::pair_subsample);
        std::vector<double> phi(sub.size());
        for (std::size_t i = 0; i < sub.size(); ++i)
            phi[i] = detail::compose(f1, f2, sub[i]);
        for (std::size_t i = 0; i < sub.size(); ++i)
            for (std::size_t j = i; j < sub.size(); ++j) {
                const double s = sub[i] + sub[j];
                if (s > grid.back())
                    break;
                const double whole = detail::compose(f1, f2, s);
                tr.record(detail::scaled(whole - phi[i] - phi[j], whole, phi[i] + phi[j]), sub[i], sub[j]);
            }
        break;
    }

    case OrderKind::dispersive: {
        std::optional<double> prev;
        for (double x : xs) {
            const double d = detail::compose(f1, f2, x) - x;
            if (prev)
                tr.record(detail::scaled(d - *prev, d, *prev), x);
            prev = d;
        }
        break;
    }
    }

    return OrderReport{kind, tr.holds(tol), tr.witness(tol), tr.margin()};
}

enum class AgingClass { IHR, DHR, IHRA, DHRA, NBU, NWU };

inline constexpr std::array<AgingClass, 6> all_aging_classes{AgingClass::IHR,  AgingClass::DHR,
                                                            AgingClass::IHRA, AgingClass::DHRA,
                                                            AgingClass::NBU,  AgingClass::NWU};

inline std::string_view to_string(AgingClass c)
{
    switch (c) {
    case AgingClass::IHR: return "IHR";
    case AgingClass::DHR: return "DHR";
    case AgingClass::IHRA: return "IHRA";
    case AgingClass::DHRA: return "DHRA";
    case AgingClass::NBU: return "NBU";
    case AgingClass::NWU: return "NWU";
    }
    return "?";
}

inline std::optional<AgingClass> parse_aging_class(std::string_view s)
{
    for (AgingClass c : all_aging_classes)
        if (to_string(c) == s)
            return c;
    return std::nullopt;
}

struct AgingVerdict {
    bool holds = true;
    std::optional<Witness> witness;
    double margin = inf;
};

struct AgingReport {
    std::array<AgingVerdict, 6> verdicts;

    const AgingVerdict& operator[](AgingClass c) const { return verdicts[static_cast<std::size_t>(c)]; }
    AgingVerdict& operator[](AgingClass c) { return verdicts[static_cast<std::size_t>(c)]; }

    /// IHR => IHRA => NBU and DHR => DHRA => NWU.
    bool consistent() const
    {
        auto h = [&](AgingClass c) { return (*this)[c].holds; };
        return (!h(AgingClass::IHR) || h(AgingClass::IHRA)) && (!h(AgingClass::IHRA) || h(AgingClass::NBU)) &&
               (!h(AgingClass::DHR) || h(AgingClass::DHRA)) && (!h(AgingClass::DHRA) || h(AgingClass::NWU));
    }
};

namespace detail {

inline AgingVerdict verdict_from(const SlackTracker& tr, double tol)
{
    return AgingVerdict{tr.holds(tol), tr.witness(tol), tr.margin()};
}

// A counterexample to a weaker class refutes every stronger one.
inline void propagate_failure(AgingReport& rep, AgingClass weak, AgingClass strong)
{
    if (!rep[weak].holds && rep[strong].holds) {
        rep[strong].holds = false;
        rep[strong].witness = rep[weak].witness;
        rep[strong].margin = std::min(rep[strong].margin, rep[weak].margin);
    }
}

template <Univariate D>
double cumulative_hazard(const D& d, double t)
{
    const double f = d.cdf(t);
    return f < 0.5 ? -std::log1p(-f) : -std::log(ordmix::survival(d, t));
}

} // namespace detail

/// Aging classes of a lifetime law on [0, inf), each checked independently,
/// then failures propagated up the implication chain.
template <HasDensity D>
AgingReport classify_aging(const D& d, const Grid& grid, double tol = config::order_tol_closed_form)
{
    if (d.lower() < 0.0 || grid.front() < 0.0)
        throw DomainError("aging classes need a lifetime distribution on [0, inf)");
    const auto xs = grid.points();

    detail::SlackTracker ihr, dhr, ihra, dhra, nbu, nwu;

    std::optional<double> prev_h;
    std::optional<double> prev_avg;
    for (double x : xs) {
        const double s = ordmix::survival(d, x);
        if (!(s > 0.0))
            throw DomainError("survival must be positive on the aging grid");
        const double h = ordmix::hazard(d, x);
        if (prev_h) {
            ihr.record(detail::scaled(h - *prev_h, h, *prev_h), x);
            dhr.record(detail::scaled(*prev_h - h, h, *prev_h), x);
        }
        prev_h = h;

        if (x > 0.0) {
            const double avg = detail::cumulative_hazard(d, x) / x;
            if (prev_avg) {
                ihra.record(detail::scaled(avg - *prev_avg, avg, *prev_avg), x);
                dhra.record(detail::scaled(*prev_avg - avg, avg, *prev_avg), x);
            }
            prev_avg = avg;
        }
    }

    const std::vector<double> sub = grid.subsample(config::pair_subsample);
    for (double x : sub)
        for (double t : sub) {
            const double joint = ordmix::survival(d, x + t);
            const double product = ordmix::survival(d, x) * ordmix::survival(d, t);
            nbu.record(product - joint, x, t);
            nwu.record(joint - product, x, t);
        }

    AgingReport rep;
    rep[AgingClass::IHR] = detail::verdict_from(ihr, tol);
    rep[AgingClass::DHR] = detail::verdict_from(dhr, tol);
    rep[AgingClass::IHRA] = detail::verdict_from(ihra, tol);
    rep[AgingClass::DHRA] = detail::verdict_from(dhra, tol);
    rep[AgingClass::NBU] = detail::verdict_from(nbu, tol);
    rep[AgingClass::NWU] = detail::verdict_from(nwu, tol);

    detail::propagate_failure(rep, AgingClass::NBU, AgingClass::IHRA);
    detail::propagate_failure(rep, AgingClass::IHRA, AgingClass::IHR);
    detail::propagate_failure(rep, AgingClass::NWU, AgingClass::DHRA);
    detail::propagate_failure(rep, AgingClass::DHRA, AgingClass::DHR);
    return rep;
}

/// Largest |G_lambda[F2]^{-1}(G_lambda[F1](x)) - F2^{-1}(F1(x))| over the grid.
template <Univariate D1, Univariate D2>
double composition_identity_error(const D1& f1, const D2& f2, double lambda, const Grid& grid)
{
    const Transformed<D1> g1(f1, lambda);
    const Transformed<D2> g2(f2, lambda);
    double worst = 0.0;
    for (double x : grid.points()) {
        const double lhs = g2.quantile(g1.cdf(x));
        const double rhs = ordmix::quantile(f2, f1.cdf(x));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

enum class PreservationVerdict { preserved, violated, premise_failed };

inline std::string_view to_string(PreservationVerdict v)
{
    switch (v) {
    case PreservationVerdict::preserved: return "preserved";
    case PreservationVerdict::violated: return "violated";
    case PreservationVerdict::premise_failed: return "premise-failed";
    }
    return "?";
}

struct PreservationClaim {
    OrderKind kind;
    double lambda;
    OrderReport premise;
    std::optional<OrderReport> conclusion; // absent when the premise fails
    PreservationVerdict verdict;
};

inline constexpr std::array<OrderKind, 5> preserved_order_kinds{
    OrderKind::st, OrderKind::convex, OrderKind::star, OrderKind::superadditive, OrderKind::dispersive};

/// For each order and lambda: check F1 < F2, and if it holds, check
/// G_lambda[F1] < G_lambda[F2] on the same grid.
template <Univariate D1, Univariate D2>
std::vector<PreservationClaim> preservation_suite(const D1& f1, const D2& f2, std::span<const double> lambdas,
                                                  const Grid& grid, std::span<const OrderKind> kinds = preserved_order_kinds,
                                                  double tol = config::order_tol_closed_form)
{
    std::vector<PreservationClaim> out;
    for (OrderKind kind : kinds) {
        const OrderReport premise = check_order(kind, f1, f2, grid, tol);
        for (double lambda : lambdas) {
            if (!premise.holds) {
                out.push_back({kind, lambda, premise, std::nullopt, PreservationVerdict::premise_failed});
                continue;
            }
            const OrderReport concl =
                check_order(kind, Transformed<D1>(f1, lambda), Transformed<D2>(f2, lambda), grid, tol);
            out.push_back({kind, lambda, premise, concl,
                           concl.holds ? PreservationVerdict::preserved : PreservationVerdict::violated});
        }
    }
    return out;
}

} // namespace ordmix
