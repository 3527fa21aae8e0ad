#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ordmix/baseline.hpp"
#include "ordmix/copula.hpp"
#include "ordmix/errors.hpp"
#include "ordmix/random.hpp"
#include "ordmix/transform.hpp"

namespace ordmix {

/// Draws one pair (X, Y) from the baseline joint law F.
using PairSampler = std::function<std::pair<double, double>(Stream&)>;

/// Bivariate law of (min X_i, min Y_i) w.p. (1 + lambda)/2 and (max X_i, max Y_i)
/// otherwise, for two iid pairs from F(x, y) = D(F1(x), F2(y)):
///
///   G(x, y) = (1 + lambda) (F1 F2 + F Fbar) - lambda F^2,  Fbar = 1 - F1 - F2 + F.
template <Univariate M1, Univariate M2, Copula D>
class BivariateTransformed {
public:
    BivariateTransformed(M1 margin1, M2 margin2, D coupling, double lambda)
        : margin1_(std::move(margin1)), margin2_(std::move(margin2)), coupling_(std::move(coupling)),
          lambda_(lambda)
    {
        detail::require_lambda(lambda);
    }

    const M1& margin1() const noexcept { return margin1_; }
    const M2& margin2() const noexcept { return margin2_; }
    const D& coupling() const noexcept { return coupling_; }
    double lambda() const noexcept { return lambda_; }

    /// Univariate margins G_lambda[F1], G_lambda[F2].
    Transformed<M1> marginal1() const { return {margin1_, lambda_}; }
    Transformed<M2> marginal2() const { return {margin2_, lambda_}; }

    TransformedCopula<D> copula() const { return {coupling_, lambda_}; }

    double cdf(double x, double y) const
    {
        const double f1 = margin1_.cdf(x);
        const double f2 = margin2_.cdf(y);
        const double joint = coupling_.value(f1, f2);
        const double joint_bar = 1.0 - f1 - f2 + joint;
        return std::clamp((1.0 + lambda_) * (f1 * f2 + joint * joint_bar) - lambda_ * joint * joint, 0.0, 1.0);
    }

    /// Closed form for the independence coupling:
    /// F1 F2 {F1 F2 + (1 + lambda)(S1 + S2)}.
    double independence_case_cdf(double x, double y) const
    {
        if (coupling_kind(coupling_) != CouplingKind::independence)
            throw WrongCoupling("independence_case_cdf needs the independence coupling, got " + coupling_.name());
        const double f1 = margin1_.cdf(x);
        const double f2 = margin2_.cdf(y);
        const double s1 = ordmix::survival(margin1_, x);
        const double s2 = ordmix::survival(margin2_, y);
        const double p = f1 * f2;
        return std::clamp(p * (p + (1.0 + lambda_) * (s1 + s2)), 0.0, 1.0);
    }

    /// Baseline pair sampler for the couplings with a known construction:
    /// independent uniforms, a shared uniform (M), or antithetic uniforms (W).
    PairSampler baseline_sampler() const
    {
        switch (coupling_kind(coupling_)) {
        case CouplingKind::independence:
            return [this](Stream& rng) {
                const double x = ordmix::quantile(margin1_, rng.uniform());
                return std::make_pair(x, ordmix::quantile(margin2_, rng.uniform()));
            };
        case CouplingKind::comonotone:
            return [this](Stream& rng) {
                const double u = rng.uniform();
                return std::make_pair(ordmix::quantile(margin1_, u), ordmix::quantile(margin2_, u));
            };
        case CouplingKind::countermonotone:
            return [this](Stream& rng) {
                const double u = rng.uniform();
                return std::make_pair(ordmix::quantile(margin1_, u), ordmix::quantile(margin2_, 1.0 - u));
            };
        case CouplingKind::other:
            break;
        }
        throw UnsupportedCoupling("no pair sampler for coupling " + coupling_.name());
    }

    /// n draws of the componentwise min (prob (1 + lambda)/2) or max of two iid
    /// baseline pairs. A caller-supplied sampler overrides the built-in ones.
    std::vector<std::pair<double, double>> sample(std::size_t n, Stream& rng, PairSampler pair_sampler = {}) const
    {
        const PairSampler draw = pair_sampler ? std::move(pair_sampler) : baseline_sampler();
        const MixtureIndicator z = MixtureIndicator::from_lambda(lambda_);
        std::vector<std::pair<double, double>> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [x1, y1] = draw(rng);
            const auto [x2, y2] = draw(rng);
            if (z.draw(rng))
                out.emplace_back(std::min(x1, x2), std::min(y1, y2));
            else
                out.emplace_back(std::max(x1, x2), std::max(y1, y2));
        }
        return out;
    }

private:
    M1 margin1_;
    M2 margin2_;
    D coupling_;
    double lambda_;
};

template <Univariate M1, Univariate M2, Copula D>
BivariateTransformed(M1, M2, D, double) -> BivariateTransformed<M1, M2, D>;

} // namespace ordmix
