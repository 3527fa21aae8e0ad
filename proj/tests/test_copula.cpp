#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "ordmix/acceptance.hpp"
#include "ordmix/bivariate.hpp"
#include "ordmix/copula.hpp"
#include "ordmix/verify.hpp"

using namespace ordmix;
using Catch::Approx;

namespace {

const std::vector<double> lambda_grid{-1.0, -0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 1.0};

std::vector<AnyCopula> baselines()
{
    return {IndependenceCopula{}, UpperFrechet{}, LowerFrechet{}, TransformedCopula(IndependenceCopula{}, 0.5)};
}

double node(int i) { return i / 100.0; }

} // namespace

TEST_CASE("psi and its inverse")
{
    for (double t : {0.0, 0.2, 0.5, 0.9, 1.0})
        CHECK(psi(0.0, t) == t);
    CHECK(psi(1.0, 0.5) == 0.75);
    CHECK(psi_inv(-1.0, 0.25) == Approx(0.5).epsilon(1e-15));
    CHECK(psi_inv(1.0, 1.0) == 1.0);
    CHECK(psi_inv(-1.0, 0.0) == 0.0);
    for (double lam : lambda_grid)
        for (int i = 0; i <= 1000; ++i) {
            const double s = i / 1000.0;
            REQUIRE(std::abs(psi(lam, psi_inv(lam, s)) - s) <= 1e-14);
        }
    CHECK_THROWS_AS(psi(0.5, 1.1), DomainError);
    CHECK_THROWS_AS(psi_inv(0.5, -0.1), DomainError);
    CHECK_THROWS_AS(psi(1.5, 0.5), DomainError);
}

TEST_CASE("transformed copula values")
{
    CHECK(TransformedCopula(IndependenceCopula{}, 1.0).value(0.75, 0.75) == Approx(0.5625).epsilon(1e-15));
    CHECK(TransformedCopula(LowerFrechet{}, 1.0).value(0.75, 0.75) == Approx(0.5).epsilon(1e-15));

    // independence closed form uv{uv + (1 + lambda)(2 - u - v)} in the baseline coordinates
    for (double lam : lambda_grid) {
        const TransformedCopula c(IndependenceCopula{}, lam);
        for (double a : {0.1, 0.4, 0.8})
            for (double b : {0.2, 0.5, 0.95})
                REQUIRE(std::abs(c.at_preimage(a, b) - a * b * (a * b + (1.0 + lam) * (2.0 - a - b))) <= 1e-15);
    }

    for (double lam : lambda_grid) {
        const TransformedCopula c(UpperFrechet{}, lam);
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 100; ++j)
                REQUIRE(std::abs(c.value(node(i), node(j)) - std::min(node(i), node(j))) <= 1e-14);
    }

    const TransformedCopula c(LowerFrechet{}, 0.4);
    CHECK(c.value(0.0, 0.3) == 0.0);
    CHECK(c.value(0.3, 0.0) == 0.0);
    CHECK(c.value(1.0, 0.3) == 0.3);
    CHECK(c.value(0.3, 1.0) == 0.3);
    CHECK_THROWS_AS(c.value(1.2, 0.3), DomainError);
    CHECK(c.name() == "C[0.4](W)");
    CHECK(copula_survival(IndependenceCopula{}, 0.3, 0.6) == Approx(0.7 * 0.4).epsilon(1e-15));
}

TEST_CASE("copula validity certification")
{
    const auto pi = copula_validity(IndependenceCopula{}, 100, config::copula_volume_tol);
    CHECK(pi.valid);
    CHECK(pi.worst_volume == Approx(1e-4).margin(1e-15));

    const auto t07 = copula_validity(TransformedCopula(IndependenceCopula{}, 0.7), 100, config::copula_volume_tol);
    CHECK(t07.valid);
    CHECK(t07.worst_volume >= -1e-12);

    for (const auto& base : baselines())
        for (double lam : lambda_grid) {
            INFO(base.name() << " lambda " << lam);
            const auto rep = copula_validity(TransformedCopula(base, lam), 100, config::copula_volume_tol);
            CHECK(rep.valid);
            CHECK(rep.max_ground_error == 0.0);
            CHECK(rep.max_margin_error == 0.0);
            CHECK_FALSE(rep.witness.has_value());
        }

    const FunctionCopula shrunk("0.9 uv", [](double u, double v) { return 0.9 * u * v; });
    const auto bad_margin = copula_validity(shrunk, 100, config::copula_volume_tol);
    CHECK_FALSE(bad_margin.valid);
    CHECK(bad_margin.grounded);
    CHECK_FALSE(bad_margin.uniform_margins);
    REQUIRE(bad_margin.witness.has_value());

    const FunctionCopula dented("M minus bump", [](double u, double v) {
        return std::min(u, v) - 0.1 * u * v * (1.0 - u) * (1.0 - v);
    });
    const auto bad_volume = copula_validity(dented, 100, config::copula_volume_tol);
    CHECK_FALSE(bad_volume.valid);
    CHECK(bad_volume.uniform_margins);
    CHECK_FALSE(bad_volume.two_increasing);
    CHECK(bad_volume.worst_volume < -1e-12);
    REQUIRE(bad_volume.witness.has_value());

    CHECK_THROWS_AS(copula_validity(IndependenceCopula{}, 2, 1e-12), DomainError);
}

TEST_CASE("Frechet bounds and symmetry")
{
    for (const auto& base : baselines())
        for (double lam : lambda_grid) {
            const TransformedCopula c(base, lam);
            for (int i = 0; i <= 100; ++i)
                for (int j = 0; j <= 100; ++j) {
                    const double u = node(i);
                    const double v = node(j);
                    const double w = c.value(u, v);
                    REQUIRE(w >= std::max(u + v - 1.0, 0.0) - 1e-15);
                    REQUIRE(w <= std::min(u, v) + 1e-15);
                    REQUIRE(std::abs(w - c.value(v, u)) <= 1e-14);
                }
        }
}

TEST_CASE("copula family in lambda")
{
    // M is invariant, hence trivially ordered
    for (double l1 : lambda_grid)
        for (double l2 : lambda_grid)
            REQUIRE(std::abs(TransformedCopula(UpperFrechet{}, l1).value(0.3, 0.6) -
                             TransformedCopula(UpperFrechet{}, l2).value(0.3, 0.6)) <= 1e-15);

    // minima or maxima of independent pairs stay independent
    for (double lam : {-1.0, 1.0})
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 100; ++j)
                REQUIRE(std::abs(TransformedCopula(IndependenceCopula{}, lam).value(node(i), node(j)) -
                                 node(i) * node(j)) <= 1e-15);

    // so the independence family is not pointwise increasing in lambda
    const double c0 = TransformedCopula(IndependenceCopula{}, 0.0).value(0.5, 0.5);
    const double c1 = TransformedCopula(IndependenceCopula{}, 1.0).value(0.5, 0.5);
    CHECK(c0 == Approx(0.3125).epsilon(1e-15));
    CHECK(c1 == Approx(0.25).epsilon(1e-15));
    CHECK(c0 > c1);
    double prev = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double lam = -1.0 + k / 100.0;
        const double c = TransformedCopula(IndependenceCopula{}, lam).value(0.5, 0.5);
        if (k > 0 && lam <= 0.0)
            REQUIRE(c > prev);
        if (k > 0 && lam > 0.0)
            REQUIRE(c < prev);
        prev = c;
    }

    // at fixed (x, y) the joint cdf does increase with lambda
    for (const auto& base : baselines())
        for (std::size_t a = 0; a < lambda_grid.size(); ++a)
            for (std::size_t b = 0; b < a; ++b) {
                const BivariateTransformed hi(Exponential(1.0), Exponential(2.0), base, lambda_grid[a]);
                const BivariateTransformed lo(Exponential(1.0), Exponential(2.0), base, lambda_grid[b]);
                for (double x : {0.1, 0.7, 2.0})
                    for (double y : {0.05, 0.4, 1.5})
                        REQUIRE(hi.cdf(x, y) >= lo.cdf(x, y) - 1e-15);
            }
}

TEST_CASE("bivariate cdf")
{
    const double ln2 = std::numbers::ln2;
    const BivariateTransformed ind(Exponential(1.0), Exponential(1.0), IndependenceCopula{}, 1.0);
    CHECK(ind.cdf(ln2, ln2) == Approx(0.5625).epsilon(1e-14));
    CHECK(ind.independence_case_cdf(ln2, ln2) == Approx(0.5625).epsilon(1e-14));

    for (const auto& base : baselines())
        for (double lam : lambda_grid) {
            const BivariateTransformed b(Weibull(1.5, 1.0), Laplace(2.0), base, lam);
            const auto g1 = b.marginal1();
            const auto g2 = b.marginal2();
            const auto c = b.copula();
            for (double x : {0.05, 0.3, 1.0, 2.5})
                for (double y : {-3.0, -0.5, 0.0, 0.8, 4.0}) {
                    REQUIRE(std::abs(b.cdf(x, inf) - g1.cdf(x)) <= 1e-12);
                    REQUIRE(std::abs(b.cdf(inf, y) - g2.cdf(y)) <= 1e-12);
                    REQUIRE(std::abs(b.cdf(x, y) - c.value(g1.cdf(x), g2.cdf(y))) <= 1e-12);
                }
            CHECK(b.cdf(-inf, 0.3) == 0.0);
            CHECK(b.cdf(inf, inf) == 1.0);
        }

    // at lambda = 0 only the margins are untouched; the joint law is F1 F2 (1 + S1 S2) for independence
    const Exponential e(1.0);
    const BivariateTransformed zero(e, e, IndependenceCopula{}, 0.0);
    const BivariateTransformed zero_m(e, e, UpperFrechet{}, 0.0);
    for (double x : {0.2, 1.0})
        for (double y : {0.5, 3.0}) {
            const double f1 = e.cdf(x);
            const double f2 = e.cdf(y);
            CHECK(zero.cdf(x, y) == Approx(f1 * f2 * (1.0 + (1.0 - f1) * (1.0 - f2))).epsilon(1e-14));
            CHECK(zero_m.cdf(x, y) == Approx(std::min(f1, f2)).epsilon(1e-14));
        }
}

TEST_CASE("independence closed form")
{
    for (double lam : lambda_grid) {
        const BivariateTransformed b(Exponential(1.0), Weibull(2.0, 1.0), IndependenceCopula{}, lam);
        for (double x : {0.01, 0.5, 1.0, 3.0, inf})
            for (double y : {0.02, 0.6, 1.7, inf})
                REQUIRE(std::abs(b.independence_case_cdf(x, y) - b.cdf(x, y)) <= 1e-15);
        CHECK(b.independence_case_cdf(inf, 0.6) == Approx(b.marginal2().cdf(0.6)).epsilon(1e-15));
    }
    const BivariateTransformed m(Exponential(1.0), Exponential(1.0), UpperFrechet{}, 0.2);
    CHECK_THROWS_AS(m.independence_case_cdf(1.0, 1.0), WrongCoupling);
    const BivariateTransformed any(Exponential(1.0), Exponential(1.0), AnyCopula(IndependenceCopula{}), 0.2);
    CHECK(any.independence_case_cdf(1.0, 1.0) == Approx(any.cdf(1.0, 1.0)).epsilon(1e-15));
}

TEST_CASE("bivariate sampler picks componentwise extremes")
{
    for (double lam : {-1.0, 1.0}) {
        std::vector<std::pair<double, double>> drawn;
        PairSampler recorder = [&drawn](Stream& rng) {
            const auto p = std::make_pair(rng.uniform(), rng.uniform());
            drawn.push_back(p);
            return p;
        };
        const BivariateTransformed b(Uniform(0.0, 1.0), Uniform(0.0, 1.0), IndependenceCopula{}, lam);
        Stream rng(3);
        const auto out = b.sample(500, rng, recorder);
        REQUIRE(drawn.size() == 1000);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto& [x1, y1] = drawn[2 * i];
            const auto& [x2, y2] = drawn[2 * i + 1];
            if (lam > 0.0)
                REQUIRE(out[i] == std::make_pair(std::min(x1, x2), std::min(y1, y2)));
            else
                REQUIRE(out[i] == std::make_pair(std::max(x1, x2), std::max(y1, y2)));
        }
    }

    const BivariateTransformed m(Exponential(1.0), Exponential(1.0), UpperFrechet{}, 0.3);
    Stream rng(11);
    verify::PairBatch diag{m.sample(20000, rng), 11};
    for (const auto& [x, y] : diag.values)
        REQUIRE(x == y);
    const verify::EmpiricalCopula ec(diag);
    for (double u : {0.2, 0.5, 0.9})
        for (double v : {0.1, 0.5, 0.7})
            CHECK(std::abs(ec(u, v) - std::min(u, v)) <= 1.0 / 20000);

    const BivariateTransformed f(Exponential(1.0), Exponential(1.0),
                                 FunctionCopula("custom", [](double u, double v) { return u * v; }), 0.3);
    CHECK_THROWS_AS(f.baseline_sampler(), UnsupportedCoupling);
    CHECK_THROWS_AS(f.sample(10, rng), UnsupportedCoupling);
    const BivariateTransformed erased(Exponential(1.0), Exponential(1.0), AnyCopula(LowerFrechet{}), 0.3);
    CHECK_NOTHROW(erased.sample(10, rng));
}

TEST_CASE("bivariate sampler matches the copula and the joint cdf")
{
    const std::size_t n = 100000;
    const std::vector<double> levels{0.1, 0.3, 0.5, 0.7, 0.9};
    std::uint64_t seed = 7;
    for (const auto& base : {AnyCopula(IndependenceCopula{}), AnyCopula(LowerFrechet{})})
        for (double lam : {-0.6, 0.5}) {
            const BivariateTransformed b(Exponential(1.0), Exponential(1.0), base, lam);
            Stream rng(seed);
            const verify::PairBatch batch{b.sample(n, rng), seed++};
            const verify::EmpiricalCopula ec(batch);
            const auto c = b.copula();
            const auto g1 = b.marginal1();
            const auto g2 = b.marginal2();
            for (double u : levels)
                for (double v : levels) {
                    INFO(base.name() << " lambda " << lam << " at " << u << "," << v);
                    const double p = c.value(u, v);
                    CHECK(std::abs(ec(u, v) - p) <= verify::binomial_bound(p, n));
                    const double x = g1.quantile(u);
                    const double y = g2.quantile(v);
                    const double q = b.cdf(x, y);
                    CHECK(std::abs(verify::empirical_joint_cdf(batch, x, y) - q) <= verify::binomial_bound(q, n));
                }
        }
}

TEST_CASE("negative-control family is a valid copula that decreases in lambda")
{
    for (double lam : {-1.0, 0.0, 0.5, 1.0}) {
        const FunctionCopula f("fixture", [lam](double u, double v) {
            return u * v * (1.0 - 0.2 * lam * (1.0 - u) * (1.0 - v));
        });
        CHECK(copula_validity(f, 100, config::copula_volume_tol).valid);
    }
    const auto r = acceptance::copula_validity_and_ordering({true});
    CHECK_FALSE(r.pass);
    CHECK(r.detail.find("negative-control fixture ordering 0.0125") != std::string::npos);
}
