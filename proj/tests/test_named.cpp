#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "ordmix/named.hpp"
#include "ordmix/verify.hpp"

using namespace ordmix;
using Catch::Approx;

namespace {

const double ln2 = std::numbers::ln2;
const std::vector<double> lambda_grid{-1.0, -0.75, -0.5, -1.0 / 3.0, -0.2, 0.0, 0.25, 0.5, 0.8, 1.0};
const std::vector<double> theta_grid{0.5, 1.0, 2.0};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("transformed exponential matches the generic engine")
{
    for (double theta : theta_grid)
        for (double lam : lambda_grid) {
            const TransformedExponential te(theta, lam);
            const auto gen = te.as_transform();
            for (int i = 0; i < 1000; ++i) {
                const double x = i * 0.012 / theta;
                REQUIRE(std::abs(te.cdf(x) - gen.cdf(x)) <= 1e-15);
                REQUIRE(std::abs(te.survival(x) - gen.survival(x)) <= 1e-15);
                REQUIRE(rel_err(te.pdf(x), gen.pdf(x)) <= 1e-14);
                REQUIRE(rel_err(te.hazard(x), gen.hazard(x)) <= 1e-14);
                const double q = (i + 0.5) / 1000.0;
                REQUIRE(rel_err(te.quantile(q), gen.quantile(q)) <= 1e-14);
            }
        }
}

TEST_CASE("transformed exponential point values")
{
    for (double x : {0.1, 1.0, 5.0})
        CHECK(TransformedExponential(1.0, 1.0).cdf(x) == Approx(-std::expm1(-2.0 * x)).epsilon(1e-14));
    CHECK(TransformedExponential(1.0, 0.5).hazard(ln2) == Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(TransformedExponential(1.0, 0.5).quantile(0.5) == Approx(0.48121182505960345).epsilon(1e-14));
    CHECK(TransformedExponential(1.0, 1.0).quantile(1.0) == inf);
    // deep upper quantile; reference from 50-digit root finding
    const TransformedExponential deep(0.5, -1.0);
    CHECK(deep.quantile(0.9995) == Approx(16.58784923331625053).epsilon(2e-16));
    CHECK(deep.as_transform().quantile(0.9995) == Approx(16.58784923331625053).epsilon(2e-16));
    CHECK(TransformedExponential(1.0, 0.0).quantile(0.3) == Approx(-std::log1p(-0.3)).epsilon(1e-15));

    CHECK_THROWS_AS(TransformedExponential(1.0, 0.5).pdf(-0.1), DomainError);
    CHECK_THROWS_AS(TransformedExponential(1.0, 0.5).hazard(-0.1), DomainError);
    CHECK_THROWS_AS(TransformedExponential(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(TransformedExponential(1.0, 1.5), DomainError);
}

TEST_CASE("transformed exponential mode")
{
    CHECK(TransformedExponential(1.0, -0.2).mode() == 0.0);
    CHECK(TransformedExponential(1.0, -1.0 / 3.0).mode() == 0.0);
    CHECK(TransformedExponential(1.0, -1.0).mode() == Approx(ln2).epsilon(1e-15));
    CHECK(TransformedExponential(2.0, -1.0).mode() == Approx(0.5 * ln2).epsilon(1e-15));

    // grid argmax oracle
    for (double theta : theta_grid)
        for (double lam : lambda_grid) {
            const TransformedExponential te(theta, lam);
            const double step = 1e-4 / theta;
            double best_x = 0.0;
            double best = -1.0;
            for (int i = 0; i <= 100000; ++i) {
                const double x = i * step;
                if (te.pdf(x) > best) {
                    best = te.pdf(x);
                    best_x = x;
                }
            }
            REQUIRE(std::abs(best_x - te.mode()) <= step);
        }
}

TEST_CASE("transformed exponential raw moments and mgf")
{
    CHECK(TransformedExponential(1.0, 1.0).raw_moment(1) == 0.5);
    CHECK(TransformedExponential(1.0, 1.0).raw_moment(2) == 0.5);
    CHECK(TransformedExponential(1.0, 0.0).raw_moment(3) == 6.0);
    CHECK_THROWS_AS(TransformedExponential(1.0, 0.0).raw_moment(0), DomainError);

    for (double theta : theta_grid)
        for (double lam : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const TransformedExponential te(theta, lam);
            const auto gen = te.as_transform();
            for (int r = 1; r <= 4; ++r) {
                const double quad = verify::quadrature_moment([&](double x) { return gen.pdf(x); }, r, 0.0, inf);
                REQUIRE(std::abs(quad - te.raw_moment(r)) <= 1e-8 * std::abs(te.raw_moment(r)));
            }
            CHECK(te.mean() == Approx(te.raw_moment(1)).epsilon(1e-15));
        }

    CHECK(TransformedExponential(0.7, -0.4).mgf(0.0) == 1.0);
    CHECK(TransformedExponential(1.0, 0.0).mgf(0.5) == Approx(2.0).epsilon(1e-15));
    CHECK(TransformedExponential(1.0, 1.0).mgf(0.5) == Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(TransformedExponential(1.0, 0.3).mgf(1.0), DomainError);
    CHECK_THROWS_AS(TransformedExponential(1.0, 0.3).mgf(2.0), DomainError);

    const double h = 1e-5;
    for (double theta : theta_grid)
        for (double lam : lambda_grid) {
            const TransformedExponential te(theta, lam);
            const double d1 = (te.mgf(h) - te.mgf(-h)) / (2.0 * h);
            REQUIRE(std::abs(d1 - te.raw_moment(1)) <= 1e-6 * te.raw_moment(1));
        }
}

TEST_CASE("transformed exponential mean residual life")
{
    CHECK(TransformedExponential(1.0, 0.5).mean_residual_life(0.0) == Approx(0.75).epsilon(1e-15));
    for (double lam : {-1.0, -0.3, 0.6, 0.99})
        CHECK(TransformedExponential(1.0, lam).mean_residual_life(60.0) == Approx(1.0).epsilon(1e-12));
    for (double t : {0.0, 0.5, 3.0, 30.0})
        CHECK(TransformedExponential(1.0, 1.0).mean_residual_life(t) == Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(TransformedExponential(1.0, 0.2).mean_residual_life(-1.0), DomainError);

    // quadrature of the generic residual survival
    for (double theta : theta_grid)
        for (double lam : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const TransformedExponential te(theta, lam);
            const auto gen = te.as_transform();
            for (double t : {0.0, 0.4, 2.0}) {
                const double t_scaled = t / theta;
                auto resid = [&](double x) { return gen.residual_life_survival(t_scaled, x); };
                const double quad = integrate_tail(resid, 0.0, +1);
                REQUIRE(std::abs(quad - te.mean_residual_life(t_scaled)) <= 1e-8);
            }
        }
}

TEST_CASE("transformed exponential residual life closed form")
{
    for (double lam : {-0.9, 0.4, 1.0}) {
        const TransformedExponential te(1.3, lam);
        const auto gen = te.as_transform();
        for (double t : {0.0, 0.5, 2.0})
            for (double x : {0.0, 0.3, 1.7}) {
                REQUIRE(std::abs(te.residual_life_survival(t, x) - gen.residual_life_survival(t, x)) <= 1e-14);
                REQUIRE(std::abs(te.residual_mix_parameter(t) - gen.residual_mix_parameter(t)) <= 1e-15);
            }
    }
}

TEST_CASE("transformed exponential shape properties")
{
    for (double theta : theta_grid)
        for (double lam : lambda_grid) {
            const TransformedExponential te(theta, lam);
            double prev_h = te.hazard(0.0);
            double prev_m = te.mean_residual_life(0.0);
            for (int i = 1; i <= 1000; ++i) {
                const double x = i * 0.01 / theta;
                const double hz = te.hazard(x);
                const double m = te.mean_residual_life(x);
                if (lam > 0.0) {
                    REQUIRE(hz <= prev_h * (1.0 + 1e-14));
                    REQUIRE(m >= prev_m * (1.0 - 1e-14));
                    REQUIRE(m >= (2.0 - lam) / (2.0 * theta) * (1.0 - 1e-14));
                    REQUIRE(m <= 1.0 / theta * (1.0 + 1e-14));
                } else if (lam < 0.0) {
                    REQUIRE(hz >= prev_h * (1.0 - 1e-14));
                    REQUIRE(m <= prev_m * (1.0 + 1e-14));
                    REQUIRE(m <= (2.0 - lam) / (2.0 * theta) * (1.0 + 1e-14));
                    REQUIRE(m >= 1.0 / theta * (1.0 - 1e-14));
                }
                prev_h = hz;
                prev_m = m;
            }
            CHECK(te.mode() <= te.median());
            CHECK(te.median() <= te.mean());
        }
}

TEST_CASE("transformed exponential log-concavity checked numerically")
{
    // second differences of log g: <= 0 for lambda in [-1, 0], >= 0 for [0, 1]
    for (double lam : lambda_grid) {
        const TransformedExponential te(1.0, lam);
        const double h = 0.01;
        for (int i = 1; i < 1500; ++i) {
            const double x = 0.005 + i * h;
            const double d2 = std::log(te.pdf(x + h)) - 2.0 * std::log(te.pdf(x)) + std::log(te.pdf(x - h));
            if (lam <= 0.0)
                REQUIRE(d2 <= 1e-12);
            if (lam >= 0.0)
                REQUIRE(d2 >= -1e-12);
        }
    }
}

TEST_CASE("skew-Laplace matches the generic engine")
{
    for (double theta : theta_grid)
        for (double lam : lambda_grid) {
            const SkewLaplace sl(theta, lam);
            const auto gen = sl.as_transform();
            for (int i = -500; i < 500; ++i) {
                const double x = i * 0.02 * theta;
                REQUIRE(std::abs(sl.cdf(x) - gen.cdf(x)) <= 1e-15);
                REQUIRE(std::abs(sl.survival(x) - gen.survival(x)) <= 1e-15);
                REQUIRE(rel_err(sl.pdf(x), gen.pdf(x)) <= 1e-14);
                REQUIRE(rel_err(sl.hazard(x), gen.hazard(x)) <= 1e-13);
                const double q = (i + 500.5) / 1000.0;
                REQUIRE(sl.quantile(q) == gen.quantile(q));
            }
            CHECK(sl.cdf(0.0) == Approx((2.0 + lam) / 4.0).epsilon(1e-15));
            CHECK(sl.cdf(1e-12) - sl.cdf(-1e-12) < 1e-11);
        }
}

TEST_CASE("skew-Laplace point values")
{
    CHECK(SkewLaplace(1.0, 1.0).cdf(0.0) == 0.75);
    CHECK(SkewLaplace(1.0, 0.0).cdf(0.0) == 0.5);
    CHECK(SkewLaplace(1.0, 0.0).pdf(0.0) == 0.5);
    CHECK_THROWS_AS(SkewLaplace(-1.0, 0.0), DomainError);
}

TEST_CASE("skew-Laplace moments, mgf and summary")
{
    CHECK(SkewLaplace(1.0, 1.0).raw_moment(1) == -0.75);
    for (double lam : lambda_grid)
        CHECK(SkewLaplace(1.0, lam).raw_moment(2) == 2.0);
    CHECK(SkewLaplace(1.0, 0.0).raw_moment(3) == 0.0);
    CHECK_THROWS_AS(SkewLaplace(1.0, 0.0).raw_moment(-1), DomainError);

    for (double theta : theta_grid)
        for (double lam : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const SkewLaplace sl(theta, lam);
            const auto gen = sl.as_transform();
            for (int r = 1; r <= 4; ++r) {
                const double quad =
                    verify::quadrature_moment([&](double x) { return gen.pdf(x); }, r, -inf, inf, {0.0});
                const double exact = sl.raw_moment(r);
                if (exact == 0.0)
                    REQUIRE(std::abs(quad) <= 1e-10);
                else
                    REQUIRE(std::abs(quad - exact) <= 1e-8 * std::abs(exact));
            }
        }

    CHECK(SkewLaplace(2.0, -0.3).mgf(0.0) == 1.0);
    CHECK(SkewLaplace(1.0, 0.0).mgf(0.5) == Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(SkewLaplace(1.0, 1.0).mgf(0.5) == Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(SkewLaplace(1.0, 0.0).mgf(1.0), DomainError);
    CHECK_THROWS_AS(SkewLaplace(2.0, 0.0).mgf(-0.5), DomainError);

    const double h = 1e-4;
    for (double lam : lambda_grid) {
        const SkewLaplace sl(1.0, lam);
        const double d1 = (sl.mgf(h) - sl.mgf(-h)) / (2.0 * h);
        const double d2 = (sl.mgf(h) - 2.0 * sl.mgf(0.0) + sl.mgf(-h)) / (h * h);
        REQUIRE(std::abs(d1 - sl.raw_moment(1)) <= 1e-6);
        REQUIRE(std::abs(d2 - sl.raw_moment(2)) <= 1e-6);
    }

    const auto s0 = SkewLaplace(1.0, 0.0).summary();
    CHECK(s0.mean == 0.0);
    CHECK(s0.variance == 2.0); // E X^2 of the symmetric Laplace; see summary()
    CHECK(s0.skewness == 0.0);
    CHECK(s0.kurtosis == Approx(6.0).epsilon(1e-15));
    CHECK(SkewLaplace(1.0, -1.0).summary().skewness == Approx(1.1423).margin(5e-5));
    CHECK(SkewLaplace(1.0, 1.0).summary().skewness == Approx(-1.1423).margin(5e-5));
    CHECK(SkewLaplace(1.0, 1.0).summary().variance == Approx(23.0 / 16.0).epsilon(1e-15));

    // central moments by quadrature
    for (double theta : {0.5, 1.0, 2.0})
        for (double lam : {-1.0, -0.6, 0.0, 0.3, 1.0}) {
            const SkewLaplace sl(theta, lam);
            const auto gen = sl.as_transform();
            auto pdf = [&](double x) { return gen.pdf(x); };
            const double m1 = verify::quadrature_moment(pdf, 1, -inf, inf, {0.0});
            auto central = [&](int k) {
                return verify::quadrature_moment([&](double x) { return std::pow(x - m1, k) * gen.pdf(x); }, 0,
                                                 -inf, inf, {0.0});
            };
            const double var = central(2);
            const auto s = sl.summary();
            REQUIRE(std::abs(s.mean - m1) <= 1e-9);
            REQUIRE(std::abs(s.variance - var) <= 1e-8 * var);
            REQUIRE(std::abs(s.skewness - central(3) / std::pow(var, 1.5)) <= 1e-8);
            REQUIRE(std::abs(s.kurtosis - central(4) / (var * var)) <= 1e-8);
        }

    double prev = inf;
    for (int i = 0; i <= 200; ++i) {
        const double lam = -1.0 + i / 100.0;
        const auto s = SkewLaplace(1.0, lam).summary();
        REQUIRE(s.skewness <= prev);
        REQUIRE(std::abs(s.skewness) <= 1.14230);
        if (lam < 0.0)
            REQUIRE(s.skewness > 0.0);
        if (lam > 0.0)
            REQUIRE(s.skewness < 0.0);
        prev = s.skewness;
    }
}

TEST_CASE("skew-Laplace reflection swaps the sign of lambda")
{
    for (double lam : {0.3, 0.8, 1.0})
        for (int i = -100; i <= 100; ++i) {
            const double y = i * 0.05;
            REQUIRE(std::abs(SkewLaplace(1.0, lam).survival(-y) - SkewLaplace(1.0, -lam).cdf(y)) <= 1e-14);
        }
}
