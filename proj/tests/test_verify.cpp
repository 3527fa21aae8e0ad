#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ordmix/named.hpp"
#include "ordmix/quadrature.hpp"
#include "ordmix/random.hpp"
#include "ordmix/transform.hpp"
#include "ordmix/verify.hpp"

using namespace ordmix;
using namespace ordmix::verify;
using Catch::Approx;

TEST_CASE("ks statistic on plug-in positions")
{
    const Exponential e(1.0);
    SampleBatch<double> batch;
    for (int i = 1; i <= 10; ++i)
        batch.values.push_back(e.quantile((i - 0.5) / 10.0));
    const auto r = ks_statistic(batch, [&](double x) { return e.cdf(x); });
    CHECK(r.statistic == Approx(0.05).epsilon(1e-12));
    CHECK(r.threshold == Approx(1.36 / std::sqrt(10.0)).epsilon(1e-15));
    CHECK(r.pass);

    SampleBatch<double> one{{e.quantile(0.5)}, 0};
    CHECK(ks_statistic(one, [&](double x) { return e.cdf(x); }).statistic == Approx(0.5).epsilon(1e-15));

    // a grossly wrong model is rejected
    Stream rng(5);
    SampleBatch<double> draws{Transformed(e, 0.0).sample_inverse(2000, rng), 5};
    const auto bad = ks_statistic(draws, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-2.0 * x); });
    CHECK_FALSE(bad.pass);
    CHECK(bad.statistic > bad.threshold);
}

TEST_CASE("ks rejects empty input")
{
    SampleBatch<double> empty;
    SampleBatch<double> some{{1.0, 2.0}, 0};
    CHECK_THROWS_AS(ks_statistic(empty, [](double) { return 0.5; }), EmptySample);
    CHECK_THROWS_AS(ks_two_sample(empty, some), EmptySample);
    CHECK_THROWS_AS(ks_two_sample(some, empty), EmptySample);
}

TEST_CASE("two-sample ks")
{
    SampleBatch<double> a{{1.0, 2.0, 3.0, 4.0}, 0};
    SampleBatch<double> b{{1.0, 2.0, 3.0, 4.0}, 0};
    CHECK(ks_two_sample(a, b).statistic == 0.0);
    SampleBatch<double> c{{5.0, 6.0}, 0};
    CHECK(ks_two_sample(a, c).statistic == 1.0);
    CHECK(ks_two_sample(a, c).threshold == Approx(1.36 * std::sqrt(6.0 / 8.0)).epsilon(1e-15));
}

TEST_CASE("mixture sampler passes ks at the documented seed")
{
    const Transformed g(Exponential(1.0), 0.5);
    Stream rng(42);
    SampleBatch<double> batch{g.sample(100000, rng), 42};
    const auto r = ks_statistic(batch, [&](double x) { return g.cdf(x); });
    CHECK(r.pass);
    CHECK(r.statistic <= r.threshold);
}

TEST_CASE("quadrature moments")
{
    const Exponential e(1.0);
    CHECK(std::abs(quadrature_moment([&](double x) { return e.pdf(x); }, 1, 0.0, inf) - 1.0) <= 1e-10);
    CHECK(std::abs(quadrature_moment([&](double x) { return e.pdf(x); }, 0, 0.0, inf) - 1.0) <= 1e-10);

    const auto te = TransformedExponential(1.0, 1.0).as_transform();
    CHECK(std::abs(quadrature_moment([&](double x) { return te.pdf(x); }, 2, 0.0, inf) - 0.5) <= 1e-8);

    const auto sl = SkewLaplace(1.0, 1.0).as_transform();
    CHECK(std::abs(quadrature_moment([&](double x) { return sl.pdf(x); }, 1, -inf, inf, {0.0}) + 0.75) <= 1e-8);

    const Uniform u(-1.0, 3.0);
    CHECK(quadrature_moment([&](double x) { return u.pdf(x); }, 1, -1.0, 3.0) == Approx(1.0).epsilon(1e-12));
    CHECK(quadrature_moment([&](double x) { return u.pdf(x); }, 2, -1.0, 3.0) == Approx(7.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(quadrature_moment([&](double x) { return e.pdf(x); }, -1, 0.0, inf), DomainError);
}

TEST_CASE("quadrature reports non-convergence")
{
    auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(adaptive_simpson(step, 0.0, 1.0, 1e-10), NonConvergence);
    CHECK_THROWS_AS(adaptive_simpson(step, 0.0, 1.0, 1e-10, 12), NonConvergence);
    CHECK_THROWS_AS(integrate_tail([](double) { return 1.0; }, 0.0, +1), NonConvergence);
    CHECK_THROWS_AS(adaptive_simpson(step, 0.0, inf), DomainError);
}

TEST_CASE("empirical copula")
{
    PairBatch diag;
    const int n = 1000;
    for (int i = 0; i < n; ++i)
        diag.values.emplace_back(i * 0.37, std::exp(i * 0.001));
    CHECK(std::abs(empirical_copula(diag, 0.5, 0.5) - 0.5) <= 1.0 / n);
    CHECK(std::abs(empirical_copula(diag, 0.3, 0.8) - 0.3) <= 1.0 / n);

    Stream rng(42);
    PairBatch indep;
    indep.seed = 42;
    const std::size_t m = 100000;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = rng.uniform();
        indep.values.emplace_back(a, rng.uniform());
    }
    const EmpiricalCopula c(indep);
    CHECK(std::abs(c(0.5, 0.5) - 0.25) <= binomial_bound(0.25, m));
    CHECK(c(1.0, 1.0) == 1.0);
    CHECK(c(0.0, 0.7) == 0.0);
    CHECK(binomial_bound(0.25, m) == Approx(3.0 * std::sqrt(0.25 * 0.75 / m)).epsilon(1e-15));

    CHECK_THROWS_AS(EmpiricalCopula(PairBatch{}), EmptySample);
    CHECK_THROWS_AS(empirical_joint_cdf(PairBatch{}, 0.0, 0.0), EmptySample);
}

TEST_CASE("empirical joint cdf")
{
    PairBatch b{{{0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}, {3.0, 3.0}}, 0};
    CHECK(empirical_joint_cdf(b, 1.5, 2.5) == 0.5);
    CHECK(empirical_joint_cdf(b, 3.0, 3.0) == 1.0);
    CHECK(empirical_joint_cdf(b, -1.0, 5.0) == 0.0);
}

TEST_CASE("batches are reproducible from their seed")
{
    const Transformed g(Weibull(1.5, 2.0), -0.4);
    Stream a(123);
    Stream b(123);
    const SampleBatch<double> x{g.sample(5000, a), 123};
    const SampleBatch<double> y{g.sample(5000, b), 123};
    CHECK(x.values == y.values);
    const auto rx = ks_statistic(x, [&](double t) { return g.cdf(t); });
    const auto ry = ks_statistic(y, [&](double t) { return g.cdf(t); });
    CHECK(rx.statistic == ry.statistic);
    CHECK(rx.pass == (rx.statistic <= rx.threshold));
}
