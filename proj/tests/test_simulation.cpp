#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "censtest/error.hpp"
#include "censtest/rng.hpp"
#include "censtest/simulation.hpp"

using namespace censtest;

TEST_CASE("lifetime generators hit their moments") {
    SplitMix64 rng(1);
    auto mean_of = [&](const LifetimeGenerator& g, std::size_t n) {
        auto draws = sample_lifetimes(g, n, rng);
        double s = 0.0;
        for (double d : draws) {
            REQUIRE(d >= 0.0);
            s += d;
        }
        return s / static_cast<double>(n);
    };
    CHECK(mean_of(ExponentialGen{2.0}, 200000) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(mean_of(GammaGen{3.0, 2.0}, 200000) == doctest::Approx(6.0).epsilon(0.02));

    // lognormal median is exp(mu)
    auto draws = sample_lifetimes(LogNormalGen{0.0, 0.25}, 100000, rng);
    int below = 0;
    for (double d : draws) below += d <= 1.0 ? 1 : 0;
    CHECK(static_cast<double>(below) / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sampling from a curve generator stays on its support") {
    auto curve = make_curve({1.0, 2.0}, {0.6, 0.3});
    SplitMix64 rng(2);
    auto draws = sample_lifetimes(LifetimeGenerator{CurveGen{curve}}, 5000, rng);
    int at_max = 0;
    for (double d : draws) {
        CHECK(d >= 0.0);
        CHECK(d <= 2.0);
        if (d == 2.0) ++at_max;
    }
    CHECK(static_cast<double>(at_max) / 5000.0 == doctest::Approx(0.3).epsilon(0.1));
}

TEST_CASE("generator cdfs match closed forms") {
    CHECK(generator_cdf(ExponentialGen{2.0}, 0.5) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(generator_cdf(ExponentialGen{2.0}, 0.0) == 0.0);

    // gamma with shape 1 is exponential
    for (double t : {0.1, 0.7, 2.0})
        CHECK(generator_cdf(GammaGen{1.0, 0.5}, t) ==
              doctest::Approx(generator_cdf(ExponentialGen{2.0}, t)).epsilon(1e-12));

    CHECK(generator_cdf(LogNormalGen{0.0, 1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

    auto curve = make_curve({2.0}, {0.0});
    LifetimeGenerator g{CurveGen{curve}};
    CHECK(generator_cdf(g, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(generator_cdf(g, 2.0) == 1.0);
    CHECK(generator_cdf(g, 5.0) == 1.0);
}

TEST_CASE("target-rate censoring calibrates the uniform bound") {
    // Exp(1) both groups: the censoring rate under C ~ U(0, b) is (1-e^{-b})/b
    const double b =
        censoring_bound(TargetRate{0.25}, ExponentialGen{1.0}, 50, ExponentialGen{1.0}, 50);
    const double achieved = (1.0 - std::exp(-b)) / b;
    CHECK(std::abs(achieved - 0.25) <= 2e-4);

    // unequal groups weight the mixture by sample size
    const double b2 =
        censoring_bound(TargetRate{0.3}, ExponentialGen{1.0}, 100, ExponentialGen{2.0}, 50);
    const double a2 = (2.0 / 3.0) * (1.0 - std::exp(-b2)) / b2 +
                      (1.0 / 3.0) * (1.0 - std::exp(-2.0 * b2)) / (2.0 * b2);
    CHECK(std::abs(a2 - 0.3) <= 2e-4);

    CHECK_THROWS_AS(
        censoring_bound(TargetRate{0.0}, ExponentialGen{1.0}, 10, ExponentialGen{1.0}, 10),
        Error);
    CHECK_THROWS_AS(
        censoring_bound(TargetRate{1.0}, ExponentialGen{1.0}, 10, ExponentialGen{1.0}, 10),
        Error);
}

TEST_CASE("uniform-on-support censoring needs curve generators") {
    auto c0 = make_curve({2.0}, {0.0});
    auto c1 = make_curve({1.0, 3.0}, {0.5, 0.0});
    const double b = censoring_bound(UniformOnSupport{3.0}, CurveGen{c0}, 10, CurveGen{c1}, 10);
    CHECK(b == 9.0);
    CHECK_THROWS_AS(
        censoring_bound(UniformOnSupport{3.0}, ExponentialGen{1.0}, 10, CurveGen{c1}, 10),
        Error);
}

TEST_CASE("apply_censoring takes the minimum and flags events") {
    SplitMix64 lifetimes_rng(3), cens_rng(4);
    auto lifetimes = sample_lifetimes(ExponentialGen{1.0}, 5000, lifetimes_rng);
    const double bound =
        censoring_bound(TargetRate{0.25}, ExponentialGen{1.0}, 1, ExponentialGen{1.0}, 1);
    auto s = apply_censoring(lifetimes, bound, cens_rng, "g");
    REQUIRE(s.size() == 5000);
    CHECK(s.label == "g");
    int censored = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& o = s.observations[i];
        CHECK(o.time <= lifetimes[i]);
        CHECK(o.time <= bound);
        if (o.event) CHECK(o.time == lifetimes[i]);
        else {
            CHECK(o.time < lifetimes[i]);
            ++censored;
        }
    }
    CHECK(static_cast<double>(censored) / 5000.0 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("generator validation") {
    CHECK_THROWS_AS(validate_generator(ExponentialGen{0.0}), Error);
    CHECK_THROWS_AS(validate_generator(GammaGen{-1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate_generator(GammaGen{1.0, 0.0}), Error);
    CHECK_THROWS_AS(validate_generator(LogNormalGen{0.0, 0.0}), Error);
    CHECK_NOTHROW(validate_generator(ExponentialGen{0.5}));
}

TEST_CASE("monte carlo study is reproducible and thread-count invariant") {
    Scenario sc;
    sc.name = "tiny";
    sc.gen0 = ExponentialGen{1.0};
    sc.gen1 = ExponentialGen{1.5};
    sc.censoring = TargetRate{0.15};
    sc.n0 = 12;
    sc.n1 = 12;
    sc.replications = 8;
    sc.plan.mode = PermutationMode::MonteCarlo;
    sc.plan.monte_carlo_rounds = 99;
    sc.plan.seed = 5;
    sc.tests.push_back({"energy", {StatisticForm::V, EnergyMeasure{1.0}}});
    sc.tests.push_back({"gauss", {StatisticForm::V, MmdMeasure{GaussianKernel{}}}});

    auto r1 = run_monte_carlo(sc, 1);
    auto r3 = run_monte_carlo(sc, 3);
    REQUIRE(r1.size() == 2);
    REQUIRE(r3.size() == 2);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].scenario == "tiny");
        CHECK(r1[i].test == r3[i].test);
        CHECK(r1[i].rejection_rate == r3[i].rejection_rate);
        CHECK(r1[i].mean_p == r3[i].mean_p);
        CHECK(r1[i].sd_p == r3[i].sd_p);
        CHECK(r1[i].replications_used + r1[i].replications_skipped == 8);
        CHECK(r1[i].mean_p > 0.0);
        CHECK(r1[i].mean_p <= 1.0);
    }
    CHECK(r1[0].test == "energy");
    CHECK(r1[1].test == "gauss");

    // a different seed moves the estimates
    sc.plan.seed = 6;
    auto r2 = run_monte_carlo(sc, 1);
    CHECK(r2[0].mean_p != r1[0].mean_p);
}
