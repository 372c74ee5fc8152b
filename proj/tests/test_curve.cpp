#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "censtest/curve.hpp"
#include "censtest/error.hpp"
#include "censtest/rng.hpp"

using namespace censtest;

TEST_CASE("pava pools adjacent violators") {
    std::vector<double> v{1.0, 0.6, 0.7, 0.2};
    auto out = pava_nonincreasing(v);
    REQUIRE(out.size() == 4);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(0.65));
    CHECK(out[2] == doctest::Approx(0.65));
    CHECK(out[3] == doctest::Approx(0.2));
}

TEST_CASE("pava output is the closest nonincreasing sequence") {
    SplitMix64 rng(42);
    auto sq_dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return s;
    };
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rng.below(7);
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform();
        auto out = pava_nonincreasing(v);

        for (std::size_t i = 1; i < n; ++i) CHECK(out[i] <= out[i - 1] + 1e-12);
        double sum_in = 0.0, sum_out = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum_in += v[i];
            sum_out += out[i];
        }
        CHECK(sum_out == doctest::Approx(sum_in).epsilon(1e-12));

        // no random nonincreasing candidate does better
        const double best = sq_dist(v, out);
        for (int c = 0; c < 60; ++c) {
            std::vector<double> cand(n);
            for (auto& x : cand) x = rng.uniform();
            std::sort(cand.begin(), cand.end(), std::greater<>());
            CHECK(sq_dist(v, cand) >= best - 1e-12);
        }
    }

    // already nonincreasing input passes through unchanged
    std::vector<double> mono{0.9, 0.6, 0.6, 0.1};
    CHECK(pava_nonincreasing(mono) == mono);
}

TEST_CASE("make_curve prepends the origin knot and cleans the shape") {
    auto c = make_curve({1.0, 2.0}, {0.5, 0.2});
    REQUIRE(c.t.size() == 3);
    CHECK(c.t[0] == 0.0);
    CHECK(c.s[0] == 1.0);
    CHECK(c.t_max() == 2.0);
    CHECK(c.survivor_mass() == doctest::Approx(0.2));

    // unsorted knots and small upticks are handled
    auto d = make_curve({2.0, 1.0, 3.0}, {0.4, 0.38, 0.1});
    CHECK(d.t[1] == 1.0);
    CHECK(d.s[1] == doctest::Approx(0.39));
    CHECK(d.s[2] == doctest::Approx(0.39));

    CHECK_THROWS_AS(make_curve({1.0, 1.0}, {0.5, 0.4}), Error);
    CHECK_THROWS_AS(make_curve({0.0, 1.0}, {0.9, 0.5}), Error);
    CHECK_THROWS_AS(make_curve({1.0}, {1.2}), Error);
    CHECK_THROWS_AS(make_curve({-1.0, 1.0}, {1.0, 0.5}), Error);
    CHECK_THROWS_AS(make_curve({1.0, 2.0}, {0.5}), Error);
}

TEST_CASE("restrict_curve interpolates a knot at tau") {
    auto c = make_curve({2.0}, {0.0});
    auto r = restrict_curve(c, 1.0);
    CHECK(r.t_max() == 1.0);
    CHECK(r.survivor_mass() == doctest::Approx(0.5).epsilon(1e-15));

    // at or past the right end the curve is unchanged
    for (double tau : {2.0, 3.0}) {
        auto same = restrict_curve(c, tau);
        CHECK(same.t_max() == 2.0);
        CHECK(same.survivor_mass() == 0.0);
    }

    CHECK_THROWS_AS(restrict_curve(c, 0.0), Error);
}

TEST_CASE("sampling follows the curve distribution") {
    SplitMix64 rng(2718);
    const int n = 20000;

    SUBCASE("uniform on [0, 1]") {
        auto c = make_curve({1.0}, {0.0});
        std::vector<double> draws(n);
        for (auto& d : draws) d = sample_from_curve(c, rng);
        std::sort(draws.begin(), draws.end());
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = draws[i];  // uniform cdf
            const double emp_hi = static_cast<double>(i + 1) / n;
            const double emp_lo = static_cast<double>(i) / n;
            worst = std::max(worst, std::max(std::abs(emp_hi - f), std::abs(f - emp_lo)));
        }
        CHECK(worst < 0.02);  // KS(0.001) for n = 20000 is about 0.014
    }

    SUBCASE("survivor mass becomes an atom at t_max") {
        auto c = make_curve({1.0}, {0.4});
        int at_max = 0;
        for (int i = 0; i < n; ++i) {
            const double d = sample_from_curve(c, rng);
            CHECK(d <= 1.0);
            if (d == 1.0) ++at_max;
        }
        const double frac = static_cast<double>(at_max) / n;
        CHECK(frac == doctest::Approx(0.4).epsilon(0.05));
    }
}

TEST_CASE("load_curve reads t,s csv files and reports bad rows") {
    auto parse = [](const char* text) {
        const std::string path = "/tmp/censtest_curve_test.csv";
        std::ofstream out(path);
        out << text;
        out.close();
        return load_curve(path);
    };
    auto c = parse("t,s\n0,1\n1,0.5\n2,0.25\n");
    CHECK(c.t_max() == 2.0);
    CHECK(c.survivor_mass() == 0.25);

    // rows are numbered from the header, so the bad line is row 3
    CHECK_THROWS_WITH_AS(parse("t,s\n0,1\nx,0.5\n"), doctest::Contains("row 3"), Error);
    CHECK_THROWS_AS(parse("time,s\n0,1\n"), Error);
}
