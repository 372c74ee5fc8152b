#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "censtest/data.hpp"
#include "censtest/error.hpp"
#include "censtest/km.hpp"
#include "censtest/rng.hpp"

using namespace censtest;

namespace {

CensoredSample make(const std::vector<double>& t, const std::vector<int>& e) {
    CensoredSample s{"s", {}};
    for (std::size_t i = 0; i < t.size(); ++i)
        s.observations.push_back({t[i], e[i] != 0, {}});
    return s;
}

// Literal transcription of the jump-weight product formula, kept independent
// of the incremental scheme in km_weights.
std::vector<double> oracle_weights(const std::vector<int>& e) {
    const std::size_t n = e.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        if (!e[i - 1]) continue;
        double prod = 1.0;
        for (std::size_t j = 1; j < i; ++j)
            if (e[j - 1])
                prod *= static_cast<double>(n - j) / static_cast<double>(n - j + 1);
        w[i - 1] = prod / static_cast<double>(n - i + 1);
    }
    return w;
}

}  // namespace

TEST_CASE("frozen jump weights") {
    auto w = km_weights(make({1, 2, 3}, {1, 0, 1}));
    CHECK(w.weights[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w.weights[1] == 0.0);
    CHECK(w.weights[2] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(w.weight_sum == doctest::Approx(1.0).epsilon(1e-15));

    auto v = km_weights(make({1, 2}, {1, 0}));
    CHECK(v.weights[0] == 0.5);
    CHECK(v.weights[1] == 0.0);
    CHECK(v.weight_sum == 0.5);

    auto u = km_weights(make({1, 2, 3}, {0, 1, 1}));
    CHECK(u.weights[0] == 0.0);
    CHECK(u.weights[1] == 0.5);
    CHECK(u.weights[2] == 0.5);
}

TEST_CASE("no censoring gives exactly 1/n per observation") {
    for (std::size_t n : {1u, 2u, 3u, 7u, 10u, 33u, 60u}) {
        std::vector<double> t(n);
        std::vector<int> e(n, 1);
        for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
        auto w = km_weights(make(t, e));
        for (double x : w.weights) CHECK(x == 1.0 / static_cast<double>(n));
    }
}

TEST_CASE("weights match the product formula on random censored samples") {
    SplitMix64 rng(20240915);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.below(40);
        std::vector<double> t(n);
        std::vector<int> e(n);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            // small integer grid so ties are common
            t[i] = static_cast<double>(rng.below(8));
            e[i] = rng.uniform() < 0.7 ? 1 : 0;
            any = any || e[i];
        }
        if (!any) e[rng.below(n)] = 1;
        auto ordered = order_sample(make(t, e)).sample;
        std::vector<int> eo(n);
        for (std::size_t i = 0; i < n; ++i) eo[i] = ordered.observations[i].event ? 1 : 0;

        auto w = km_weights(ordered);
        auto expect = oracle_weights(eo);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(w.weights[i] == doctest::Approx(expect[i]).epsilon(1e-12));
            sum += expect[i];
        }
        CHECK(w.weight_sum == doctest::Approx(sum).epsilon(1e-12));

        // mass identity: total weight is one minus the survival product
        double surv = 1.0;
        for (std::size_t i = 1; i <= n; ++i)
            if (eo[i - 1])
                surv *= static_cast<double>(n - i) / static_cast<double>(n - i + 1);
        CHECK(w.weight_sum == doctest::Approx(1.0 - surv).epsilon(1e-12));
        if (eo[n - 1]) CHECK(w.weight_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("censored observations always carry zero weight") {
    auto w = km_weights(make({1, 1, 2, 2, 3}, {1, 0, 1, 0, 1}));
    CHECK(w.weights[1] == 0.0);
    CHECK(w.weights[3] == 0.0);
    CHECK_FALSE(w.events[1]);
}

TEST_CASE("normalize_weights rescales to unit mass") {
    auto w = km_weights(make({1, 2, 3}, {1, 1, 0}));
    CHECK(w.weight_sum < 1.0);
    auto nw = normalize_weights(w);
    CHECK(nw.weight_sum == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nw.weights[2] == 0.0);
    CHECK(nw.weights[0] / nw.weights[1] ==
          doctest::Approx(w.weights[0] / w.weights[1]).epsilon(1e-15));
}

TEST_CASE("km_weights rejects bad input") {
    CHECK_THROWS_WITH_AS(km_weights(make({1, 2, 3}, {0, 0, 0})),
                         doctest::Contains("no events"), Error);
    CHECK_THROWS_WITH_AS(km_weights(make({2, 1}, {1, 1})),
                         doctest::Contains("ordering"), Error);
    // censoring before an event at the same time violates the tie rule
    CHECK_THROWS_AS(km_weights(make({1, 1}, {0, 1})), Error);
    CHECK_THROWS_AS(km_weights(make({}, {})), Error);
}
