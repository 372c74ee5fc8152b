#include "censtest/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "censtest/error.hpp"

namespace censtest {

void validate_generator(const LifetimeGenerator& g) {
    std::visit(
        [](const auto& gg) {
            using T = std::decay_t<decltype(gg)>;
            if constexpr (std::is_same_v<T, ExponentialGen>) {
                if (!(gg.rate > 0.0)) throw Error("exponential: rate must be positive");
            } else if constexpr (std::is_same_v<T, GammaGen>) {
                if (!(gg.shape > 0.0) || !(gg.scale > 0.0))
                    throw Error("gamma: shape and scale must be positive");
            } else if constexpr (std::is_same_v<T, LogNormalGen>) {
                if (!(gg.sigma > 0.0)) throw Error("lognormal: sigma must be positive");
            } else {
                if (gg.curve.t.size() < 2) throw Error("curve generator: need at least two knots");
            }
        },
        g);
}

std::vector<double> sample_lifetimes(const LifetimeGenerator& g, std::size_t n,
                                     SplitMix64& rng) {
    validate_generator(g);
    std::vector<double> out(n);
    std::visit(
        [&](const auto& gg) {
            using T = std::decay_t<decltype(gg)>;
            if constexpr (std::is_same_v<T, ExponentialGen>) {
                std::exponential_distribution<double> dist(gg.rate);
                for (auto& x : out) x = dist(rng);
            } else if constexpr (std::is_same_v<T, GammaGen>) {
                std::gamma_distribution<double> dist(gg.shape, gg.scale);
                for (auto& x : out) x = dist(rng);
            } else if constexpr (std::is_same_v<T, LogNormalGen>) {
                std::lognormal_distribution<double> dist(gg.mu, gg.sigma);
                for (auto& x : out) x = dist(rng);
            } else {
                for (auto& x : out) x = sample_from_curve(gg.curve, rng);
            }
        },
        g);
    return out;
}

double generator_cdf(const LifetimeGenerator& g, double t) {
    if (t <= 0.0) return 0.0;
    return std::visit(
        [&](const auto& gg) -> double {
            using T = std::decay_t<decltype(gg)>;
            if constexpr (std::is_same_v<T, ExponentialGen>) {
                return -std::expm1(-gg.rate * t);
            } else if constexpr (std::is_same_v<T, GammaGen>) {
                return boost::math::cdf(boost::math::gamma_distribution<>(gg.shape, gg.scale), t);
            } else if constexpr (std::is_same_v<T, LogNormalGen>) {
                return boost::math::cdf(boost::math::lognormal_distribution<>(gg.mu, gg.sigma), t);
            } else {
                const auto& c = gg.curve;
                if (t >= c.t_max()) return 1.0;  // survivor mass sits at t_max
                const auto it = std::upper_bound(c.t.begin(), c.t.end(), t);
                const std::size_t hi = static_cast<std::size_t>(it - c.t.begin());
                const std::size_t lo = hi - 1;
                const double w = (t - c.t[lo]) / (c.t[hi] - c.t[lo]);
                return 1.0 - (c.s[lo] + w * (c.s[hi] - c.s[lo]));
            }
        },
        g);
}

namespace {

// P(C < T) for C ~ Uniform(0, b) equals the average of the mixture survival
// function over [0, b].
double censoring_rate_for_bound(double b, const LifetimeGenerator& g0, double p0,
                                const LifetimeGenerator& g1, double p1) {
    auto survival = [&](double t) {
        return p0 * (1.0 - generator_cdf(g0, t)) + p1 * (1.0 - generator_cdf(g1, t));
    };
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(survival, 0.0, b, 10);
    return integral / b;
}

}  // namespace

double censoring_bound(const CensoringModel& model, const LifetimeGenerator& g0,
                       std::size_t n0, const LifetimeGenerator& g1, std::size_t n1) {
    validate_generator(g0);
    validate_generator(g1);

    if (const auto* u = std::get_if<UniformOnSupport>(&model)) {
        if (!(u->multiplier > 0.0)) throw Error("censoring: multiplier must be positive");
        const auto* c0 = std::get_if<CurveGen>(&g0);
        const auto* c1 = std::get_if<CurveGen>(&g1);
        if (!c0 || !c1)
            throw Error("uniform-on-support censoring needs curve generators");
        return u->multiplier * std::max(c0->curve.t_max(), c1->curve.t_max());
    }

    const double target = std::get<TargetRate>(model).rate;
    if (!(target > 0.0 && target < 1.0))
        throw Error("censoring: target rate must lie in (0, 1)");
    const double p0 = static_cast<double>(n0) / static_cast<double>(n0 + n1);
    const double p1 = 1.0 - p0;

    // rate(b) decreases from 1 to 0; bracket then bisect to 1e-4 on the rate.
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (censoring_rate_for_bound(hi, g0, p0, g1, p1) > target) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) throw Error("censoring: cannot bracket the target rate");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r = censoring_rate_for_bound(mid, g0, p0, g1, p1);
        if (std::abs(r - target) <= 1e-4) return mid;
        (r > target ? lo : hi) = mid;
    }
    throw Error("censoring: bisection failed to converge");
}

CensoredSample apply_censoring(const std::vector<double>& lifetimes, double bound,
                               SplitMix64& rng, const std::string& label) {
    if (!(bound > 0.0)) throw Error("censoring: bound must be positive");
    CensoredSample s;
    s.label = label;
    s.observations.reserve(lifetimes.size());
    for (double t : lifetimes) {
        const double c = bound * rng.uniform();
        s.observations.push_back({std::min(t, c), t <= c, {}});
    }
    return s;
}

std::vector<McRow> run_monte_carlo(const Scenario& sc, int threads) {
    if (sc.tests.empty()) throw Error("scenario '" + sc.name + "': no tests configured");
    if (sc.replications == 0) throw Error("scenario '" + sc.name + "': replications must be positive");
    if (sc.n0 == 0 || sc.n1 == 0) throw Error("scenario '" + sc.name + "': group sizes must be positive");
    if (!(sc.alpha_level > 0.0 && sc.alpha_level < 1.0))
        throw Error("scenario '" + sc.name + "': alpha_level must lie in (0, 1)");
    std::vector<StatisticSpec> specs;
    for (const auto& t : sc.tests) {
        validate_spec(t.spec);
        specs.push_back(t.spec);
    }

    const double bound =
        censoring_bound(sc.censoring, sc.gen0, sc.n0, sc.gen1, sc.n1);

    const std::size_t R = sc.replications;
    const std::size_t T = sc.tests.size();
    // p-values per (replication, test); NaN marks a skipped replication.
    std::vector<double> pvals(R * T, std::numeric_limits<double>::quiet_NaN());

    auto replicate = [&](std::size_t r) {
        SplitMix64 rng_l0 = substream(sc.plan.seed, r, 0);
        SplitMix64 rng_l1 = substream(sc.plan.seed, r, 1);
        SplitMix64 rng_c0 = substream(sc.plan.seed, r, 2);
        SplitMix64 rng_c1 = substream(sc.plan.seed, r, 3);

        TwoSampleData d;
        d.group0 = apply_censoring(sample_lifetimes(sc.gen0, sc.n0, rng_l0), bound, rng_c0, "0");
        d.group1 = apply_censoring(sample_lifetimes(sc.gen1, sc.n1, rng_l1), bound, rng_c1, "1");

        PermutationPlan plan = sc.plan;
        plan.threads = 1;  // parallelism lives at the replication level
        plan.seed = substream(sc.plan.seed, r, 4)();
        try {
            const auto results = run_battery(d, specs, plan, sc.bandwidth);
            for (std::size_t t = 0; t < T; ++t) pvals[r * T + t] = results[t].p_value;
        } catch (const Error&) {
            // no events in a group, or too many degenerate assignments:
            // exclude the replication and count it below
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, hw);
    workers = std::min(workers, R);
    if (workers <= 1) {
        for (std::size_t r = 0; r < R; ++r) replicate(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t r = next.fetch_add(1);
                    if (r >= R) return;
                    replicate(r);
                }
            });
        for (auto& th : pool) th.join();
    }

    std::vector<McRow> rows(T);
    for (std::size_t t = 0; t < T; ++t) {
        McRow& row = rows[t];
        row.scenario = sc.name;
        row.test = sc.tests[t].name;
        double sum = 0.0;
        std::size_t used = 0, rejected = 0;
        for (std::size_t r = 0; r < R; ++r) {
            const double p = pvals[r * T + t];
            if (std::isnan(p)) continue;
            ++used;
            sum += p;
            rejected += p <= sc.alpha_level;
        }
        row.replications_used = used;
        row.replications_skipped = R - used;
        if (used == 0) throw Error("scenario '" + sc.name + "': every replication was degenerate");
        row.mean_p = sum / static_cast<double>(used);
        double ss = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            const double p = pvals[r * T + t];
            if (std::isnan(p)) continue;
            ss += (p - row.mean_p) * (p - row.mean_p);
        }
        row.sd_p = used > 1 ? std::sqrt(ss / static_cast<double>(used - 1)) : 0.0;
        row.rejection_rate = static_cast<double>(rejected) / static_cast<double>(used);
    }
    return rows;
}

}  // namespace censtest
