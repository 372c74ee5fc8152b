#include "censtest/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "censtest/error.hpp"
#include "censtest/rng.hpp"
#include "engine.hpp"

namespace censtest {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;  // exact at every step
        if (c > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(c);
}

Combinations::Combinations(std::size_t n, std::size_t k) : n_(n), cur_(k) {
    if (k > n) throw Error("combinations: k exceeds n");
    std::iota(cur_.begin(), cur_.end(), std::size_t{0});
}

bool Combinations::advance() {
    const std::size_t k = cur_.size();
    if (k == 0) return false;
    std::size_t i = k;
    while (i-- > 0) {
        if (cur_[i] != i + n_ - k) {
            ++cur_[i];
            for (std::size_t j = i + 1; j < k; ++j) cur_[j] = cur_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

namespace {

struct Tally {
    std::vector<std::uint64_t> exceed;
    std::vector<std::uint64_t> degenerate;
};

// Scores one assignment against the observed statistics.
void score(const detail::Engine& eng, std::span<const std::uint8_t> group,
           detail::Engine::Scratch& scratch, std::span<const double> observed, Tally& t) {
    const bool usable = eng.assign_weights(group, scratch);
    for (std::size_t s = 0; s < eng.spec_count(); ++s) {
        if (!usable || eng.degenerate(s, scratch)) {
            ++t.exceed[s];
            ++t.degenerate[s];
            continue;
        }
        if (eng.evaluate(s, scratch).raw >= observed[s]) ++t.exceed[s];
    }
}

std::uint64_t mc_rounds_for(const PermutationPlan& plan) {
    if (plan.monte_carlo_rounds == 0) throw Error("monte_carlo_rounds must be positive");
    return plan.monte_carlo_rounds;
}

}  // namespace

std::vector<TestResult> run_battery(const TwoSampleData& d,
                                    std::span<const StatisticSpec> specs,
                                    const PermutationPlan& plan,
                                    const BandwidthRule& rule) {
    if (specs.empty()) throw Error("no statistics configured");

    // Resolve bandwidths up front; sigma stays fixed across permutations.
    std::optional<double> heuristic;
    std::vector<StatisticSpec> resolved(specs.begin(), specs.end());
    for (auto& s : resolved) {
        if (auto* mmd = std::get_if<MmdMeasure>(&s.measure)) {
            if (kernel_needs_sigma(mmd->kernel)) {
                if (!heuristic) heuristic = median_heuristic(d, rule);
                mmd->kernel = resolve_kernel(mmd->kernel, *heuristic);
            }
        }
    }

    const detail::Engine eng(d, resolved);
    const std::size_t n = eng.n();
    const std::size_t n0 = eng.n0();

    auto scratch = eng.make_scratch();
    if (!eng.assign_weights(eng.observed_assignment(), scratch))
        throw Error("a group has no events: Kaplan-Meier weights all zero");

    std::vector<TestResult> results(resolved.size());
    std::vector<double> observed(resolved.size());
    for (std::size_t s = 0; s < resolved.size(); ++s) {
        if (eng.degenerate(s, scratch))
            throw Error("U-form statistic needs at least two events per group");
        results[s].spec = resolved[s];
        results[s].statistic = eng.evaluate(s, scratch);
        observed[s] = results[s].statistic.raw;
        if (const auto* mmd = std::get_if<MmdMeasure>(&resolved[s].measure))
            results[s].sigma = kernel_sigma(mmd->kernel);
        results[s].n0 = n0;
        results[s].n1 = eng.n1();
    }

    const std::uint64_t total = binomial_capped(n, n0, plan.exact_threshold);
    bool exact = false;
    switch (plan.mode) {
        case PermutationMode::Auto:
            exact = total <= plan.exact_threshold;
            break;
        case PermutationMode::Exact:
            if (total > plan.exact_threshold)
                throw Error("exact enumeration: C(n, n0) exceeds the threshold");
            exact = true;
            break;
        case PermutationMode::MonteCarlo:
            break;
    }

    Tally tally{std::vector<std::uint64_t>(resolved.size(), 0),
                std::vector<std::uint64_t>(resolved.size(), 0)};
    std::uint64_t scored = 0;

    if (exact) {
        std::vector<std::uint8_t> group(n);
        Combinations comb(n, n0);
        do {
            std::fill(group.begin(), group.end(), std::uint8_t{1});
            for (std::size_t p : comb.current()) group[p] = 0;
            score(eng, group, scratch, observed, tally);
            ++scored;
        } while (comb.advance());
    } else {
        const std::uint64_t rounds = mc_rounds_for(plan);
        unsigned hw = std::thread::hardware_concurrency();
        std::size_t workers = plan.threads > 0 ? static_cast<std::size_t>(plan.threads)
                                               : std::max(1u, hw);
        workers = std::min<std::size_t>(workers, rounds);

        std::vector<Tally> parts(
            workers, Tally{std::vector<std::uint64_t>(resolved.size(), 0),
                           std::vector<std::uint64_t>(resolved.size(), 0)});
        auto worker = [&](std::size_t w, std::uint64_t lo, std::uint64_t hi) {
            auto sc = eng.make_scratch();
            std::vector<std::uint8_t> group(n);
            std::vector<std::size_t> idx(n);
            for (std::uint64_t i = lo; i < hi; ++i) {
                // Stream keyed by the draw index: the tally is independent of
                // how draws are split across workers.
                SplitMix64 rng = substream(plan.seed, i);
                std::iota(idx.begin(), idx.end(), std::size_t{0});
                for (std::size_t j = 0; j < n0; ++j)
                    std::swap(idx[j], idx[j + rng.below(n - j)]);
                std::fill(group.begin(), group.end(), std::uint8_t{1});
                for (std::size_t j = 0; j < n0; ++j) group[idx[j]] = 0;
                score(eng, group, sc, observed, parts[w]);
            }
        };

        if (workers == 1) {
            worker(0, 0, rounds);
        } else {
            std::vector<std::thread> pool;
            const std::uint64_t chunk = (rounds + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::uint64_t lo = w * chunk;
                const std::uint64_t hi = std::min<std::uint64_t>(rounds, lo + chunk);
                if (lo < hi) pool.emplace_back(worker, w, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        for (const auto& part : parts)
            for (std::size_t s = 0; s < resolved.size(); ++s) {
                tally.exceed[s] += part.exceed[s];
                tally.degenerate[s] += part.degenerate[s];
            }
        scored = rounds;
    }

    for (std::size_t s = 0; s < resolved.size(); ++s) {
        if (2 * tally.degenerate[s] > scored)
            throw Error("more than half of the permuted assignments are degenerate; "
                        "too few events to calibrate the test");
        results[s].exact = exact;
        results[s].permutations = scored;
        results[s].exceedances = tally.exceed[s];
        results[s].degenerate = tally.degenerate[s];
        results[s].p_value =
            exact ? static_cast<double>(tally.exceed[s]) / static_cast<double>(scored)
                  : (1.0 + static_cast<double>(tally.exceed[s])) /
                        (1.0 + static_cast<double>(scored));
    }
    return results;
}

TestResult permutation_test(const TwoSampleData& d, const StatisticSpec& spec,
                            const PermutationPlan& plan, const BandwidthRule& rule) {
    return run_battery(d, {&spec, 1}, plan, rule).front();
}

}  // namespace censtest
