#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "censtest/bandwidth.hpp"
#include "censtest/data.hpp"
#include "censtest/statistics.hpp"

namespace censtest {

enum class PermutationMode { Auto, Exact, MonteCarlo };

struct PermutationPlan {
    PermutationMode mode = PermutationMode::Auto;
    std::uint64_t monte_carlo_rounds = 1000;
    // Auto switches to exact enumeration when C(n, n0) is at most this.
    std::uint64_t exact_threshold = 200000;
    std::uint64_t seed = 0;
    int threads = 1;  // 0 = hardware concurrency
};

struct TestResult {
    StatisticSpec spec;  // sigma resolved
    StatisticValue statistic;
    double p_value = 1.0;
    bool exact = false;
    // Exact: all C(n, n0) assignments (the observed one among them).
    // Monte Carlo: the number of sampled relabelings.
    std::uint64_t permutations = 0;
    std::uint64_t exceedances = 0;
    // Assignments whose event counts cannot support the form; scored as
    // exceedances (conservative) and reported here.
    std::uint64_t degenerate = 0;
    std::optional<double> sigma;
    std::size_t n0 = 0, n1 = 0;
};

// Runs several statistics against one permutation universe: assignments and
// Kaplan-Meier weights are shared, each spec keeps its own tally. Kernels
// with unset sigma get the median heuristic of the observed data, computed
// once and held fixed across permutations.
std::vector<TestResult> run_battery(const TwoSampleData& d,
                                    std::span<const StatisticSpec> specs,
                                    const PermutationPlan& plan,
                                    const BandwidthRule& rule = {});

TestResult permutation_test(const TwoSampleData& d, const StatisticSpec& spec,
                            const PermutationPlan& plan, const BandwidthRule& rule = {});

// C(n, k), capped: returns cap + 1 whenever the true value exceeds cap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

// Lexicographic k-subsets of {0, ..., n-1}. current() starts at the first
// subset; advance() steps to the next, returning false after the last.
class Combinations {
public:
    Combinations(std::size_t n, std::size_t k);
    const std::vector<std::size_t>& current() const { return cur_; }
    bool advance();

private:
    std::size_t n_;
    std::vector<std::size_t> cur_;
};

}  // namespace censtest
