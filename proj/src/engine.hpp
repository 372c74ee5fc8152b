#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "assemble.hpp"
#include "censtest/data.hpp"
#include "censtest/statistics.hpp"

namespace censtest::detail {

// Relabeling engine: the aggregate sample is ordered once and pairwise kernel
// values over uncensored positions are tabulated once per statistic. A
// permutation then only recomputes group weights (O(n)) and re-weights the
// tabulated values (O(m^2) multiply-adds, m = number of events).
class Engine {
public:
    // Specs must already have sigma resolved.
    Engine(const TwoSampleData& d, std::span<const StatisticSpec> specs);

    std::size_t n() const { return n_; }
    std::size_t n0() const { return n0_; }
    std::size_t n1() const { return n1_; }
    std::size_t spec_count() const { return specs_.size(); }
    const StatisticSpec& spec(std::size_t t) const { return specs_[t]; }
    std::span<const std::uint8_t> observed_assignment() const { return observed_; }

    struct Scratch {
        std::vector<double> w0, w1;  // weights per event slot
        MassInfo mass;
    };
    Scratch make_scratch() const;

    // Kaplan-Meier weight pass for one assignment (group flag per aggregate
    // position). Fills scratch; returns false when some group has no event.
    bool assign_weights(std::span<const std::uint8_t> group, Scratch& s) const;

    // True when the assignment in `s` cannot support this spec's form.
    bool degenerate(std::size_t t, const Scratch& s) const;

    StatisticValue evaluate(std::size_t t, const Scratch& s) const;

private:
    std::size_t n_ = 0, n0_ = 0, n1_ = 0, m_ = 0;
    std::vector<double> times_;
    std::vector<std::uint8_t> events_;
    std::vector<std::int32_t> slot_;      // aggregate position -> event slot or -1
    std::vector<std::uint8_t> observed_;  // observed group flags
    std::vector<StatisticSpec> specs_;
    std::vector<std::vector<double>> gram_;  // per spec, m x m row-major
};

}  // namespace censtest::detail
