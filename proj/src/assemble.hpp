#pragma once

#include <cstddef>

#include "censtest/statistics.hpp"

namespace censtest::detail {

// Raw weighted double sums shared by the direct evaluator and the
// permutation engine. `off*` are full off-diagonal sums (both orders of each
// pair), `diag*` the i = j contributions.
struct PairSums {
    double cross = 0.0;
    double off0 = 0.0;
    double off1 = 0.0;
    double diag0 = 0.0;
    double diag1 = 0.0;
};

struct MassInfo {
    double sw0 = 0.0, sw1 = 0.0;    // weight sums
    double ssq0 = 0.0, ssq1 = 0.0;  // sums of squared weights
    std::size_t ev0 = 0, ev1 = 0;   // events per group
    std::size_t n0 = 0, n1 = 0;     // group sizes
};

StatisticValue assemble_statistic(const StatisticSpec& spec, const PairSums& s,
                                  const MassInfo& m);

}  // namespace censtest::detail
