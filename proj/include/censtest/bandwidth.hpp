#pragma once

#include "censtest/data.hpp"

namespace censtest {

// Median heuristic on the aggregate sample: H = median of squared pairwise
// distances over eligible observations (even counts take the midpoint of the
// two central values). Under censoring the default restricts the median to
// uncensored pairs.
enum class BandwidthVariant { MedianAllPairs, MedianUncensoredOnly };
enum class BandwidthScaling { SqrtHalf, Sqrt };  // sigma = sqrt(H/2) or sqrt(H)

struct BandwidthRule {
    BandwidthVariant variant = BandwidthVariant::MedianUncensoredOnly;
    BandwidthScaling scaling = BandwidthScaling::SqrtHalf;
};

// Distances use the full point (time plus covariates). Throws Error when
// fewer than two observations are eligible or all pairwise distances vanish.
double median_heuristic(const TwoSampleData& d, const BandwidthRule& rule = {});

}  // namespace censtest
