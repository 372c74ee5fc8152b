#pragma once

#include <vector>

#include "censtest/data.hpp"

namespace censtest {

// A sample in the ordering-rule order together with its Kaplan-Meier jump
// weights. Censored observations carry weight zero; weights sum to one minus
// the KM survival estimate at the largest time.
struct WeightedSample {
    std::vector<double> times;
    std::vector<bool> events;
    std::vector<double> weights;
    double weight_sum = 0.0;

    std::size_t size() const { return times.size(); }
};

// Kaplan-Meier jump weights on an ordered sample:
//   W_i = d_i / (n - i + 1) * prod_{j<i} ((n - j) / (n - j + 1))^{d_j}.
// Requires the input to already follow the ordering rule (ascending time,
// events before censorings at ties) and to contain at least one event.
WeightedSample km_weights(const CensoredSample& ordered);

// Rescales weights to sum to one. Zero weights stay zero.
WeightedSample normalize_weights(const WeightedSample& w);

}  // namespace censtest
