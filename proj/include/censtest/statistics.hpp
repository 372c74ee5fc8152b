#pragma once

#include <variant>

#include "censtest/data.hpp"
#include "censtest/error.hpp"
#include "censtest/kernels.hpp"
#include "censtest/km.hpp"

namespace censtest {

// Energy distance of order alpha, or squared MMD under a kernel. V-form
// statistics include the diagonal terms and each weighted double sum is
// divided by its own weight mass; the U form excludes diagonals; the
// unnormalized V form keeps the raw double sums (it can go negative under
// censoring, which is the reason the normalized forms exist).
enum class StatisticForm { V, U, UnnormalizedV };

struct EnergyMeasure {
    double alpha = 1.0;
};

struct MmdMeasure {
    KernelSpec kernel;
};

struct StatisticSpec {
    StatisticForm form = StatisticForm::V;
    std::variant<EnergyMeasure, MmdMeasure> measure = EnergyMeasure{};
};

void validate_spec(const StatisticSpec& spec);

struct StatisticValue {
    double raw = 0.0;     // the discrepancy itself
    double scaled = 0.0;  // raw * n0 * n1 / (n0 + n1)
};

double squared_weight_sum(const WeightedSample& a);

// Weighted mean of h over cross pairs: sum_ij w0_i w1_j h(x_i, y_j) divided
// by the product of the weight sums.
template <class F>
double cross_term(const WeightedSample& a, const WeightedSample& b, F&& h) {
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.weights[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b.weights[j] == 0.0) continue;
            row += b.weights[j] * h(a.times[i], b.times[j]);
        }
        num += a.weights[i] * row;
    }
    return num / (a.weight_sum * b.weight_sum);
}

// Weighted mean of h over within pairs; exclude_diagonal selects the U form,
// where both the numerator and the weight mass drop the i = j terms.
template <class F>
double within_term(const WeightedSample& a, F&& h, bool exclude_diagonal) {
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.weights[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j == i || a.weights[j] == 0.0) continue;
            row += a.weights[j] * h(a.times[i], a.times[j]);
        }
        if (!exclude_diagonal) row += a.weights[i] * h(a.times[i], a.times[i]);
        num += a.weights[i] * row;
    }
    const double s = a.weight_sum;
    const double den = exclude_diagonal ? s * s - squared_weight_sum(a) : s * s;
    if (!(den > 0.0))
        throw Error("within term: weight mass degenerate (U form needs two events)");
    return num / den;
}

// Two-sample statistic on weighted samples whose points are the times alone.
StatisticValue compute_statistic(const StatisticSpec& spec, const WeightedSample& w0,
                                 const WeightedSample& w1);

// Same statistic with distances taken on (time, covariates...) points. The
// weights still come from (time, event) alone. Handles ordering internally.
StatisticValue compute_statistic_multivariate(const StatisticSpec& spec,
                                              const TwoSampleData& d);

}  // namespace censtest
