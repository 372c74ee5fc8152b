#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace censtest {

// One right-censored observation: time = min(lifetime, censoring time),
// event = true when the lifetime was observed. Optional covariates extend the
// point used by distances and kernels; the censoring always acts on time.
struct CensoredObservation {
    double time = 0.0;
    bool event = false;
    std::vector<double> covariates;
};

struct CensoredSample {
    std::string label;
    std::vector<CensoredObservation> observations;

    std::size_t size() const { return observations.size(); }
};

struct TwoSampleData {
    CensoredSample group0;
    CensoredSample group1;
};

// Throws Error unless times are finite and nonnegative, the sample is
// nonempty, and every observation has `dim` covariates.
void validate_sample(const CensoredSample& s, std::size_t dim);
void validate_data(const TwoSampleData& d);

std::size_t covariate_dim(const CensoredSample& s);

struct OrderedSample {
    CensoredSample sample;
    // original_index[k] = position in the input sample of the k-th ordered
    // observation.
    std::vector<std::size_t> original_index;
};

// Sorts ascending by time; at tied times events precede censorings, and
// otherwise input order is kept.
OrderedSample order_sample(const CensoredSample& s);

// Administrative truncation at tau: observations with time > tau are moved to
// tau and marked censored. Requires tau > 0.
TwoSampleData truncate(const TwoSampleData& d, double tau);

// Smallest of the two per-group maxima, a common truncation point.
double common_truncation_time(const TwoSampleData& d);

// Flips the last ordered observation (largest time; among ties the final one
// under the ordering rule) to an event. Identity when it already is one.
CensoredSample mark_last_uncensored(const CensoredSample& s);

}  // namespace censtest
