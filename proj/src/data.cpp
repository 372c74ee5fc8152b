#include "censtest/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "censtest/error.hpp"

namespace censtest {

std::size_t covariate_dim(const CensoredSample& s) {
    return s.observations.empty() ? 0 : s.observations.front().covariates.size();
}

void validate_sample(const CensoredSample& s, std::size_t dim) {
    if (s.observations.empty()) throw Error("sample '" + s.label + "' is empty");
    for (std::size_t i = 0; i < s.observations.size(); ++i) {
        const auto& o = s.observations[i];
        if (!std::isfinite(o.time) || o.time < 0.0)
            throw Error("sample '" + s.label + "': observation " + std::to_string(i + 1) +
                        " has invalid time");
        if (o.covariates.size() != dim)
            throw Error("sample '" + s.label + "': observation " + std::to_string(i + 1) +
                        " has inconsistent covariate count");
        for (double c : o.covariates)
            if (!std::isfinite(c))
                throw Error("sample '" + s.label + "': observation " + std::to_string(i + 1) +
                            " has non-finite covariate");
    }
}

void validate_data(const TwoSampleData& d) {
    const std::size_t dim = covariate_dim(d.group0);
    validate_sample(d.group0, dim);
    validate_sample(d.group1, dim);
}

OrderedSample order_sample(const CensoredSample& s) {
    std::vector<std::size_t> idx(s.observations.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& oa = s.observations[a];
        const auto& ob = s.observations[b];
        if (oa.time != ob.time) return oa.time < ob.time;
        return oa.event && !ob.event;
    });
    OrderedSample out;
    out.sample.label = s.label;
    out.sample.observations.reserve(idx.size());
    for (std::size_t k : idx) out.sample.observations.push_back(s.observations[k]);
    out.original_index = std::move(idx);
    return out;
}

namespace {
CensoredSample truncate_sample(const CensoredSample& s, double tau) {
    CensoredSample out = s;
    for (auto& o : out.observations) {
        if (o.time > tau) {
            o.time = tau;
            o.event = false;
        }
    }
    return out;
}
}  // namespace

TwoSampleData truncate(const TwoSampleData& d, double tau) {
    if (!(tau > 0.0)) throw Error("truncation time must be positive");
    return {truncate_sample(d.group0, tau), truncate_sample(d.group1, tau)};
}

double common_truncation_time(const TwoSampleData& d) {
    auto max_time = [](const CensoredSample& s) {
        double m = 0.0;
        for (const auto& o : s.observations) m = std::max(m, o.time);
        return m;
    };
    return std::min(max_time(d.group0), max_time(d.group1));
}

CensoredSample mark_last_uncensored(const CensoredSample& s) {
    if (s.observations.empty()) throw Error("sample '" + s.label + "' is empty");
    // The ordering rule puts censorings after events at equal times, so the
    // final ordered observation is a censoring at the maximum time whenever
    // one exists.
    double tmax = s.observations.front().time;
    for (const auto& o : s.observations) tmax = std::max(tmax, o.time);
    std::ptrdiff_t pick = -1;
    for (std::size_t i = 0; i < s.observations.size(); ++i) {
        const auto& o = s.observations[i];
        if (o.time == tmax && !o.event) pick = static_cast<std::ptrdiff_t>(i);
    }
    CensoredSample out = s;
    if (pick >= 0) out.observations[static_cast<std::size_t>(pick)].event = true;
    return out;
}

}  // namespace censtest
