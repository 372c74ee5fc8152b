#include "censtest/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "censtest/error.hpp"

namespace censtest {

double median_heuristic(const TwoSampleData& d, const BandwidthRule& rule) {
    validate_data(d);
    const bool uncensored_only = rule.variant == BandwidthVariant::MedianUncensoredOnly;

    std::vector<const CensoredObservation*> pts;
    for (const auto* s : {&d.group0, &d.group1})
        for (const auto& o : s->observations)
            if (!uncensored_only || o.event) pts.push_back(&o);
    if (pts.size() < 2)
        throw Error("median heuristic needs at least two eligible observations");

    std::vector<double> sq;
    sq.reserve(pts.size() * (pts.size() - 1) / 2);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dt = pts[i]->time - pts[j]->time;
            double ss = dt * dt;
            for (std::size_t k = 0; k < pts[i]->covariates.size(); ++k) {
                const double dc = pts[i]->covariates[k] - pts[j]->covariates[k];
                ss += dc * dc;
            }
            sq.push_back(ss);
        }
    }

    const std::size_t m = sq.size();
    const std::size_t hi = m / 2;
    std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(hi), sq.end());
    double median = sq[hi];
    if (m % 2 == 0) {
        const double lo = *std::max_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(hi));
        median = (lo + median) / 2.0;
    }
    if (median <= 0.0)
        throw Error("degenerate bandwidth: median pairwise distance is zero");
    return rule.scaling == BandwidthScaling::SqrtHalf ? std::sqrt(median / 2.0)
                                                      : std::sqrt(median);
}

}  // namespace censtest
