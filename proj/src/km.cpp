#include "censtest/km.hpp"

#include "censtest/error.hpp"

namespace censtest {

WeightedSample km_weights(const CensoredSample& ordered) {
    const std::size_t n = ordered.observations.size();
    if (n == 0) throw Error("sample '" + ordered.label + "' is empty");
    for (std::size_t i = 1; i < n; ++i) {
        const auto& prev = ordered.observations[i - 1];
        const auto& cur = ordered.observations[i];
        const bool ok = prev.time < cur.time ||
                        (prev.time == cur.time && (prev.event || !cur.event));
        if (!ok) throw Error("sample '" + ordered.label + "' is not in ordering-rule order");
    }

    WeightedSample w;
    w.times.resize(n);
    w.events.resize(n);
    w.weights.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        w.times[i] = ordered.observations[i].time;
        w.events[i] = ordered.observations[i].event;
    }

    // Running product of ((n-j)/(n-j+1))^{d_j}, i.e. the KM survival left of
    // position i. Until the first censoring it equals (n-i)/n, so each event
    // weight is 1/n exactly; afterwards it is carried multiplicatively.
    double survival = 1.0;
    bool censored_seen = false;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double at_risk = static_cast<double>(n - i);
        if (w.events[i]) {
            const double wi = censored_seen ? survival / at_risk
                                            : 1.0 / static_cast<double>(n);
            w.weights[i] = wi;
            sum += wi;
            if (censored_seen) survival = survival * (at_risk - 1.0) / at_risk;
        } else if (!censored_seen) {
            censored_seen = true;
            survival = at_risk / static_cast<double>(n);
        }
    }
    if (sum == 0.0) throw Error("sample '" + ordered.label +
                                "' has no events: Kaplan-Meier weights all zero");
    w.weight_sum = sum;
    return w;
}

WeightedSample normalize_weights(const WeightedSample& w) {
    if (w.weight_sum <= 0.0) throw Error("cannot normalize: weight sum is zero");
    WeightedSample out = w;
    for (auto& x : out.weights) x /= w.weight_sum;
    double sum = 0.0;
    for (double x : out.weights) sum += x;
    out.weight_sum = sum;
    return out;
}

}  // namespace censtest
