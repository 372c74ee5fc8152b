#include "censtest/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "assemble.hpp"

namespace censtest {

void validate_spec(const StatisticSpec& spec) {
    if (const auto* e = std::get_if<EnergyMeasure>(&spec.measure)) {
        if (!(e->alpha > 0.0 && e->alpha <= 2.0)) throw Error("alpha must lie in (0, 2]");
    } else {
        validate_kernel(std::get<MmdMeasure>(spec.measure).kernel);
    }
}

double squared_weight_sum(const WeightedSample& a) {
    double s = 0.0;
    for (double w : a.weights) s += w * w;
    return s;
}

namespace {

template <class H>
detail::PairSums accumulate_sums(const WeightedSample& w0, const WeightedSample& w1, H&& h) {
    detail::PairSums s;
    for (std::size_t i = 0; i < w0.size(); ++i) {
        if (w0.weights[i] == 0.0) continue;
        double cross_row = 0.0, within_row = 0.0;
        for (std::size_t j = 0; j < w1.size(); ++j)
            if (w1.weights[j] != 0.0) cross_row += w1.weights[j] * h(0, i, 1, j);
        for (std::size_t j = 0; j < w0.size(); ++j)
            if (j != i && w0.weights[j] != 0.0) within_row += w0.weights[j] * h(0, i, 0, j);
        s.cross += w0.weights[i] * cross_row;
        s.off0 += w0.weights[i] * within_row;
        s.diag0 += w0.weights[i] * w0.weights[i] * h(0, i, 0, i);
    }
    for (std::size_t i = 0; i < w1.size(); ++i) {
        if (w1.weights[i] == 0.0) continue;
        double within_row = 0.0;
        for (std::size_t j = 0; j < w1.size(); ++j)
            if (j != i && w1.weights[j] != 0.0) within_row += w1.weights[j] * h(1, i, 1, j);
        s.off1 += w1.weights[i] * within_row;
        s.diag1 += w1.weights[i] * w1.weights[i] * h(1, i, 1, i);
    }
    return s;
}

std::size_t positive_weight_count(const WeightedSample& a) {
    std::size_t c = 0;
    for (double w : a.weights) c += w > 0.0;
    return c;
}

// Lexicographic order on (times, events) so that evaluation order, and hence
// every rounding, is identical for (w0, w1) and (w1, w0).
bool sample_precedes(const WeightedSample& a, const WeightedSample& b) {
    if (a.times != b.times) return a.times < b.times;
    return a.events < b.events;
}

template <class H>
StatisticValue evaluate(const StatisticSpec& spec, const WeightedSample& w0,
                        const WeightedSample& w1, H&& h) {
    validate_spec(spec);
    if (!(w0.weight_sum > 0.0) || !(w1.weight_sum > 0.0))
        throw Error("statistic needs at least one event per group");
    const bool swap = sample_precedes(w1, w0);
    const WeightedSample& a = swap ? w1 : w0;
    const WeightedSample& b = swap ? w0 : w1;
    auto hs = [&](int sa, std::size_t i, int sb, std::size_t j) {
        return swap ? h(1 - sa, i, 1 - sb, j) : h(sa, i, sb, j);
    };

    detail::MassInfo m;
    m.sw0 = a.weight_sum;
    m.sw1 = b.weight_sum;
    m.ssq0 = squared_weight_sum(a);
    m.ssq1 = squared_weight_sum(b);
    m.ev0 = positive_weight_count(a);
    m.ev1 = positive_weight_count(b);
    m.n0 = a.size();
    m.n1 = b.size();
    return detail::assemble_statistic(spec, accumulate_sums(a, b, hs), m);
}

}  // namespace

StatisticValue compute_statistic(const StatisticSpec& spec, const WeightedSample& w0,
                                 const WeightedSample& w1) {
    auto point = [&](int side, std::size_t i) -> double {
        return side == 0 ? w0.times[i] : w1.times[i];
    };
    if (const auto* e = std::get_if<EnergyMeasure>(&spec.measure)) {
        const double alpha = e->alpha;
        return evaluate(spec, w0, w1, [&](int sa, std::size_t i, int sb, std::size_t j) {
            const double x = point(sa, i), y = point(sb, j);
            return eval_distance({&x, 1}, {&y, 1}, alpha);
        });
    }
    const KernelSpec& k = std::get<MmdMeasure>(spec.measure).kernel;
    return evaluate(spec, w0, w1, [&](int sa, std::size_t i, int sb, std::size_t j) {
        const double x = point(sa, i), y = point(sb, j);
        return eval_kernel(k, {&x, 1}, {&y, 1});
    });
}

StatisticValue compute_statistic_multivariate(const StatisticSpec& spec,
                                              const TwoSampleData& d) {
    validate_data(d);
    const std::size_t dim = covariate_dim(d.group0) + 1;

    auto prepare = [&](const CensoredSample& s, WeightedSample& w, std::vector<double>& pts) {
        const OrderedSample ordered = order_sample(s);
        w = km_weights(ordered.sample);
        pts.resize(ordered.sample.size() * dim);
        for (std::size_t i = 0; i < ordered.sample.size(); ++i) {
            const auto& o = ordered.sample.observations[i];
            pts[i * dim] = o.time;
            std::copy(o.covariates.begin(), o.covariates.end(),
                      pts.begin() + static_cast<std::ptrdiff_t>(i * dim + 1));
        }
    };
    WeightedSample w0, w1;
    std::vector<double> p0, p1;
    prepare(d.group0, w0, p0);
    prepare(d.group1, w1, p1);

    auto point = [&](int side, std::size_t i) -> std::span<const double> {
        const auto& pts = side == 0 ? p0 : p1;
        return {pts.data() + i * dim, dim};
    };
    if (const auto* e = std::get_if<EnergyMeasure>(&spec.measure)) {
        const double alpha = e->alpha;
        return evaluate(spec, w0, w1, [&](int sa, std::size_t i, int sb, std::size_t j) {
            return eval_distance(point(sa, i), point(sb, j), alpha);
        });
    }
    const KernelSpec& k = std::get<MmdMeasure>(spec.measure).kernel;
    return evaluate(spec, w0, w1, [&](int sa, std::size_t i, int sb, std::size_t j) {
        return eval_kernel(k, point(sa, i), point(sb, j));
    });
}

}  // namespace censtest
