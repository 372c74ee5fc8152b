#include "engine.hpp"

#include <algorithm>
#include <numeric>

#include "censtest/error.hpp"

namespace censtest::detail {

Engine::Engine(const TwoSampleData& d, std::span<const StatisticSpec> specs)
    : specs_(specs.begin(), specs.end()) {
    validate_data(d);
    for (const auto& s : specs_) validate_spec(s);

    n0_ = d.group0.size();
    n1_ = d.group1.size();
    n_ = n0_ + n1_;
    const std::size_t dim = covariate_dim(d.group0) + 1;

    struct Row {
        double time;
        bool event;
        std::uint8_t group;
        const CensoredObservation* obs;
    };
    std::vector<Row> rows;
    rows.reserve(n_);
    for (const auto& o : d.group0.observations) rows.push_back({o.time, o.event, 0, &o});
    for (const auto& o : d.group1.observations) rows.push_back({o.time, o.event, 1, &o});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.event && !b.event;
    });

    times_.resize(n_);
    events_.resize(n_);
    observed_.resize(n_);
    slot_.assign(n_, -1);
    std::vector<double> points(n_ * dim);
    for (std::size_t p = 0; p < n_; ++p) {
        times_[p] = rows[p].time;
        events_[p] = rows[p].event;
        observed_[p] = rows[p].group;
        points[p * dim] = rows[p].time;
        std::copy(rows[p].obs->covariates.begin(), rows[p].obs->covariates.end(),
                  points.begin() + static_cast<std::ptrdiff_t>(p * dim + 1));
        if (rows[p].event) slot_[p] = static_cast<std::int32_t>(m_++);
    }

    // One pairwise table per statistic, over uncensored positions only:
    // censored observations carry zero weight under every relabeling.
    std::vector<std::span<const double>> pts(m_);
    for (std::size_t p = 0; p < n_; ++p)
        if (slot_[p] >= 0)
            pts[static_cast<std::size_t>(slot_[p])] = {points.data() + p * dim, dim};

    gram_.resize(specs_.size());
    for (std::size_t t = 0; t < specs_.size(); ++t) {
        auto& g = gram_[t];
        g.resize(m_ * m_);
        auto fill = [&](auto&& h) {
            for (std::size_t a = 0; a < m_; ++a) {
                g[a * m_ + a] = h(pts[a], pts[a]);
                for (std::size_t b = a + 1; b < m_; ++b) {
                    const double v = h(pts[a], pts[b]);
                    g[a * m_ + b] = v;
                    g[b * m_ + a] = v;
                }
            }
        };
        if (const auto* e = std::get_if<EnergyMeasure>(&specs_[t].measure)) {
            const double alpha = e->alpha;
            fill([&](auto x, auto y) { return eval_distance(x, y, alpha); });
        } else {
            const KernelSpec& k = std::get<MmdMeasure>(specs_[t].measure).kernel;
            fill([&](auto x, auto y) { return eval_kernel(k, x, y); });
        }
    }
}

Engine::Scratch Engine::make_scratch() const {
    Scratch s;
    s.w0.resize(m_);
    s.w1.resize(m_);
    return s;
}

bool Engine::assign_weights(std::span<const std::uint8_t> group, Scratch& s) const {
    std::fill(s.w0.begin(), s.w0.end(), 0.0);
    std::fill(s.w1.begin(), s.w1.end(), 0.0);

    // Interleaved two-group version of the weight recursion in km_weights:
    // each group sees its own subsequence of the aggregate order, which
    // preserves the ordering rule.
    const double nsize[2] = {static_cast<double>(n0_), static_cast<double>(n1_)};
    std::size_t seen[2] = {0, 0};
    bool censored_seen[2] = {false, false};
    double survival[2] = {1.0, 1.0};
    double sw[2] = {0.0, 0.0};
    double ssq[2] = {0.0, 0.0};
    std::size_t ev[2] = {0, 0};

    for (std::size_t p = 0; p < n_; ++p) {
        const int g = group[p];
        const double at_risk = nsize[g] - static_cast<double>(seen[g]);
        ++seen[g];
        if (events_[p]) {
            const double w = censored_seen[g] ? survival[g] / at_risk : 1.0 / nsize[g];
            if (censored_seen[g]) survival[g] = survival[g] * (at_risk - 1.0) / at_risk;
            (g == 0 ? s.w0 : s.w1)[static_cast<std::size_t>(slot_[p])] = w;
            sw[g] += w;
            ssq[g] += w * w;
            ++ev[g];
        } else if (!censored_seen[g]) {
            censored_seen[g] = true;
            survival[g] = at_risk / nsize[g];
        }
    }

    s.mass = MassInfo{sw[0], sw[1], ssq[0], ssq[1], ev[0], ev[1], n0_, n1_};
    return ev[0] > 0 && ev[1] > 0;
}

bool Engine::degenerate(std::size_t t, const Scratch& s) const {
    const std::size_t need = specs_[t].form == StatisticForm::U ? 2 : 1;
    return s.mass.ev0 < need || s.mass.ev1 < need;
}

StatisticValue Engine::evaluate(std::size_t t, const Scratch& s) const {
    const double* gram = gram_[t].data();
    const double* w0 = s.w0.data();
    const double* w1 = s.w1.data();
    const std::size_t m = m_;

    // Upper-triangle accumulation; the term order is label-symmetric, so a
    // relabeling that swaps the groups reproduces the value bit for bit.
    double s00 = 0.0, s01 = 0.0, s11 = 0.0, d00 = 0.0, d11 = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        const double wa0 = w0[a], wa1 = w1[a];
        const double* row = gram + a * m;
        double acc0 = 0.0, acc1 = 0.0;
        for (std::size_t b = a + 1; b < m; ++b) {
            const double h = row[b];
            acc0 += w0[b] * h;
            acc1 += w1[b] * h;
        }
        s00 += wa0 * acc0;
        s11 += wa1 * acc1;
        s01 += wa0 * acc1 + wa1 * acc0;
        d00 += wa0 * wa0 * row[a];
        d11 += wa1 * wa1 * row[a];
    }

    PairSums sums;
    sums.cross = s01;
    sums.off0 = 2.0 * s00;
    sums.off1 = 2.0 * s11;
    sums.diag0 = d00;
    sums.diag1 = d11;
    return assemble_statistic(specs_[t], sums, s.mass);
}

}  // namespace censtest::detail
