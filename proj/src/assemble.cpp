#include "assemble.hpp"

#include "censtest/error.hpp"

namespace censtest::detail {

StatisticValue assemble_statistic(const StatisticSpec& spec, const PairSums& s,
                                  const MassInfo& m) {
    if (m.ev0 == 0 || m.ev1 == 0)
        throw Error("statistic needs at least one event per group");

    double cross, within0, within1;
    switch (spec.form) {
        case StatisticForm::V:
            cross = s.cross / (m.sw0 * m.sw1);
            within0 = (s.off0 + s.diag0) / (m.sw0 * m.sw0);
            within1 = (s.off1 + s.diag1) / (m.sw1 * m.sw1);
            break;
        case StatisticForm::U:
            if (m.ev0 < 2 || m.ev1 < 2)
                throw Error("U-form statistic needs at least two events per group");
            cross = s.cross / (m.sw0 * m.sw1);
            within0 = s.off0 / (m.sw0 * m.sw0 - m.ssq0);
            within1 = s.off1 / (m.sw1 * m.sw1 - m.ssq1);
            break;
        default:  // UnnormalizedV
            cross = s.cross;
            within0 = s.off0 + s.diag0;
            within1 = s.off1 + s.diag1;
            break;
    }

    StatisticValue v;
    // The within sum is parenthesized so that swapping the two groups swaps
    // within0/within1 without changing the rounded result.
    const double within = within0 + within1;
    const bool energy = std::holds_alternative<EnergyMeasure>(spec.measure);
    v.raw = energy ? 2.0 * cross - within : within - 2.0 * cross;
    const double n0 = static_cast<double>(m.n0);
    const double n1 = static_cast<double>(m.n1);
    v.scaled = v.raw * (n0 * n1 / (n0 + n1));
    return v;
}

}  // namespace censtest::detail
