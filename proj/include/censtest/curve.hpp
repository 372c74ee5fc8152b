#pragma once

#include <string>
#include <vector>

#include "censtest/rng.hpp"

namespace censtest {

// Piecewise-linear survival curve on strictly increasing knots, S(0) = 1,
// nonincreasing, values in [0, 1]. Any survivor mass S(t_max) stays at t_max.
struct SurvivalCurve {
    std::vector<double> t;
    std::vector<double> s;

    double t_max() const { return t.back(); }
    double survivor_mass() const { return s.back(); }
};

// Least-squares projection onto nonincreasing sequences (pool adjacent
// violators). Used to clean up digitized curves.
std::vector<double> pava_nonincreasing(const std::vector<double>& values);

// Builds a curve from (t, S) pairs: sorts by t, validates, prepends (0, 1)
// when missing, and projects S onto nonincreasing shape.
SurvivalCurve make_curve(std::vector<double> t, std::vector<double> s);

// Reads a CSV with columns t,s.
SurvivalCurve load_curve(const std::string& path);

// Restricts the curve to [0, tau], interpolating a knot at tau.
SurvivalCurve restrict_curve(const SurvivalCurve& c, double tau);

// Inverse-transform draw from the lifetime distribution F = 1 - S, with an
// atom of size S(t_max) at t_max.
double sample_from_curve(const SurvivalCurve& c, SplitMix64& rng);

}  // namespace censtest
