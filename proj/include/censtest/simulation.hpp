#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "censtest/curve.hpp"
#include "censtest/data.hpp"
#include "censtest/permutation.hpp"
#include "censtest/rng.hpp"
#include "censtest/statistics.hpp"

namespace censtest {

struct ExponentialGen {
    double rate = 1.0;
};

struct GammaGen {
    double shape = 1.0;
    double scale = 1.0;
};

struct LogNormalGen {
    double mu = 0.0;
    double sigma = 1.0;
};

struct CurveGen {
    SurvivalCurve curve;
};

using LifetimeGenerator = std::variant<ExponentialGen, GammaGen, LogNormalGen, CurveGen>;

void validate_generator(const LifetimeGenerator& g);
std::vector<double> sample_lifetimes(const LifetimeGenerator& g, std::size_t n,
                                     SplitMix64& rng);

// P(T <= t); used by censoring calibration.
double generator_cdf(const LifetimeGenerator& g, double t);

// Censoring time C ~ Uniform(0, bound):
//   UniformOnSupport  bound = multiplier * tau (curve generators; tau is the
//                     right end of the common support),
//   TargetRate        bound solved so that P(C < T) = rate.
struct UniformOnSupport {
    double multiplier = 3.0;
};

struct TargetRate {
    double rate = 0.1;
};

using CensoringModel = std::variant<UniformOnSupport, TargetRate>;

// The uniform bound realizing the model against the size-weighted mixture of
// the two lifetime generators. TargetRate solves P(C < T) = rate by bisection
// on the exact probability computed by numerical integration; tolerance 1e-4
// on the rate.
double censoring_bound(const CensoringModel& model, const LifetimeGenerator& g0,
                       std::size_t n0, const LifetimeGenerator& g1, std::size_t n1);

// Applies C_i ~ Uniform(0, bound): time = min(T, C), event = (T <= C).
CensoredSample apply_censoring(const std::vector<double>& lifetimes, double bound,
                               SplitMix64& rng, const std::string& label);

struct ScenarioTest {
    std::string name;  // row label in the output
    StatisticSpec spec;  // kernels with unset sigma use the median heuristic
};

struct Scenario {
    std::string name;
    LifetimeGenerator gen0;
    LifetimeGenerator gen1;
    CensoringModel censoring = TargetRate{0.1};
    std::size_t n0 = 50;
    std::size_t n1 = 50;
    std::size_t replications = 500;
    double alpha_level = 0.05;
    PermutationPlan plan;
    BandwidthRule bandwidth;
    std::vector<ScenarioTest> tests;
};

struct McRow {
    std::string scenario;
    std::string test;
    double rejection_rate = 0.0;
    double mean_p = 0.0;
    double sd_p = 0.0;
    std::size_t replications_used = 0;
    std::size_t replications_skipped = 0;  // a group drew no events
};

// One row per test. Replication r draws from streams derived from
// (plan.seed, r), so results do not depend on the thread count.
std::vector<McRow> run_monte_carlo(const Scenario& sc, int threads = 1);

}  // namespace censtest
