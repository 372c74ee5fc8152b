#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "censtest/permutation.hpp"
#include "censtest/simulation.hpp"

namespace censtest {

// Stable names used in documents and CLI flags: "energy", "gaussian",
// "laplacian", "rational-quadratic", "matern", "distance-induced".
std::string measure_name(const StatisticSpec& spec);
std::string form_name(StatisticForm form);
nlohmann::ordered_json measure_params(const StatisticSpec& spec);

struct TestReportInfo {
    std::string input;
    std::string group0, group1;
    std::size_t n0 = 0, n1 = 0;
    std::uint64_t seed = 0;
    bool truncated = false;
    bool marked_last_event = false;
    bool standardized_covariates = false;
    BandwidthRule bandwidth;
};

// schema_version 1 documents. Thread counts are deliberately not echoed:
// outputs are byte-identical for any --threads.
nlohmann::ordered_json test_report(const TestReportInfo& info,
                                   const std::vector<TestResult>& results);
std::string test_csv(const std::vector<TestResult>& results);

nlohmann::ordered_json mc_report(const std::vector<McRow>& rows, std::uint64_t seed);
std::string mc_csv(const std::vector<McRow>& rows);

// Scenario files. `grid` entries override base fields and yield one scenario
// each; entry i runs with seed substream(seed, i). Curve paths are resolved
// against the scenario file's directory.
std::vector<Scenario> load_scenarios(const std::string& path,
                                     std::uint64_t* base_seed = nullptr);
std::vector<Scenario> scenarios_from_json(const nlohmann::json& j, const std::string& base_dir);

}  // namespace censtest
