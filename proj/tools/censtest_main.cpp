#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "censtest/csv.hpp"
#include "censtest/curve.hpp"
#include "censtest/error.hpp"
#include "censtest/report.hpp"
#include "censtest/rng.hpp"
#include "censtest/simulation.hpp"

namespace {

using namespace censtest;

std::uint64_t pick_seed(const std::optional<std::uint64_t>& given) {
    if (given) return *given;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
}

struct MeasureFlags {
    std::vector<std::string> measures;
    std::string form = "v";
    double alpha = 1.0;
    std::string sigma = "auto";
    double rq_c = 1.0;
    double rq_beta = 1.0;
    double matern_nu = 1.5;
    double origin = 0.0;
    std::string bw_variant = "median-uncensored";
    std::string bw_scaling = "sqrt-half";
};

void add_measure_flags(CLI::App* cmd, MeasureFlags& f, const std::string& default_battery) {
    cmd->add_option("--measure", f.measures,
                    "Statistic(s) to run: energy, gaussian, laplacian, rational-quadratic, "
                    "matern, distance-induced (repeatable; default: " + default_battery + ")");
    cmd->add_option("--form", f.form, "Statistic form: v, u, unnormalized-v")
        ->check(CLI::IsMember({"v", "u", "unnormalized-v"}))
        ->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "Energy / distance-induced exponent in (0, 2]")
        ->capture_default_str();
    cmd->add_option("--sigma", f.sigma,
                    "Kernel length scale: a number, or 'auto' for the median heuristic")
        ->capture_default_str();
    cmd->add_option("--rq-c", f.rq_c, "Rational quadratic offset c")->capture_default_str();
    cmd->add_option("--rq-beta", f.rq_beta, "Rational quadratic exponent beta")
        ->capture_default_str();
    cmd->add_option("--matern-nu", f.matern_nu, "Matern smoothness: 0.5, 1.5 or 2.5")
        ->capture_default_str();
    cmd->add_option("--origin", f.origin, "Distance-induced kernel origin")
        ->capture_default_str();
    cmd->add_option("--bandwidth", f.bw_variant,
                    "Median heuristic pairs: median-uncensored or median-all")
        ->check(CLI::IsMember({"median-uncensored", "median-all"}))
        ->capture_default_str();
    cmd->add_option("--bandwidth-scaling", f.bw_scaling, "sqrt-half for sqrt(H/2), sqrt for sqrt(H)")
        ->check(CLI::IsMember({"sqrt-half", "sqrt"}))
        ->capture_default_str();
}

StatisticForm form_from(const std::string& s) {
    if (s == "v") return StatisticForm::V;
    if (s == "u") return StatisticForm::U;
    return StatisticForm::UnnormalizedV;
}

BandwidthRule bandwidth_from(const MeasureFlags& f) {
    BandwidthRule rule;
    rule.variant = f.bw_variant == "median-all" ? BandwidthVariant::MedianAllPairs
                                                : BandwidthVariant::MedianUncensoredOnly;
    rule.scaling = f.bw_scaling == "sqrt" ? BandwidthScaling::Sqrt : BandwidthScaling::SqrtHalf;
    return rule;
}

std::vector<StatisticSpec> specs_from(const MeasureFlags& f) {
    std::optional<double> sigma;
    if (f.sigma != "auto") {
        try {
            sigma = std::stod(f.sigma);
        } catch (const std::exception&) {
            throw Error("--sigma: expected a number or 'auto', got '" + f.sigma + "'");
        }
    }
    std::vector<StatisticSpec> specs;
    for (const auto& m : f.measures) {
        StatisticSpec spec;
        spec.form = form_from(f.form);
        if (m == "energy") spec.measure = EnergyMeasure{f.alpha};
        else if (m == "gaussian") spec.measure = MmdMeasure{GaussianKernel{sigma}};
        else if (m == "laplacian") spec.measure = MmdMeasure{LaplacianKernel{sigma}};
        else if (m == "rational-quadratic")
            spec.measure = MmdMeasure{RationalQuadraticKernel{f.rq_c, f.rq_beta}};
        else if (m == "matern") spec.measure = MmdMeasure{MaternKernel{f.matern_nu, sigma}};
        else if (m == "distance-induced")
            spec.measure = MmdMeasure{DistanceInducedKernel{f.alpha, f.origin}};
        else throw Error("--measure: unknown measure '" + m + "'");
        validate_spec(spec);
        specs.push_back(std::move(spec));
    }
    return specs;
}

void standardize_covariates(TwoSampleData& d) {
    const std::size_t dim = covariate_dim(d.group0);
    for (std::size_t k = 0; k < dim; ++k) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto* s : {&d.group0, &d.group1})
            for (const auto& o : s->observations) {
                sum += o.covariates[k];
                ++n;
            }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto* s : {&d.group0, &d.group1})
            for (const auto& o : s->observations) ss += (o.covariates[k] - mean) * (o.covariates[k] - mean);
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        for (auto* s : {&d.group0, &d.group1})
            for (auto& o : s->observations)
                o.covariates[k] = sd > 0.0 ? (o.covariates[k] - mean) / sd
                                           : o.covariates[k] - mean;
    }
}

int cmd_test(const std::string& input, MeasureFlags& mf, const std::string& mode,
             std::uint64_t permutations, std::uint64_t exact_threshold,
             const std::optional<std::uint64_t>& seed_opt, int threads, bool truncate_flag,
             std::optional<double> tau, bool mark_last, bool standardize,
             const std::string& output, const std::string& format) {
    if (mf.measures.empty()) mf.measures = {"energy"};
    TwoSampleData d = read_csv(input);

    TestReportInfo info;
    info.input = input;
    info.group0 = d.group0.label;
    info.group1 = d.group1.label;
    info.seed = pick_seed(seed_opt);
    info.bandwidth = bandwidth_from(mf);

    if (truncate_flag || tau) {
        const double t = tau ? *tau : common_truncation_time(d);
        d = truncate(d, t);
        info.truncated = true;
    }
    if (mark_last) {
        d.group0 = mark_last_uncensored(d.group0);
        d.group1 = mark_last_uncensored(d.group1);
        info.marked_last_event = true;
    }
    if (standardize) {
        standardize_covariates(d);
        info.standardized_covariates = true;
    }
    info.n0 = d.group0.size();
    info.n1 = d.group1.size();

    PermutationPlan plan;
    plan.mode = mode == "exact" ? PermutationMode::Exact
              : mode == "monte-carlo" ? PermutationMode::MonteCarlo
                                      : PermutationMode::Auto;
    plan.monte_carlo_rounds = permutations;
    plan.exact_threshold = exact_threshold;
    plan.seed = info.seed;
    plan.threads = threads;

    const auto specs = specs_from(mf);
    const auto results = run_battery(d, specs, plan, info.bandwidth);

    if (format == "csv") write_output(output, test_csv(results));
    else write_output(output, test_report(info, results).dump(2) + "\n");
    return 0;
}

int cmd_mc(const std::string& scenario_path, const std::optional<std::uint64_t>& seed_opt,
           int threads, const std::string& output, const std::string& format) {
    std::uint64_t base_seed = 0;
    auto scenarios = load_scenarios(scenario_path, &base_seed);
    if (seed_opt) {
        base_seed = *seed_opt;
        if (scenarios.size() == 1) {
            scenarios[0].plan.seed = base_seed;
        } else {
            for (std::size_t i = 0; i < scenarios.size(); ++i)
                scenarios[i].plan.seed = substream(base_seed, i)();
        }
    }
    std::vector<McRow> rows;
    for (const auto& sc : scenarios) {
        auto r = run_monte_carlo(sc, threads);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (format == "json") write_output(output, mc_report(rows, base_seed).dump(2) + "\n");
    else write_output(output, mc_csv(rows));
    return 0;
}

int cmd_curve_sim(const std::string& curve0, const std::string& curve1, std::size_t n0,
                  std::size_t n1, std::size_t replications, double multiplier,
                  std::optional<double> rate, double alpha_level, std::uint64_t permutations,
                  const std::optional<std::uint64_t>& seed_opt, int threads, MeasureFlags& mf,
                  const std::string& output, const std::string& format) {
    if (mf.measures.empty()) mf.measures = {"energy", "gaussian", "laplacian"};

    SurvivalCurve c0 = load_curve(curve0);
    SurvivalCurve c1 = load_curve(curve1);
    const double tau = std::min(c0.t_max(), c1.t_max());
    c0 = restrict_curve(c0, tau);
    c1 = restrict_curve(c1, tau);

    Scenario sc;
    sc.name = "curve-sim";
    sc.gen0 = CurveGen{std::move(c0)};
    sc.gen1 = CurveGen{std::move(c1)};
    if (rate) sc.censoring = TargetRate{*rate};
    else sc.censoring = UniformOnSupport{multiplier};
    sc.n0 = n0;
    sc.n1 = n1;
    sc.replications = replications;
    sc.alpha_level = alpha_level;
    sc.plan.monte_carlo_rounds = permutations;
    sc.plan.seed = pick_seed(seed_opt);
    sc.bandwidth = bandwidth_from(mf);
    for (const auto& spec : specs_from(mf)) {
        ScenarioTest t;
        t.spec = spec;
        t.name = measure_name(spec);
        sc.tests.push_back(std::move(t));
    }

    const auto rows = run_monte_carlo(sc, threads);
    if (format == "json") write_output(output, mc_report(rows, sc.plan.seed).dump(2) + "\n");
    else write_output(output, mc_csv(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-distance and kernel MMD two-sample tests for right-censored data"};
    app.require_subcommand(1);

    // test
    auto* test = app.add_subcommand("test", "Permutation test on a two-group CSV dataset");
    std::string input;
    test->add_option("--input", input, "CSV with columns time,event,group[,covariates...]")
        ->required();
    MeasureFlags tmf;
    add_measure_flags(test, tmf, "energy");
    std::string mode = "auto";
    test->add_option("--mode", mode, "auto, exact or monte-carlo")
        ->check(CLI::IsMember({"auto", "exact", "monte-carlo"}))
        ->capture_default_str();
    std::uint64_t permutations = 1000;
    test->add_option("--permutations", permutations, "Monte Carlo relabelings")
        ->capture_default_str();
    std::uint64_t exact_threshold = 200000;
    test->add_option("--exact-threshold", exact_threshold,
                     "Enumerate exactly when C(n, n0) is at most this")
        ->capture_default_str();
    std::optional<std::uint64_t> seed;
    test->add_option("--seed", seed, "RNG seed (default: drawn randomly and echoed)");
    int threads = 0;
    test->add_option("--threads", threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    bool do_truncate = false;
    test->add_flag("--truncate", do_truncate,
                   "Truncate both groups at the smaller group maximum before testing");
    std::optional<double> tau;
    test->add_option("--tau", tau, "Truncate at this time instead");
    bool mark_last = false;
    test->add_flag("--mark-last-event", mark_last,
                   "Treat the largest observation of each group as an event");
    bool standardize = false;
    test->add_flag("--standardize-covariates", standardize,
                   "Z-score covariate columns on the pooled sample");
    std::string output = "-";
    test->add_option("--output", output, "Output path ('-' = stdout)")->capture_default_str();
    std::string format = "json";
    test->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo study from a scenario file");
    std::string scenario_path;
    mc->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    std::optional<std::uint64_t> mc_seed;
    mc->add_option("--seed", mc_seed, "Override the scenario seed");
    int mc_threads = 0;
    mc->add_option("--threads", mc_threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    std::string mc_output = "-";
    mc->add_option("--output", mc_output, "Output path ('-' = stdout)")->capture_default_str();
    std::string mc_format = "csv";
    mc->add_option("--format", mc_format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    // curve-sim
    auto* cs = app.add_subcommand("curve-sim",
                                  "Monte Carlo study sampling from two survival curves");
    std::string curve0, curve1;
    cs->add_option("--curve0", curve0, "CSV with columns t,s for group 0")->required();
    cs->add_option("--curve1", curve1, "CSV with columns t,s for group 1")->required();
    std::size_t n0 = 100, n1 = 100;
    cs->add_option("--n0", n0, "Group 0 sample size")->capture_default_str();
    cs->add_option("--n1", n1, "Group 1 sample size")->capture_default_str();
    std::size_t replications = 500;
    cs->add_option("--replications", replications, "Simulated datasets")->capture_default_str();
    double multiplier = 3.0;
    cs->add_option("--censoring-multiplier", multiplier,
                   "Censoring C ~ Uniform(0, multiplier * tau)")
        ->capture_default_str();
    std::optional<double> rate;
    cs->add_option("--censoring-rate", rate,
                   "Calibrate the censoring bound to this rate instead");
    double alpha_level = 0.05;
    cs->add_option("--alpha-level", alpha_level, "Rejection threshold on p-values")
        ->capture_default_str();
    std::uint64_t cs_permutations = 1000;
    cs->add_option("--permutations", cs_permutations, "Monte Carlo relabelings per dataset")
        ->capture_default_str();
    std::optional<std::uint64_t> cs_seed;
    cs->add_option("--seed", cs_seed, "RNG seed (default: drawn randomly and echoed)");
    int cs_threads = 0;
    cs->add_option("--threads", cs_threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    MeasureFlags cmf;
    add_measure_flags(cs, cmf, "energy, gaussian, laplacian");
    std::string cs_output = "-";
    cs->add_option("--output", cs_output, "Output path ('-' = stdout)")->capture_default_str();
    std::string cs_format = "csv";
    cs->add_option("--format", cs_format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (test->parsed())
            return cmd_test(input, tmf, mode, permutations, exact_threshold, seed, threads,
                            do_truncate, tau, mark_last, standardize, output, format);
        if (mc->parsed()) return cmd_mc(scenario_path, mc_seed, mc_threads, mc_output, mc_format);
        return cmd_curve_sim(curve0, curve1, n0, n1, replications, multiplier, rate, alpha_level,
                             cs_permutations, cs_seed, cs_threads, cmf, cs_output, cs_format);
    } catch (const censtest::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
