#include "censtest/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "censtest/error.hpp"
#include "censtest/rng.hpp"
#include "format.hpp"

namespace censtest {

using nlohmann::json;
using nlohmann::ordered_json;

std::string form_name(StatisticForm form) {
    switch (form) {
        case StatisticForm::V: return "v";
        case StatisticForm::U: return "u";
        default: return "unnormalized-v";
    }
}

std::string measure_name(const StatisticSpec& spec) {
    if (std::holds_alternative<EnergyMeasure>(spec.measure)) return "energy";
    const KernelSpec& k = std::get<MmdMeasure>(spec.measure).kernel;
    if (std::holds_alternative<GaussianKernel>(k)) return "gaussian";
    if (std::holds_alternative<LaplacianKernel>(k)) return "laplacian";
    if (std::holds_alternative<RationalQuadraticKernel>(k)) return "rational-quadratic";
    if (std::holds_alternative<MaternKernel>(k)) return "matern";
    return "distance-induced";
}

ordered_json measure_params(const StatisticSpec& spec) {
    ordered_json p = ordered_json::object();
    if (const auto* e = std::get_if<EnergyMeasure>(&spec.measure)) {
        p["alpha"] = e->alpha;
        return p;
    }
    const KernelSpec& k = std::get<MmdMeasure>(spec.measure).kernel;
    if (const auto* rq = std::get_if<RationalQuadraticKernel>(&k)) {
        p["c"] = rq->c;
        p["beta"] = rq->beta;
    } else if (const auto* m = std::get_if<MaternKernel>(&k)) {
        p["nu"] = m->nu;
    } else if (const auto* di = std::get_if<DistanceInducedKernel>(&k)) {
        p["alpha"] = di->alpha;
        p["origin"] = di->origin;
    }
    return p;
}

namespace {

std::string bandwidth_name(const BandwidthRule& rule) {
    std::string s = rule.variant == BandwidthVariant::MedianUncensoredOnly
                        ? "median-uncensored"
                        : "median-all";
    s += rule.scaling == BandwidthScaling::SqrtHalf ? ",sqrt-half" : ",sqrt";
    return s;
}

ordered_json result_json(const TestResult& r) {
    ordered_json t;
    t["measure"] = measure_name(r.spec);
    t["form"] = form_name(r.spec.form);
    t["params"] = measure_params(r.spec);
    if (r.sigma) t["sigma"] = *r.sigma;
    else t["sigma"] = nullptr;
    t["statistic"] = r.statistic.raw;
    t["scaled_statistic"] = r.statistic.scaled;
    t["p_value"] = r.p_value;
    t["mode"] = r.exact ? "exact" : "monte-carlo";
    t["permutations"] = r.permutations;
    t["exceedances"] = r.exceedances;
    t["degenerate"] = r.degenerate;
    return t;
}

std::string params_compact(const StatisticSpec& spec) {
    const auto p = measure_params(spec);
    std::string out;
    for (const auto& [k, v] : p.items()) {
        if (!out.empty()) out += ';';
        out += k;
        out += '=';
        out += v.is_number() ? detail::format_double(v.get<double>()) : v.dump();
    }
    return out;
}

}  // namespace

ordered_json test_report(const TestReportInfo& info, const std::vector<TestResult>& results) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "test";
    doc["input"] = info.input;
    doc["group0"] = info.group0;
    doc["group1"] = info.group1;
    doc["n0"] = info.n0;
    doc["n1"] = info.n1;
    doc["seed"] = info.seed;
    ordered_json opts;
    opts["truncate"] = info.truncated;
    opts["mark_last_event"] = info.marked_last_event;
    opts["standardize_covariates"] = info.standardized_covariates;
    opts["bandwidth"] = bandwidth_name(info.bandwidth);
    doc["options"] = opts;
    doc["tests"] = ordered_json::array();
    for (const auto& r : results) doc["tests"].push_back(result_json(r));
    return doc;
}

std::string test_csv(const std::vector<TestResult>& results) {
    std::ostringstream out;
    out << "measure,form,params,sigma,statistic,scaled_statistic,p_value,mode,"
           "permutations,exceedances,degenerate\n";
    for (const auto& r : results) {
        out << measure_name(r.spec) << ',' << form_name(r.spec.form) << ','
            << params_compact(r.spec) << ',' << (r.sigma ? detail::format_double(*r.sigma) : "")
            << ',' << detail::format_double(r.statistic.raw) << ','
            << detail::format_double(r.statistic.scaled) << ','
            << detail::format_double(r.p_value) << ',' << (r.exact ? "exact" : "monte-carlo")
            << ',' << r.permutations << ',' << r.exceedances << ',' << r.degenerate << "\n";
    }
    return out.str();
}

ordered_json mc_report(const std::vector<McRow>& rows, std::uint64_t seed) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "mc";
    doc["seed"] = seed;
    doc["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json j;
        j["scenario"] = r.scenario;
        j["test"] = r.test;
        j["rejection_rate"] = r.rejection_rate;
        j["mean_p"] = r.mean_p;
        j["sd_p"] = r.sd_p;
        j["replications_used"] = r.replications_used;
        j["replications_skipped"] = r.replications_skipped;
        doc["rows"].push_back(std::move(j));
    }
    return doc;
}

std::string mc_csv(const std::vector<McRow>& rows) {
    std::ostringstream out;
    out << "scenario,test,rejection_rate,mean_p,sd_p,replications_used,replications_skipped\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.test << ',' << detail::format_double(r.rejection_rate)
            << ',' << detail::format_double(r.mean_p) << ',' << detail::format_double(r.sd_p)
            << ',' << r.replications_used << ',' << r.replications_skipped << "\n";
    }
    return out.str();
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw Error(path + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::size_t uint_field(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::string str(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

LifetimeGenerator parse_generator(const json& j, const std::string& path,
                                  const std::string& base_dir) {
    const std::string dist = str(require(j, "dist", path), path + ".dist");
    if (dist == "exponential")
        return ExponentialGen{num(require(j, "rate", path), path + ".rate")};
    if (dist == "gamma")
        return GammaGen{num(require(j, "shape", path), path + ".shape"),
                        num(require(j, "scale", path), path + ".scale")};
    if (dist == "lognormal")
        return LogNormalGen{num(require(j, "mu", path), path + ".mu"),
                            num(require(j, "sigma", path), path + ".sigma")};
    if (dist == "curve") {
        std::filesystem::path p(str(require(j, "path", path), path + ".path"));
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return CurveGen{load_curve(p.string())};
    }
    fail(path + ".dist", "unknown distribution '" + dist + "'");
}

CensoringModel parse_censoring(const json& j, const std::string& path) {
    const std::string model = str(require(j, "model", path), path + ".model");
    if (model == "target-rate")
        return TargetRate{num(require(j, "rate", path), path + ".rate")};
    if (model == "uniform-on-support")
        return UniformOnSupport{num(require(j, "multiplier", path), path + ".multiplier")};
    fail(path + ".model", "unknown censoring model '" + model + "'");
}

StatisticForm parse_form(const std::string& s, const std::string& path) {
    if (s == "v") return StatisticForm::V;
    if (s == "u") return StatisticForm::U;
    if (s == "unnormalized-v") return StatisticForm::UnnormalizedV;
    fail(path, "unknown form '" + s + "'");
}

std::optional<double> parse_sigma(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "auto") return std::nullopt;
        fail(path, "expected a number or \"auto\"");
    }
    return num(j, path);
}

ScenarioTest parse_test(const json& j, const std::string& path, StatisticForm default_form) {
    ScenarioTest t;
    const std::string measure = str(require(j, "measure", path), path + ".measure");
    t.spec.form = j.contains("form")
                      ? parse_form(str(j["form"], path + ".form"), path + ".form")
                      : default_form;

    auto sigma = [&]() -> std::optional<double> {
        if (!j.contains("sigma")) return std::nullopt;
        return parse_sigma(j["sigma"], path + ".sigma");
    };
    if (measure == "energy") {
        EnergyMeasure e;
        if (j.contains("alpha")) e.alpha = num(j["alpha"], path + ".alpha");
        t.spec.measure = e;
    } else if (measure == "gaussian") {
        t.spec.measure = MmdMeasure{GaussianKernel{sigma()}};
    } else if (measure == "laplacian") {
        t.spec.measure = MmdMeasure{LaplacianKernel{sigma()}};
    } else if (measure == "rational-quadratic") {
        RationalQuadraticKernel k;
        if (j.contains("c")) k.c = num(j["c"], path + ".c");
        if (j.contains("beta")) k.beta = num(j["beta"], path + ".beta");
        t.spec.measure = MmdMeasure{k};
    } else if (measure == "matern") {
        MaternKernel k;
        if (j.contains("nu")) k.nu = num(j["nu"], path + ".nu");
        k.sigma = sigma();
        t.spec.measure = MmdMeasure{k};
    } else if (measure == "distance-induced") {
        DistanceInducedKernel k;
        if (j.contains("alpha")) k.alpha = num(j["alpha"], path + ".alpha");
        if (j.contains("origin")) k.origin = num(j["origin"], path + ".origin");
        t.spec.measure = MmdMeasure{k};
    } else {
        fail(path + ".measure", "unknown measure '" + measure + "'");
    }
    validate_spec(t.spec);
    t.name = j.contains("name") ? str(j["name"], path + ".name") : measure;
    return t;
}

BandwidthRule parse_bandwidth(const json& j, const std::string& path) {
    BandwidthRule rule;
    if (j.contains("variant")) {
        const std::string v = str(j["variant"], path + ".variant");
        if (v == "median-uncensored") rule.variant = BandwidthVariant::MedianUncensoredOnly;
        else if (v == "median-all") rule.variant = BandwidthVariant::MedianAllPairs;
        else fail(path + ".variant", "unknown bandwidth variant '" + v + "'");
    }
    if (j.contains("scaling")) {
        const std::string s = str(j["scaling"], path + ".scaling");
        if (s == "sqrt-half") rule.scaling = BandwidthScaling::SqrtHalf;
        else if (s == "sqrt") rule.scaling = BandwidthScaling::Sqrt;
        else fail(path + ".scaling", "unknown bandwidth scaling '" + s + "'");
    }
    return rule;
}

Scenario parse_scenario(const json& j, const std::string& path, const std::string& base_dir) {
    Scenario sc;
    sc.name = str(require(j, "name", path), path + ".name");
    sc.n0 = uint_field(require(j, "n0", path), path + ".n0");
    sc.n1 = uint_field(require(j, "n1", path), path + ".n1");
    sc.replications = uint_field(require(j, "replications", path), path + ".replications");
    sc.gen0 = parse_generator(require(j, "group0", path), path + ".group0", base_dir);
    sc.gen1 = parse_generator(require(j, "group1", path), path + ".group1", base_dir);
    sc.censoring = parse_censoring(require(j, "censoring", path), path + ".censoring");
    if (j.contains("alpha_level")) sc.alpha_level = num(j["alpha_level"], path + ".alpha_level");
    if (j.contains("permutations"))
        sc.plan.monte_carlo_rounds = uint_field(j["permutations"], path + ".permutations");
    if (j.contains("exact_threshold"))
        sc.plan.exact_threshold = uint_field(j["exact_threshold"], path + ".exact_threshold");
    if (j.contains("bandwidth")) sc.bandwidth = parse_bandwidth(j["bandwidth"], path + ".bandwidth");
    sc.plan.seed = static_cast<std::uint64_t>(
        uint_field(require(j, "seed", path), path + ".seed"));

    const StatisticForm default_form =
        j.contains("form") ? parse_form(str(j["form"], path + ".form"), path + ".form")
                           : StatisticForm::V;
    const json& tests = require(j, "tests", path);
    if (!tests.is_array() || tests.empty()) fail(path + ".tests", "expected a nonempty array");
    for (std::size_t i = 0; i < tests.size(); ++i)
        sc.tests.push_back(
            parse_test(tests[i], path + ".tests[" + std::to_string(i) + "]", default_form));
    return sc;
}

}  // namespace

std::vector<Scenario> scenarios_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw Error("$: expected an object");
    if (!j.contains("grid")) return {parse_scenario(j, "$", base_dir)};

    const json& grid = j["grid"];
    if (!grid.is_array() || grid.empty()) throw Error("$.grid: expected a nonempty array");
    std::vector<Scenario> out;
    json base = j;
    base.erase("grid");
    const std::uint64_t file_seed =
        static_cast<std::uint64_t>(uint_field(require(j, "seed", "$"), "$.seed"));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::string path = "$.grid[" + std::to_string(i) + "]";
        if (!grid[i].is_object()) throw Error(path + ": expected an object");
        json merged = base;
        std::string label;
        for (const auto& [k, v] : grid[i].items()) {
            if (k == "label") label = str(v, path + ".label");
            else merged[k] = v;
        }
        Scenario sc = parse_scenario(merged, path, base_dir);
        if (!label.empty()) sc.name = label;
        sc.plan.seed = substream(file_seed, i)();
        out.push_back(std::move(sc));
    }
    return out;
}

std::vector<Scenario> load_scenarios(const std::string& path, std::uint64_t* base_seed) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
    const std::string dir = std::filesystem::path(path).parent_path().string();
    auto out = scenarios_from_json(j, dir.empty() ? "." : dir);
    if (base_seed) {
        *base_seed = j.is_object() && j.contains("seed")
                         ? static_cast<std::uint64_t>(uint_field(j["seed"], "$.seed"))
                         : out.front().plan.seed;
    }
    return out;
}

}  // namespace censtest
