#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string g_bin;
std::string g_data;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_bin + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    const int rc = pclose(p);
    return {WEXITSTATUS(rc), out};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
}

std::string tiny() { return g_data + "/tiny.csv"; }

}  // namespace

TEST_CASE("test subcommand emits the expected document") {
    auto r = run("test --input " + tiny() + " --measure energy --measure gaussian --seed 7");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);

    CHECK(doc["schema_version"] == 1);
    CHECK(doc["command"] == "test");
    CHECK(doc["group0"] == "a");
    CHECK(doc["group1"] == "b");
    CHECK(doc["n0"] == 4);
    CHECK(doc["n1"] == 4);
    CHECK(doc["seed"] == 7);
    CHECK(doc["options"]["truncate"] == false);
    CHECK(doc["options"]["bandwidth"] == "median-uncensored,sqrt-half");
    REQUIRE(doc["tests"].size() == 2);

    const auto& energy = doc["tests"][0];
    CHECK(energy["measure"] == "energy");
    CHECK(energy["form"] == "v");
    CHECK(energy["params"]["alpha"] == 1.0);
    CHECK(energy["sigma"].is_null());
    // C(8, 4) = 70 relabelings, enumerated exactly; values pinned by hand
    CHECK(energy["mode"] == "exact");
    CHECK(energy["permutations"] == 70);
    CHECK(energy["statistic"].get<double>() == doctest::Approx(0.65625).epsilon(1e-12));
    CHECK(energy["p_value"].get<double>() == doctest::Approx(62.0 / 70.0).epsilon(1e-12));

    const auto& gauss = doc["tests"][1];
    CHECK(gauss["measure"] == "gaussian");
    // median of squared uncensored distances is 2.25, sigma = sqrt(2.25 / 2)
    CHECK(gauss["sigma"].get<double>() == doctest::Approx(1.06066017177982).epsilon(1e-12));
    CHECK(gauss["degenerate"] == 0);
}

TEST_CASE("outputs are byte-identical across thread counts") {
    const std::string base = "test --input " + tiny() +
                             " --measure energy --measure laplacian --mode monte-carlo"
                             " --permutations 600 --seed 11 --threads ";
    auto r1 = run(base + "1");
    auto r4 = run(base + "4");
    REQUIRE(r1.code == 0);
    REQUIRE(r4.code == 0);
    CHECK(r1.out == r4.out);

    json doc = json::parse(r1.out);
    CHECK(doc["tests"][0]["mode"] == "monte-carlo");
    CHECK(doc["tests"][0]["permutations"] == 600);
}

TEST_CASE("a missing seed is drawn and echoed") {
    auto r1 = run("test --input " + tiny());
    auto r2 = run("test --input " + tiny());
    REQUIRE(r1.code == 0);
    json d1 = json::parse(r1.out), d2 = json::parse(r2.out);
    CHECK(d1["seed"].is_number_unsigned());
    CHECK(d1["seed"] != d2["seed"]);
}

TEST_CASE("csv output format") {
    auto r = run("test --input " + tiny() + " --measure energy --measure matern --seed 1 --format csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("measure,form,params,sigma,statistic,scaled_statistic,"
                      "p_value,mode,permutations,exceedances,degenerate\n", 0) == 0);
    CHECK(r.out.find("\nenergy,v,alpha=1,") != std::string::npos);
    CHECK(r.out.find("\nmatern,v,nu=1.5,") != std::string::npos);
}

TEST_CASE("preprocessing flags are applied and recorded") {
    auto r = run("test --input " + tiny() + " --seed 2 --truncate --mark-last-event");
    REQUIRE(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["options"]["truncate"] == true);
    CHECK(doc["options"]["mark_last_event"] == true);
}

TEST_CASE("failures exit nonzero with a message") {
    auto missing = run("test --input /nonexistent/nope.csv");
    CHECK(missing.code != 0);
    CHECK(missing.out.find("nope.csv") != std::string::npos);

    auto badmeasure = run("test --input " + tiny() + " --measure frobnicate");
    CHECK(badmeasure.code != 0);
    CHECK(badmeasure.out.find("frobnicate") != std::string::npos);

    auto toobig = run("test --input " + tiny() + " --mode exact --exact-threshold 10");
    CHECK(toobig.code != 0);

    auto badsigma = run("test --input " + tiny() + " --measure gaussian --sigma banana");
    CHECK(badsigma.code != 0);
}

TEST_CASE("output lands in a file when requested") {
    const std::string path = "/tmp/censtest_cli_out.json";
    std::remove(path.c_str());
    auto r = run("test --input " + tiny() + " --seed 3 --output " + path);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    json doc = json::parse(f);
    CHECK(doc["seed"] == 3);
}

TEST_CASE("mc subcommand runs scenario files") {
    const std::string scenario = "/tmp/censtest_cli_scenario.json";
    write_file(scenario, R"({
  "name": "demo",
  "seed": 9,
  "n0": 12,
  "n1": 12,
  "replications": 4,
  "permutations": 49,
  "group0": {"dist": "exponential", "rate": 1.0},
  "group1": {"dist": "exponential", "rate": 1.0},
  "censoring": {"model": "target-rate", "rate": 0.1},
  "tests": [{"measure": "energy"}, {"measure": "gaussian", "sigma": "auto"}]
})");

    auto csv = run("mc --scenario " + scenario);
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("scenario,test,rejection_rate,mean_p,sd_p,"
                        "replications_used,replications_skipped\n", 0) == 0);
    CHECK(csv.out.find("\ndemo,energy,") != std::string::npos);
    CHECK(csv.out.find("\ndemo,gaussian,") != std::string::npos);

    auto again = run("mc --scenario " + scenario);
    CHECK(again.out == csv.out);

    auto alt = run("mc --scenario " + scenario + " --seed 10");
    REQUIRE(alt.code == 0);
    CHECK(alt.out != csv.out);

    auto j = run("mc --scenario " + scenario + " --format json");
    REQUIRE(j.code == 0);
    json doc = json::parse(j.out);
    CHECK(doc["command"] == "mc");
    CHECK(doc["seed"] == 9);
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["scenario"] == "demo");
    CHECK(doc["rows"][0]["replications_used"].get<int>() +
              doc["rows"][0]["replications_skipped"].get<int>() ==
          4);

    auto broken = run("mc --scenario /tmp/censtest_does_not_exist.json");
    CHECK(broken.code != 0);
}

TEST_CASE("scenario grids expand into one scenario per entry") {
    const std::string scenario = "/tmp/censtest_cli_grid.json";
    write_file(scenario, R"({
  "name": "grid-demo",
  "seed": 12,
  "n0": 8,
  "n1": 8,
  "replications": 3,
  "permutations": 29,
  "group0": {"dist": "exponential", "rate": 1.0},
  "group1": {"dist": "exponential", "rate": 2.0},
  "censoring": {"model": "target-rate", "rate": 0.2},
  "tests": [{"measure": "energy"}],
  "grid": [
    {"label": "n8", "n0": 8, "n1": 8},
    {"label": "n12", "n0": 12, "n1": 12}
  ]
})");
    auto r = run("mc --scenario " + scenario);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\nn8,energy,") != std::string::npos);
    CHECK(r.out.find("\nn12,energy,") != std::string::npos);
}

TEST_CASE("curve-sim subcommand") {
    write_file("/tmp/censtest_curve_a.csv", "t,s\n0,1\n1,0.5\n2,0.2\n3,0\n");
    write_file("/tmp/censtest_curve_b.csv", "t,s\n0,1\n1,0.7\n2,0.35\n3,0\n");
    auto r = run("curve-sim --curve0 /tmp/censtest_curve_a.csv"
                 " --curve1 /tmp/censtest_curve_b.csv"
                 " --n0 12 --n1 12 --replications 3 --permutations 29 --seed 21");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("curve-sim,energy,") != std::string::npos);
    CHECK(r.out.find("curve-sim,gaussian,") != std::string::npos);
    CHECK(r.out.find("curve-sim,laplacian,") != std::string::npos);

    auto again = run("curve-sim --curve0 /tmp/censtest_curve_a.csv"
                     " --curve1 /tmp/censtest_curve_b.csv"
                     " --n0 12 --n1 12 --replications 3 --permutations 29 --seed 21");
    CHECK(again.out == r.out);
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli <censtest-binary> <data-dir>\n");
        return 2;
    }
    g_bin = argv[1];
    g_data = argv[2];
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
