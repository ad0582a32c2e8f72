#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "umrn/cli.hpp"
#include "umrn/network.hpp"

namespace {

int run_cli(const std::vector<const char*>& args) {
    std::vector<const char*> argv{"umrn"};
    argv.insert(argv.end(), args.begin(), args.end());
    return umrn::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("mtp-test smoke run exits 0 and writes a full report") {
    const char* out = "cli_mtp_smoke.json";
    int rc = run_cli({"mtp-test", "--sampler", "ugw", "--p", "0:0.2,1:0.3,2:0.5",
                      "--radius", "2", "--n", "800", "--f-radius", "1", "--seed", "7",
                      "--out", out});
    CHECK(rc == 0);
    auto rep = nlohmann::json::parse(slurp(out));
    CHECK(rep["command"] == "mtp-test");
    CHECK(rep["prng"] == "splitmix64-ctr");
    CHECK(rep["config"]["seed"] == 7);
    CHECK(rep["results"].contains("p_value"));
    std::remove(out);
}

TEST_CASE("biased control is rejected with exit code 2") {
    int rc = run_cli({"mtp-test", "--sampler", "biased-center-p3", "--f", "degree-compare",
                      "--n", "800", "--seed", "7", "--out", "cli_reject.json"});
    CHECK(rc == 2);
    std::remove("cli_reject.json");
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli({"mtp-test", "--sampler", "nonsense", "--out", "x.json"}) == 1);
    CHECK(run_cli({"mtp-test", "--sampler", "ugw", "--out", "x.json"}) == 1);  // missing --p
}

TEST_CASE("identical command lines produce byte-identical reports") {
    const char* a = "cli_rep_a.json";
    const char* b = "cli_rep_b.json";
    auto args = [&](const char* out) {
        return std::vector<const char*>{
            "speed", "--sampler", "line", "--radius", "1", "--steps", "200",
            "--trials", "50", "--seed", "42", "--out", out};
    };
    CHECK(run_cli(args(a)) == 0);
    CHECK(run_cli(args(b)) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
    std::remove(a);
    std::remove(b);
}

TEST_CASE("sample emits valid network json with canonical keys") {
    const char* out = "cli_sample.json";
    CHECK(run_cli({"sample", "--sampler", "canopy", "--radius", "3", "--count", "5",
                   "--seed", "3", "--out", out}) == 0);
    auto rep = nlohmann::json::parse(slurp(out));
    CHECK(rep["results"].size() == 5);
    for (const auto& row : rep["results"]) {
        auto g = umrn::rooted_network_from_json(row["network"].dump());
        CHECK(g.net.vertex_count() > 0);
        CHECK(row["canonical_key"].get<std::string>().size() > 0);
    }
    std::remove(out);
}

TEST_CASE("perc csv has the documented header") {
    const char* out = "cli_perc.csv";
    CHECK(run_cli({"perc", "--sampler", "line", "--radius", "5", "--R", "4",
                   "--p-grid", "0.5,1", "--draws", "200", "--seed", "5",
                   "--format", "csv", "--out", out}) == 0);
    std::string text = slurp(out);
    CHECK(text.rfind("p,R,survivals,draws\n", 0) == 0);
    std::remove(out);
}

TEST_CASE("walk subcommand: ugw passes, drift control rejected") {
    CHECK(run_cli({"walk", "--sampler", "ugw", "--p", "0:0.3,2:0.7", "--radius", "6",
                   "--r", "1", "--k", "2", "--n", "1200", "--seed", "11",
                   "--out", "cli_walk_a.json"}) == 0);
    CHECK(run_cli({"walk", "--sampler", "ugw", "--p", "0:0.3,2:0.7", "--radius", "6",
                   "--r", "1", "--k", "2", "--n", "1200", "--seed", "11",
                   "--control-drift", "--out", "cli_walk_b.json"}) == 2);
    std::remove("cli_walk_a.json");
    std::remove("cli_walk_b.json");
}

TEST_CASE("iso subcommand reports exact identities on a graph file") {
    const char* gf = "cli_iso_graph.json";
    {
        std::ofstream f(gf);
        f << umrn::to_json_string({umrn::cycle_network(5), 0, umrn::kUnboundedRadius});
    }
    const char* out = "cli_iso.json";
    CHECK(run_cli({"iso", "--graph", gf, "--open-below", "0.5", "--seed", "9",
                   "--out", out}) == 0);
    auto rep = nlohmann::json::parse(slurp(out));
    CHECK(rep["results"]["lemma_holds"] == true);
    CHECK(rep["results"]["identity_holds"] == true);
    std::remove(gf);
    std::remove(out);
}

TEST_CASE("return-compare subcommand holds on random coupled instances") {
    CHECK(run_cli({"return-compare", "--n", "20", "--count", "3", "--seed", "3",
                   "--out", "cli_ret.json"}) == 0);
    std::remove("cli_ret.json");
}

TEST_CASE("export surfaces: histograms, trajectories, labels") {
    CHECK(run_cli({"converge", "--p", "0:0.5,2:0.5", "--n-list", "50", "--draws", "300",
                   "--seed", "3", "--histogram-out", "cli_hist.csv",
                   "--out", "cli_conv.json"}) == 0);
    std::string hist = slurp("cli_hist.csv");
    CHECK(hist.rfind("n,key_hex,count,total\n", 0) == 0);
    CHECK(hist.find("50,") != std::string::npos);

    CHECK(run_cli({"speed", "--sampler", "line", "--radius", "1", "--steps", "50",
                   "--trials", "10", "--seed", "3", "--trajectory-out", "cli_traj.csv",
                   "--out", "cli_speed.json"}) == 0);
    std::string traj = slurp("cli_traj.csv");
    CHECK(traj.rfind("step,vertex,time\n", 0) == 0);

    CHECK(run_cli({"msf", "--sampler", "line", "--radius", "5", "--R", "4",
                   "--draws", "50", "--seed", "3", "--labels-out", "cli_labels.csv",
                   "--out", "cli_msf.json"}) == 0);
    std::string labels = slurp("cli_labels.csv");
    CHECK(labels.rfind("edge,label\n", 0) == 0);

    for (const char* f : {"cli_hist.csv", "cli_conv.json", "cli_traj.csv",
                          "cli_speed.json", "cli_labels.csv", "cli_msf.json"})
        std::remove(f);
}

TEST_CASE("reports are independent of the worker count") {
    auto args = [&](const char* workers, const char* out) {
        return std::vector<const char*>{
            "mtp-test", "--sampler", "canopy", "--radius", "4", "--n", "2000",
            "--f-radius", "1", "--seed", "21", "--workers", workers, "--out", out};
    };
    CHECK(run_cli(args("1", "cli_w1.json")) == 0);
    CHECK(run_cli(args("2", "cli_w2.json")) == 0);
    std::string a = slurp("cli_w1.json"), b = slurp("cli_w2.json");
    // the embedded config records the worker count; results must not
    auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
    CHECK(ja["results"] == jb["results"]);
    std::remove("cli_w1.json");
    std::remove("cli_w2.json");
}

TEST_CASE("heat subcommand: K2 return probability from a graph file") {
    const char* gf = "cli_heat_graph.json";
    {
        std::ofstream f(gf);
        f << umrn::to_json_string({umrn::path_network(2), 0, umrn::kUnboundedRadius});
    }
    const char* out = "cli_heat.json";
    CHECK(run_cli({"heat", "--graph", gf, "--t-grid", "1.0", "--seed", "1",
                   "--out", out}) == 0);
    auto rep = nlohmann::json::parse(slurp(out));
    double p_oo = rep["results"][0]["return_probability"].get<double>();
    CHECK(std::abs(p_oo - (1 + std::exp(-2.0)) / 2) < 1e-9);
    CHECK(rep["results"][0]["max_row_sum_error"].get<double>() < 1e-10);
    std::remove(gf);
    std::remove(out);
}

TEST_CASE("ust subcommand reports degrees, oracle sum, and a sample tree") {
    const char* out = "cli_ust.json";
    CHECK(run_cli({"ust", "--n", "20", "--draws", "300", "--seed", "5", "--out", out}) == 0);
    auto rep = nlohmann::json::parse(slurp(out));
    double sum = rep["results"]["oracle_inclusion_sum"].get<double>();
    CHECK(std::abs(sum - 19.0) < 1e-6);
    CHECK(rep["results"]["sample_tree_edges"].size() == 19);
    std::remove(out);
}
