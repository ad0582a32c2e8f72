#include "umrn/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "umrn/canonical.hpp"
#include "umrn/exec.hpp"
#include "umrn/forest.hpp"
#include "umrn/gen.hpp"
#include "umrn/mtp.hpp"
#include "umrn/perc.hpp"
#include "umrn/spectral.hpp"
#include "umrn/walk.hpp"

namespace umrn {
namespace cli {

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string format = "json";
    unsigned workers = 0;

    std::string sampler;
    std::string p_text;
    std::uint32_t radius = 6;
    std::string graph_file;
    std::uint32_t n_vertices = 1000;
    double cluster_p = -1.0;
};

std::uint64_t effective_seed(const CommonOpts& o) {
    if (o.seed_set) return o.seed;
    if (const char* env = std::getenv("UMTP_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_sampler) {
    cmd->add_option("--seed", o.seed, "PRNG seed (fallback: UMTP_SEED, then 1)")
        ->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--workers", o.workers, "worker threads (default: cores)");
    if (with_sampler) {
        cmd->add_option("--sampler", o.sampler,
                        "ugw|agw|canopy|line|uniform|biased-center-p3|degree-biased-star|config");
        cmd->add_option("--p", o.p_text, "offspring law, e.g. 0:0.2,1:0.3,2:0.5");
        cmd->add_option("--radius", o.radius, "truncation radius");
        cmd->add_option("--graph", o.graph_file, "rooted network JSON file (uniform sampler)");
        cmd->add_option("--n-vertices", o.n_vertices, "graph size for the config sampler");
        cmd->add_option("--cluster-p", o.cluster_p,
                        "compose with the open-cluster-of-the-root sampler at this p");
    }
}

RootedNetwork load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("file-not-found", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return rooted_network_from_json(ss.str());
}

RootedSampler make_sampler(const CommonOpts& o) {
    RootedSampler s;
    if (o.sampler == "ugw" || o.sampler == "agw") {
        if (o.p_text.empty()) throw Error("usage", "--p required for " + o.sampler);
        auto p = gen::OffspringDistribution::parse(o.p_text);
        s = o.sampler == "ugw" ? gen::ugw_sampler(p, o.radius) : gen::agw_sampler(p, o.radius);
    } else if (o.sampler == "canopy") {
        s = gen::canopy_sampler(o.radius);
    } else if (o.sampler == "line") {
        s = gen::line_sampler(o.radius);
    } else if (o.sampler == "uniform") {
        if (o.graph_file.empty()) throw Error("usage", "--graph required for uniform sampler");
        s = gen::uniform_root(load_graph(o.graph_file).net);
    } else if (o.sampler == "biased-center-p3") {
        s = gen::biased_root_sampler(path_network(3), {0, 1, 0});
    } else if (o.sampler == "degree-biased-star") {
        Network star = star_network(3);
        auto deg = degrees(star);
        std::vector<std::uint64_t> w(deg.begin(), deg.end());
        s = gen::biased_root_sampler(star, w);
    } else if (o.sampler == "config") {
        if (o.p_text.empty()) throw Error("usage", "--p required for config sampler");
        s = gen::config_model_sampler(o.n_vertices, gen::OffspringDistribution::parse(o.p_text));
    } else {
        throw Error("usage", "unknown sampler '" + o.sampler + "'");
    }
    if (o.cluster_p >= 0.0) s = perc::cluster_sampler(s, o.cluster_p);
    return s;
}

nlohmann::json base_report(const std::string& command, const CommonOpts& o,
                           nlohmann::json config) {
    config["seed"] = effective_seed(o);
    config["workers"] = o.workers == 0 ? worker_count() : o.workers;
    return {{"command", command},
            {"version", kVersion},
            {"prng", rng_name()},
            {"config", std::move(config)}};
}

int emit(const CommonOpts& o, const nlohmann::json& report, const std::string& csv = "",
         const std::string& table = "") {
    std::string text;
    if (o.format == "csv") {
        if (csv.empty()) throw Error("usage", "--format csv not available for this subcommand");
        text = csv;
    } else {
        text = report.dump(2);
        text.push_back('\n');
    }
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) throw Error("file-error", "cannot write " + o.out);
        f << text;
        if (!table.empty()) std::cout << table;  // console summary, report in the file
    }
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

// deterministic random connected graph for the spectral subcommands
Network random_connected_graph(std::uint32_t n, double extra_edge_prob, Rng& rng) {
    Network g;
    for (std::uint32_t v = 0; v < n; ++v) g.add_vertex();
    for (std::uint32_t v = 1; v < n; ++v)
        g.add_edge(static_cast<std::uint32_t>(rng.below(v)), v);  // random tree backbone
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
            if (rng.uniform() < extra_edge_prob) g.add_edge(u, v);
    return g;
}

// --- subcommand bodies -----------------------------------------------------

int cmd_sample(const CommonOpts& o, std::uint64_t count) {
    RootedSampler s = make_sampler(o);
    std::uint64_t seed = effective_seed(o);
    nlohmann::json draws = nlohmann::json::array();
    std::string csv = "index,canonical_key\n";
    for (std::uint64_t i = 0; i < count; ++i) {
        RootedNetwork g = s.draw(seed, i);
        auto form = canonical_form(g);
        draws.push_back({{"index", i},
                         {"network", nlohmann::json::parse(to_json_string(g))},
                         {"canonical_key", form.key.hex()}});
        csv += std::to_string(i) + "," + form.key.hex() + "\n";
    }
    nlohmann::json rep = base_report(
        "sample", o, {{"sampler", s.descriptor}, {"count", count}});
    rep["results"] = std::move(draws);
    return emit(o, rep, csv);
}

int cmd_mtp_test(const CommonOpts& o, std::uint64_t n, std::uint32_t f_radius,
                 std::uint64_t f_seed, const std::string& f_kind, double level) {
    RootedSampler s = make_sampler(o);
    mtp::MassTransportFn f;
    if (f_kind == "key-lookup") f = mtp::key_lookup_mtf(f_radius, f_seed);
    else if (f_kind == "adjacency") f = mtp::adjacency_mtf();
    else if (f_kind == "degree-compare") f = mtp::degree_compare_mtf();
    else throw Error("usage", "unknown mass function '" + f_kind + "'");

    auto report = mtp::mtp_monte_carlo_test(s, f, n, effective_seed(o));
    nlohmann::json rep = base_report("mtp-test", o,
                                     {{"sampler", s.descriptor},
                                      {"n", n},
                                      {"f", f_kind},
                                      {"f_radius", f.radius},
                                      {"f_seed", f_seed},
                                      {"level", level}});
    rep["results"] = report.to_json();
    rep["results"]["rejected"] = report.p_value < level;
    std::string csv = "sent_mean,received_mean,p_value,rejected\n" +
                      std::to_string(report.sent_mean) + "," +
                      std::to_string(report.received_mean) + "," +
                      std::to_string(report.p_value) + "," +
                      (report.p_value < level ? "1" : "0") + "\n";
    char line[160];
    std::snprintf(line, sizeof line,
                  "   sent mean  received mean    p-value\n%12.6f   %12.6f   %8.4f%s\n",
                  report.sent_mean, report.received_mean, report.p_value,
                  report.p_value < level ? "   REJECTED" : "");
    int rc = emit(o, rep, csv, line);
    return rc != 0 ? rc : (report.p_value < level ? 2 : 0);
}

int cmd_converge(const CommonOpts& o, const std::string& n_list_text, std::uint64_t draws,
                 const std::string& histogram_out) {
    if (o.p_text.empty()) throw Error("usage", "--p required");
    auto p = gen::OffspringDistribution::parse(o.p_text);
    std::uint64_t seed = effective_seed(o);
    auto ugw = gen::ugw_sampler(p, 1);
    auto ref = mtp::ball_distribution(ugw, 1, draws, Rng::mix(seed ^ 0x5eed));

    std::vector<std::uint32_t> sizes;
    {
        std::stringstream ss(n_list_text);
        std::string item;
        while (std::getline(ss, item, ',')) sizes.push_back(std::stoul(item));
    }
    std::string hist_csv = "n,key_hex,count,total\n";
    nlohmann::json rows = nlohmann::json::array();
    std::string csv = "n,tv_to_ugw,draws\n";
    for (std::uint32_t n : sizes) {
        auto cfg = gen::config_model_sampler(n, p);
        auto hist = mtp::ball_distribution(cfg, 1, draws, seed);
        double tv = mtp::tv_distance(hist, ref);
        rows.push_back({{"n", n}, {"tv_to_ugw", tv}, {"draws", draws}});
        csv += std::to_string(n) + "," + std::to_string(tv) + "," + std::to_string(draws) + "\n";
        for (const auto& kv : hist.counts) {
            CanonicalKey key{kv.first};
            hist_csv += std::to_string(n) + "," + key.hex() + "," +
                        std::to_string(kv.second) + "," + std::to_string(hist.total) + "\n";
        }
    }
    if (!histogram_out.empty()) {
        std::ofstream f(histogram_out);
        if (!f) throw Error("file-error", "cannot write " + histogram_out);
        f << hist_csv;
    }
    std::string table = "       n    tv_to_ugw\n";
    for (const auto& row : rows) {
        char line[64];
        std::snprintf(line, sizeof line, "%8u    %9.5f\n",
                      row["n"].get<std::uint32_t>(), row["tv_to_ugw"].get<double>());
        table += line;
    }
    nlohmann::json rep = base_report("converge", o,
                                     {{"p", p.to_json()}, {"draws", draws},
                                      {"n_list", n_list_text}});
    rep["results"] = std::move(rows);
    return emit(o, rep, csv, table);
}

int cmd_walk(const CommonOpts& o, std::uint32_t r, std::uint32_t k, std::uint64_t n,
             double level, bool no_bias, bool control_drift) {
    RootedSampler s = make_sampler(o);
    std::uint64_t seed = effective_seed(o);
    walk::Stepper step = control_drift ? walk::drift_stepper(0.9) : walk::srw_stepper();
    auto stat = walk::stationarity_test(s, r, k, n, seed, !no_bias, step);
    auto rev = walk::reversibility_test(s, r, n, Rng::mix(seed ^ 0xabc), !no_bias, step);
    bool rejected = stat.p_value < level || rev.p_value < level;
    nlohmann::json rep = base_report("walk", o,
                                     {{"sampler", s.descriptor},
                                      {"r", r},
                                      {"k", k},
                                      {"n", n},
                                      {"level", level},
                                      {"bias", !no_bias},
                                      {"control", control_drift ? "drift" : "none"}});
    rep["results"] = {{"stationarity", stat.to_json()},
                      {"reversibility", rev.to_json()},
                      {"rejected", rejected}};
    int rc = emit(o, rep);
    return rc != 0 ? rc : (rejected ? 2 : 0);
}

int cmd_speed(const CommonOpts& o, std::uint32_t steps, std::uint32_t trials,
              double mean_degree, const std::string& trajectory_out) {
    RootedSampler s = make_sampler(o);
    std::uint64_t seed = effective_seed(o);
    auto report = walk::speed_estimate(s, steps, trials, seed);
    if (!trajectory_out.empty()) {
        // dump one trajectory from the degree-biased walk, (step, vertex, time)
        auto biased = walk::degree_biased(s);
        auto space = biased.make_space(seed, 0);
        Rng rng = Rng::stream(seed, 0, 0x74726a);
        std::ofstream f(trajectory_out);
        if (!f) throw Error("file-error", "cannot write " + trajectory_out);
        f << "step,vertex,time\n";
        std::uint32_t cur = space->root();
        for (std::uint32_t j = 0; j <= std::min(steps, 100000u); ++j) {
            f << j << "," << cur << "," << j << "\n";
            if (j < steps) {
                const auto& nb = space->neighbors(cur);
                cur = nb[rng.below(nb.size())];
            }
        }
    }
    nlohmann::json rep = base_report("speed", o,
                                     {{"sampler", s.descriptor},
                                      {"steps", steps},
                                      {"trials", trials}});
    rep["results"] = report.to_json();
    if (mean_degree > 0)
        rep["results"]["tree_formula"] = walk::tree_speed_formula(mean_degree);
    std::string csv = "mean,se,steps,trials\n" + std::to_string(report.mean) + "," +
                      std::to_string(report.se) + "," + std::to_string(steps) + "," +
                      std::to_string(trials) + "\n";
    return emit(o, rep, csv);
}

int cmd_heat(const CommonOpts& o, const std::string& t_grid_text) {
    if (o.graph_file.empty()) throw Error("usage", "--graph required");
    RootedNetwork g = load_graph(o.graph_file);
    std::vector<double> weights;
    for (const Edge& e : g.net.edges)
        weights.push_back(is_scaled_real(e.mu) ? scaled_real_value(e.mu) : 1.0);
    auto op = walk::laplacian_operator(g.net, weights);
    auto ts = parse_grid(t_grid_text);
    nlohmann::json rows = nlohmann::json::array();
    std::string csv = "t,return_probability,max_row_sum_error\n";
    for (double t : ts) {
        Eigen::MatrixXd p = walk::heat_kernel(op, t);
        double row_err = 0.0;
        for (Eigen::Index i = 0; i < p.rows(); ++i)
            row_err = std::max(row_err, std::fabs(p.row(i).sum() - 1.0));
        rows.push_back({{"t", t},
                        {"return_probability", p(g.root, g.root)},
                        {"max_row_sum_error", row_err}});
        csv += std::to_string(t) + "," + std::to_string(p(g.root, g.root)) + "," +
               std::to_string(row_err) + "\n";
    }
    nlohmann::json rep = base_report("heat", o, {{"graph", o.graph_file},
                                                 {"t_grid", t_grid_text}});
    rep["results"] = std::move(rows);
    return emit(o, rep, csv);
}

int cmd_return_compare(const CommonOpts& o, std::uint32_t n, std::uint32_t count,
                       const std::string& t_grid_text, double tolerance) {
    std::uint64_t seed = effective_seed(o);
    auto ts = parse_grid(t_grid_text);
    bool all_hold = true;
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint32_t i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, i, 0x7274);
        Network g = random_connected_graph(n, 0.05, rng);
        std::vector<double> c1, c2;
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            double base = 0.2 + rng.uniform();
            c1.push_back(base);
            c2.push_back(base + rng.uniform());
        }
        auto report = walk::return_comparison(g, c1, c2, ts);
        bool ok = report.holds(tolerance);
        all_hold = all_hold && ok;
        rows.push_back({{"graph", i}, {"holds", ok}, {"traces", report.to_json()}});
    }
    nlohmann::json rep = base_report("return-compare", o,
                                     {{"n", n}, {"count", count}, {"t_grid", t_grid_text},
                                      {"tolerance", tolerance}});
    rep["results"] = {{"instances", std::move(rows)}, {"all_hold", all_hold}};
    int rc = emit(o, rep);
    return rc != 0 ? rc : (all_hold ? 0 : 2);
}

int cmd_ust(const CommonOpts& o, std::uint32_t n, std::uint64_t draws) {
    std::uint64_t seed = effective_seed(o);
    Network g;
    if (!o.graph_file.empty()) {
        g = load_graph(o.graph_file).net;
    } else {
        Rng rng = Rng::stream(seed, 0, 0x757374);
        g = random_connected_graph(n, 0.08, rng);
    }
    auto report = forest::ust_degree_stats(g, draws, seed);
    auto oracle = forest::edge_inclusion_oracle(g, std::vector<double>(g.edges.size(), 1.0));
    double oracle_sum = 0.0;
    for (double q : oracle) oracle_sum += q;
    auto sample_tree =
        forest::wilson_ust(g, std::vector<double>(g.edges.size(), 1.0), 0, seed);
    nlohmann::json rep = base_report("ust", o, {{"vertices", g.vertex_count()},
                                                {"edges", g.edges.size()},
                                                {"draws", draws}});
    rep["results"] = report.to_json();
    rep["results"]["oracle_inclusion_sum"] = oracle_sum;
    rep["results"]["sample_tree_edges"] = sample_tree.to_json();
    return emit(o, rep);
}

int cmd_msf(const CommonOpts& o, std::uint32_t R, std::uint64_t draws,
            const std::string& labels_out) {
    RootedSampler s = make_sampler(o);
    std::uint64_t seed = effective_seed(o);
    auto report = forest::msf_degree_stats(s, R, draws, seed);
    if (!labels_out.empty()) {
        // label dump for the first draw, (edge index, label numerator)
        RootedNetwork g = s.draw(seed, 0);
        auto l = forest::label_network(g.net, Rng::mix(seed ^ Rng::mix(0)));
        std::ofstream f(labels_out);
        if (!f) throw Error("file-error", "cannot write " + labels_out);
        f << "edge,label\n";
        for (std::size_t e = 0; e < l.labels.size(); ++e)
            f << e << "," << l.labels[e] << "\n";
    }
    nlohmann::json rep = base_report("msf", o, {{"sampler", s.descriptor},
                                                {"R", R},
                                                {"draws", draws}});
    rep["results"] = report.to_json();
    return emit(o, rep);
}

int cmd_perc(const CommonOpts& o, std::uint32_t R, const std::string& p_grid_text,
             std::uint64_t draws) {
    RootedSampler s = make_sampler(o);
    auto curve = perc::pc_estimate(s, R, parse_grid(p_grid_text), draws, effective_seed(o));
    std::string table = "       p     survival\n";
    for (std::size_t i = 0; i < curve.p_grid.size(); ++i) {
        char line[64];
        std::snprintf(line, sizeof line, "%8.3f    %9.5f\n", curve.p_grid[i],
                      curve.survival[i]);
        table += line;
    }
    {
        char line[64];
        std::snprintf(line, sizeof line, "crossing %.4f\n", curve.threshold_estimate);
        table += line;
    }
    nlohmann::json rep = base_report("perc", o, {{"sampler", s.descriptor},
                                                 {"R", R},
                                                 {"draws", draws}});
    rep["results"] = curve.to_json();
    std::string csv = "p,R,survivals,draws\n";
    for (std::size_t i = 0; i < curve.p_grid.size(); ++i)
        csv += std::to_string(curve.p_grid[i]) + "," + std::to_string(R) + "," +
               std::to_string(curve.survival[i] * static_cast<double>(draws)) + "," +
               std::to_string(draws) + "\n";
    return emit(o, rep, csv, table);
}

int cmd_iso(const CommonOpts& o, double open_below) {
    if (o.graph_file.empty()) throw Error("usage", "--graph required");
    RootedNetwork g = load_graph(o.graph_file);
    // attach coupling labels as half-edge marks, then cut at the threshold
    perc::CoupledPercolation c = perc::couple(g.net, effective_seed(o));
    Network marked;
    marked.vertex_marks = g.net.vertex_marks;
    for (std::size_t i = 0; i < g.net.edges.size(); ++i) {
        const Edge& e = g.net.edges[i];
        Mark m{static_cast<std::int64_t>(c.labels[i] >> 32)};
        marked.add_edge(e.u, e.v, m, m);
    }
    const std::int64_t cut =
        static_cast<std::int64_t>(perc::p_threshold(open_below) >> 32);
    auto report = mtp::isoperimetry_report(
        marked, [cut](const Mark& mu, const Mark& mv) {
            return mu.at(0) < cut && mv.at(0) < cut;
        });
    nlohmann::json rep = base_report("iso", o, {{"graph", o.graph_file},
                                                {"open_below", open_below}});
    rep["results"] = {{"boundary_cluster_mean", report.boundary_cluster_mean.str()},
                      {"boundary_root_mean", report.boundary_root_mean.str()},
                      {"alpha_term", report.alpha_term.str()},
                      {"expected_degree", report.expected_degree.str()},
                      {"lemma_holds", report.lemma_holds},
                      {"identity_holds", report.identity_holds}};
    return emit(o, rep);
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"unimodular random rooted network experiments"};
    app.require_subcommand(1);

    CommonOpts o;

    std::uint64_t count = 10, n = 100000, draws = 10000;
    std::uint32_t f_radius = 1, r = 1, k = 1, steps = 10000, trials = 1000;
    std::uint32_t rc_n = 40, rc_count = 10, ust_n = 50, R = 8;
    std::uint64_t f_seed = 11;
    std::string f_kind = "key-lookup", n_list = "100,1000,10000";
    std::string histogram_out, trajectory_out, labels_out;
    std::string t_grid = "0.1,1,10", p_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    double level = 0.01, mean_degree = 0, tolerance = 1e-10, open_below = 0.5;
    bool no_bias = false, control_drift = false;

    auto* c_sample = app.add_subcommand("sample", "draw rooted networks and canonical keys");
    add_common(c_sample, o, true);
    c_sample->add_option("--count", count, "number of draws");

    auto* c_mtp = app.add_subcommand("mtp-test", "Mass-Transport Principle Monte Carlo test");
    add_common(c_mtp, o, true);
    c_mtp->add_option("--n", n, "draws");
    c_mtp->add_option("--f", f_kind, "key-lookup|adjacency|degree-compare");
    c_mtp->add_option("--f-radius", f_radius, "mass function radius");
    c_mtp->add_option("--f-seed", f_seed, "mass function table seed");
    c_mtp->add_option("--level", level, "rejection level");

    auto* c_conv = app.add_subcommand("converge",
                                      "configuration-model -> UGW ball convergence");
    add_common(c_conv, o, true);
    c_conv->add_option("--n-list", n_list, "comma-separated graph sizes");
    c_conv->add_option("--draws", draws, "draws per size");
    c_conv->add_option("--histogram-out", histogram_out,
                       "also write per-size key histograms (key_hex CSV)");

    auto* c_walk = app.add_subcommand("walk", "stationarity and reversibility tests");
    add_common(c_walk, o, true);
    c_walk->add_option("--r", r, "ball radius");
    c_walk->add_option("--k", k, "walk steps");
    c_walk->add_option("--n", n, "draws");
    c_walk->add_option("--level", level, "rejection level");
    c_walk->add_flag("--no-bias", no_bias, "skip degree biasing (negative control)");
    c_walk->add_flag("--control-drift", control_drift, "drift stepper (negative control)");

    auto* c_speed = app.add_subcommand("speed", "random walk speed estimate");
    add_common(c_speed, o, true);
    c_speed->add_option("--steps", steps, "steps per walk");
    c_speed->add_option("--trials", trials, "number of walks");
    c_speed->add_option("--mean-degree", mean_degree, "report 1 - 2/d alongside");
    c_speed->add_option("--trajectory-out", trajectory_out,
                        "dump one walk as CSV (step,vertex,time)");

    auto* c_heat = app.add_subcommand("heat", "heat kernel on a weighted network");
    add_common(c_heat, o, true);
    c_heat->add_option("--t-grid", t_grid, "comma-separated times");

    auto* c_ret = app.add_subcommand("return-compare",
                                     "coupled return-probability monotonicity");
    add_common(c_ret, o, false);
    c_ret->add_option("--n", rc_n, "vertices per random graph");
    c_ret->add_option("--count", rc_count, "number of instances");
    c_ret->add_option("--t-grid", t_grid, "comma-separated times");
    c_ret->add_option("--tolerance", tolerance, "violation tolerance");

    auto* c_ust = app.add_subcommand("ust", "Wilson sampler degree statistics");
    add_common(c_ust, o, true);
    c_ust->add_option("--n", ust_n, "vertices (random graph when no --graph)");
    c_ust->add_option("--draws", draws, "tree draws");

    auto* c_msf = app.add_subcommand("msf", "wired minimal spanning forest statistics");
    add_common(c_msf, o, true);
    c_msf->add_option("--R", R, "wiring radius");
    c_msf->add_option("--draws", draws, "draws");
    c_msf->add_option("--labels-out", labels_out, "dump first draw's labels (edge,label CSV)");

    auto* c_perc = app.add_subcommand("perc", "percolation survival curve");
    add_common(c_perc, o, true);
    c_perc->add_option("--R", R, "reach radius");
    c_perc->add_option("--p-grid", p_grid, "comma-separated p values");
    c_perc->add_option("--draws", draws, "draws");

    auto* c_iso = app.add_subcommand("iso", "isoperimetry report for a coupled percolation");
    add_common(c_iso, o, true);
    c_iso->add_option("--open-below", open_below, "edge open iff label < this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (o.workers > 0) set_worker_count(o.workers);

    try {
        if (c_sample->parsed()) return cmd_sample(o, count);
        if (c_mtp->parsed()) return cmd_mtp_test(o, n, f_radius, f_seed, f_kind, level);
        if (c_conv->parsed()) return cmd_converge(o, n_list, draws, histogram_out);
        if (c_walk->parsed()) return cmd_walk(o, r, k, n, level, no_bias, control_drift);
        if (c_speed->parsed()) return cmd_speed(o, steps, trials, mean_degree, trajectory_out);
        if (c_heat->parsed()) return cmd_heat(o, t_grid);
        if (c_ret->parsed()) return cmd_return_compare(o, rc_n, rc_count, t_grid, tolerance);
        if (c_ust->parsed()) return cmd_ust(o, ust_n, draws);
        if (c_msf->parsed()) return cmd_msf(o, R, draws, labels_out);
        if (c_perc->parsed()) return cmd_perc(o, R, p_grid, draws);
        if (c_iso->parsed()) return cmd_iso(o, open_below);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace cli
}  // namespace umrn
