#include "umrn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include <Eigen/Dense>

#include "umrn/exec.hpp"
#include "umrn/stats.hpp"

namespace umrn {
namespace forest {

namespace {
constexpr std::uint64_t kForestSalt = 0x666f72657374ULL;
}

bool is_spanning_tree(const Network& g, const SpanningSubgraph& t) {
    const std::uint32_t n = g.vertex_count();
    if (t.edges.size() + 1 != n) return false;
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::uint32_t ei : t.edges) {
        const Edge& e = g.edges[ei];
        std::uint32_t a = find(e.u), b = find(e.v);
        if (a == b) return false;  // cycle
        parent[a] = b;
    }
    return true;  // n-1 acyclic edges on n vertices are connected
}

SpanningSubgraph wilson_ust(const Network& g, const std::vector<double>& weights,
                            std::uint32_t root, std::uint64_t seed) {
    const std::uint32_t n = g.vertex_count();
    if (!is_connected(g)) throw Error("disconnected-input", "Wilson needs a connected network");
    if (weights.size() != g.edges.size())
        throw Error("invalid-weights", "one weight per edge required");
    auto inc = make_incidence(g);
    std::vector<double> total_weight(n, 0.0);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (const HalfEdge& h : inc[v]) {
            if (weights[h.edge] <= 0.0 || !std::isfinite(weights[h.edge]))
                throw Error("invalid-weights", "Wilson needs positive finite weights");
            total_weight[v] += weights[h.edge];
        }
    }

    Rng rng = Rng::stream(seed, 0, kForestSalt);
    std::vector<bool> in_tree(n, false);
    std::vector<std::uint32_t> next_edge(n, 0);  // successor edge on the current walk
    in_tree[root] = true;
    SpanningSubgraph tree;

    for (std::uint32_t start = 0; start < n; ++start) {
        if (in_tree[start]) continue;
        // random walk from start until the tree, remembering the last exit edge
        std::uint32_t cur = start;
        while (!in_tree[cur]) {
            double pick = rng.uniform() * total_weight[cur];
            const HalfEdge* chosen = &inc[cur].back();
            for (const HalfEdge& h : inc[cur]) {
                pick -= weights[h.edge];
                if (pick <= 0.0) { chosen = &h; break; }
            }
            next_edge[cur] = chosen->edge;
            cur = chosen->other;
        }
        // retrace the loop-erased path and attach it
        cur = start;
        while (!in_tree[cur]) {
            in_tree[cur] = true;
            std::uint32_t e = next_edge[cur];
            tree.edges.push_back(e);
            const Edge& ed = g.edges[e];
            cur = ed.u == cur ? ed.v : ed.u;
        }
    }
    std::sort(tree.edges.begin(), tree.edges.end());
    return tree;
}

std::vector<double> edge_inclusion_oracle(const Network& g, const std::vector<double>& weights) {
    const std::uint32_t n = g.vertex_count();
    if (!is_connected(g))
        throw Error("singular-laplacian", "inclusion oracle needs a connected network");
    if (weights.size() != g.edges.size())
        throw Error("invalid-weights", "one weight per edge required");
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.u == e.v) continue;
        lap(e.u, e.v) -= weights[i];
        lap(e.v, e.u) -= weights[i];
        lap(e.u, e.u) += weights[i];
        lap(e.v, e.v) += weights[i];
    }
    // pseudoinverse through the rank-one shift: (L + J/n)^-1 - J/n
    Eigen::MatrixXd shifted =
        lap + Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd inv = shifted.ldlt().solve(
        Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd pinv =
        inv - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));

    std::vector<double> prob(g.edges.size(), 0.0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (e.u == e.v) continue;  // loops never belong to spanning trees
        double reff = pinv(e.u, e.u) + pinv(e.v, e.v) - 2.0 * pinv(e.u, e.v);
        prob[i] = weights[i] * reff;
    }
    return prob;
}

LabeledNetwork label_network(const Network& g, std::uint64_t seed) {
    LabeledNetwork l;
    l.net = g;
    l.labels.resize(g.edges.size());
    Rng rng = Rng::stream(seed, 0, kForestSalt);
    for (;;) {
        for (auto& x : l.labels) x = rng.next() >> 1;  // 63-bit scaled uniform
        std::vector<std::uint64_t> sorted = l.labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
    }
    return l;
}

namespace {

/// Can u reach target (vertex test) using only edges with label < cutoff?
/// target < 0 scans for any vertex in `goal` instead.
bool reaches_below(const Network& g, const std::vector<std::uint64_t>& labels,
                   const std::vector<std::vector<HalfEdge>>& inc, std::uint32_t from,
                   std::uint64_t cutoff, std::uint32_t skip_edge,
                   const std::vector<bool>* goal, std::uint32_t target) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<std::uint32_t> stack{from};
    seen[from] = true;
    if (goal && (*goal)[from]) return true;
    if (!goal && from == target) return true;
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        for (const HalfEdge& h : inc[v]) {
            if (h.edge == skip_edge || labels[h.edge] >= cutoff || seen[h.other]) continue;
            if (!goal && h.other == target) return true;
            seen[h.other] = true;
            if (goal && (*goal)[h.other]) return true;
            stack.push_back(h.other);
        }
    }
    return false;
}

}  // namespace

SpanningSubgraph fmsf_rule(const LabeledNetwork& l) {
    {
        std::vector<std::uint64_t> sorted = l.labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error("duplicate-label", "FMSF rule needs distinct labels");
    }
    auto inc = make_incidence(l.net);
    SpanningSubgraph keep;
    for (std::uint32_t ei = 0; ei < l.net.edges.size(); ++ei) {
        const Edge& e = l.net.edges[ei];
        if (e.u == e.v) continue;  // a loop is its own cycle maximum
        // the label is a cycle maximum iff the endpoints reconnect below it
        if (!reaches_below(l.net, l.labels, inc, e.u, l.labels[ei], ei, nullptr, e.v))
            keep.edges.push_back(ei);
    }
    return keep;
}

SpanningSubgraph wmsf_rule(const LabeledNetwork& l, const std::vector<std::uint32_t>& boundary) {
    // Ascending-label sweep with a union-find: when edge e comes up, the
    // structure holds exactly the edges with smaller labels, so the free rule
    // is "endpoints already connected" and the wired rule is "both endpoint
    // components touch the boundary".
    {
        std::vector<std::uint64_t> sorted = l.labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error("duplicate-label", "WMSF rule needs distinct labels");
    }
    const std::uint32_t n = l.net.vertex_count();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<bool> touches(n, false);
    for (std::uint32_t v : boundary) touches[v] = true;
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::uint32_t> order(l.net.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return l.labels[a] < l.labels[b];
    });
    SpanningSubgraph keep;
    for (std::uint32_t ei : order) {
        const Edge& e = l.net.edges[ei];
        std::uint32_t ru = find(e.u), rv = find(e.v);
        bool cycle_max = ru == rv;  // loops included
        bool wired_out = touches[ru] && touches[rv];
        if (!cycle_max && !wired_out) keep.edges.push_back(ei);
        if (ru != rv) {
            parent[ru] = rv;
            touches[rv] = touches[rv] || touches[ru];
        }
    }
    std::sort(keep.edges.begin(), keep.edges.end());
    return keep;
}

InvasionTrace invasion(const LabeledNetwork& l, std::uint32_t start, std::uint64_t max_steps) {
    auto inc = make_incidence(l.net);
    InvasionTrace trace;
    std::vector<bool> in(l.net.vertex_count(), false);
    using Item = std::pair<std::uint64_t, std::uint32_t>;  // (label, edge)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> frontier;
    auto absorb = [&](std::uint32_t v) {
        in[v] = true;
        trace.vertices.push_back(v);
        for (const HalfEdge& h : inc[v])
            if (!in[h.other]) frontier.push({l.labels[h.edge], h.edge});
    };
    absorb(start);
    while (!frontier.empty() && trace.edges.size() < max_steps) {
        auto [label, ei] = frontier.top();
        frontier.pop();
        const Edge& e = l.net.edges[ei];
        std::uint32_t fresh;
        if (in[e.u] && !in[e.v]) fresh = e.v;
        else if (in[e.v] && !in[e.u]) fresh = e.u;
        else continue;  // both ends already invaded
        trace.edges.push_back(ei);
        absorb(fresh);
    }
    return trace;
}

namespace {

// canonical key of the radius-1 ball around `root` inside the edge subset
std::string subgraph_ball_key(const Network& g, const std::vector<std::uint32_t>& edges,
                              std::uint32_t root) {
    Network sub;
    sub.vertex_marks = g.vertex_marks;
    for (std::uint32_t ei : edges) {
        const Edge& e = g.edges[ei];
        sub.add_edge(e.u, e.v, e.mu, e.mv);
    }
    RootedNetwork rooted = component_of(sub, root);
    return canonical_form(ball(rooted, 1)).key.bytes;
}

}  // namespace

nlohmann::json UstDegreeReport::to_json() const {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& kv : ball_histogram) {
        CanonicalKey key{kv.first};
        hist[key.hex()] = kv.second;
    }
    return {{"mean_root_degree", mean_root_degree},
            {"se", se},
            {"exact_expected", exact_expected},
            {"draws", draws},
            {"ball_histogram", std::move(hist)}};
}

double histogram_tv(const std::map<std::string, std::uint64_t>& a,
                    const std::map<std::string, std::uint64_t>& b) {
    double ta = 0, tb = 0;
    for (auto& kv : a) ta += static_cast<double>(kv.second);
    for (auto& kv : b) tb += static_cast<double>(kv.second);
    double tv = 0.0;
    for (auto& kv : a) {
        auto it = b.find(kv.first);
        double pb = it == b.end() ? 0.0 : it->second / tb;
        tv += std::fabs(kv.second / ta - pb);
    }
    for (auto& kv : b)
        if (!a.count(kv.first)) tv += kv.second / tb;
    return tv / 2.0;
}

UstDegreeReport ust_degree_stats(const Network& g, std::uint64_t draws, std::uint64_t seed) {
    const std::uint32_t n = g.vertex_count();
    std::vector<double> weights(g.edges.size(), 1.0);
    std::vector<double> deg_at_root(draws);
    std::vector<std::string> keys(draws);
    parallel_for(draws, [&](std::uint64_t i) {
        SpanningSubgraph t = wilson_ust(g, weights, 0, Rng::mix(seed ^ Rng::mix(i)));
        Rng rng = Rng::stream(seed, i, kForestSalt + 1);
        std::uint32_t root = static_cast<std::uint32_t>(rng.below(n));
        std::uint32_t d = 0;
        for (std::uint32_t ei : t.edges) {
            const Edge& e = g.edges[ei];
            if (e.u == root || e.v == root) ++d;
        }
        deg_at_root[i] = d;
        keys[i] = subgraph_ball_key(g, t.edges, root);
    });
    auto ci = mean_ci(deg_at_root);
    UstDegreeReport r;
    r.mean_root_degree = ci.mean;
    r.se = ci.se;
    r.exact_expected = 2.0 - 2.0 / static_cast<double>(n);
    r.draws = draws;
    for (auto& k : keys) ++r.ball_histogram[k];
    return r;
}

nlohmann::json MsfDegreeReport::to_json() const {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& kv : ball_histogram) {
        CanonicalKey key{kv.first};
        hist[key.hex()] = kv.second;
    }
    return {{"mean_root_degree", mean_root_degree},
            {"se", se},
            {"draws", draws},
            {"radius", radius},
            {"ball_histogram", std::move(hist)}};
}

MsfDegreeReport msf_degree_stats(const RootedSampler& s, std::uint32_t R, std::uint64_t draws,
                                 std::uint64_t seed) {
    if (s.truncated() && R + 1 > s.truncation_radius)
        throw Error("truncation-too-small", "msf stats need truncation radius R + 1");
    std::vector<double> deg_at_root(draws);
    std::vector<std::string> keys(draws);
    parallel_for(draws, [&](std::uint64_t i) {
        RootedNetwork g = s.draw(seed, i);
        LabeledNetwork l = label_network(g.net, Rng::mix(seed ^ Rng::mix(i)));
        std::vector<std::uint32_t> boundary;
        if (g.truncated()) {
            // the wired rule treats boundary-reaching low-label paths as infinite
            auto dist = bfs_distances(g.net, g.root);
            std::uint32_t radius = std::min(R, g.validity_radius);
            for (std::uint32_t v = 0; v < g.net.vertex_count(); ++v)
                if (dist[v] >= radius) boundary.push_back(v);
        }
        SpanningSubgraph f = wmsf_rule(l, boundary);
        std::uint32_t d = 0;
        for (std::uint32_t ei : f.edges) {
            const Edge& e = g.net.edges[ei];
            if (e.u == g.root || e.v == g.root) ++d;
        }
        deg_at_root[i] = d;
        keys[i] = subgraph_ball_key(g.net, f.edges, g.root);
    });
    auto ci = mean_ci(deg_at_root);
    MsfDegreeReport r;
    r.mean_root_degree = ci.mean;
    r.se = ci.se;
    r.draws = draws;
    r.radius = R;
    for (auto& k : keys) ++r.ball_histogram[k];
    return r;
}

}  // namespace forest
}  // namespace umrn
