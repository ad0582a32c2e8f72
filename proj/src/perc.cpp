#include "umrn/perc.hpp"

#include <algorithm>
#include <queue>

#include "umrn/exec.hpp"

namespace umrn {
namespace perc {

namespace {
constexpr std::uint64_t kPercSalt = 0x70657263ULL;
}

CoupledPercolation couple(const Network& g, std::uint64_t seed) {
    CoupledPercolation c;
    c.net = g;
    c.labels.resize(g.edges.size());
    Rng rng = Rng::stream(seed, 0, kPercSalt);
    for (;;) {
        for (auto& x : c.labels) x = rng.next() >> 1;
        std::vector<std::uint64_t> sorted = c.labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
    }
    return c;
}

ClusterReport cluster_of_root(const CoupledPercolation& c, std::uint32_t root, double p,
                              std::uint32_t validity_radius) {
    const std::uint64_t threshold = p_threshold(p);
    auto inc = make_incidence(c.net);
    auto dist = bfs_distances(c.net, root);
    ClusterReport rep;
    std::vector<bool> seen(c.net.vertex_count(), false);
    std::vector<std::uint32_t> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        rep.vertices.push_back(v);
        rep.reach_radius = std::max(rep.reach_radius, dist[v]);
        if (validity_radius != kUnboundedRadius && dist[v] >= validity_radius) {
            rep.hits_validity_boundary = true;
            continue;  // neighbors of boundary vertices are not trustworthy
        }
        for (const HalfEdge& h : inc[v]) {
            if (c.labels[h.edge] >= threshold || seen[h.other]) continue;
            seen[h.other] = true;
            stack.push_back(h.other);
        }
    }
    std::sort(rep.vertices.begin(), rep.vertices.end());
    return rep;
}

bool monotonicity_check(const CoupledPercolation& c, std::uint32_t root,
                        const std::vector<double>& p_list, std::uint32_t validity_radius) {
    std::vector<std::uint32_t> previous;
    bool first = true;
    for (double p : p_list) {
        ClusterReport rep = cluster_of_root(c, root, p, validity_radius);
        if (!first &&
            !std::includes(rep.vertices.begin(), rep.vertices.end(), previous.begin(),
                           previous.end()))
            return false;
        previous = std::move(rep.vertices);
        first = false;
    }
    return true;
}

std::uint64_t minimax_reach_label(const Network& g, const std::vector<std::uint64_t>& labels,
                                  std::uint32_t root, std::uint32_t R) {
    auto inc = make_incidence(g);
    auto dist = bfs_distances(g, root);
    // Dijkstra on the minimax value: best[v] = min over paths of max label
    std::vector<std::uint64_t> best(g.vertex_count(), UINT64_MAX);
    using Item = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    best[root] = 0;
    queue.push({0, root});
    while (!queue.empty()) {
        auto [val, v] = queue.top();
        queue.pop();
        if (val > best[v]) continue;
        if (dist[v] >= R) return val;  // first touch of the sphere is optimal
        for (const HalfEdge& h : inc[v]) {
            std::uint64_t nv = std::max(val, labels[h.edge]);
            if (nv < best[h.other]) {
                best[h.other] = nv;
                queue.push({nv, h.other});
            }
        }
    }
    return UINT64_MAX;  // the sphere is unreachable
}

nlohmann::json SurvivalCurve::to_json() const {
    return {{"p", p_grid},
            {"survival", survival},
            {"threshold_estimate", threshold_estimate},
            {"crossing_level", crossing_level},
            {"radius", radius},
            {"draws", draws}};
}

SurvivalCurve pc_estimate(const RootedSampler& s, std::uint32_t R,
                          const std::vector<double>& p_grid, std::uint64_t draws,
                          std::uint64_t seed, double crossing_level) {
    if (s.truncated() && R > s.truncation_radius)
        throw Error("truncation-too-small", "survival radius exceeds truncation radius");
    if (!std::is_sorted(p_grid.begin(), p_grid.end()))
        throw Error("invalid-parameter", "p grid must be sorted");
    std::vector<std::uint64_t> minimax(draws);
    parallel_for(draws, [&](std::uint64_t i) {
        RootedNetwork g = s.draw(seed, i);
        CoupledPercolation c = couple(g.net, Rng::mix(seed ^ Rng::mix(i ^ kPercSalt)));
        minimax[i] = minimax_reach_label(g.net, c.labels, g.root, R);
    });
    SurvivalCurve curve;
    curve.p_grid = p_grid;
    curve.radius = R;
    curve.draws = draws;
    curve.crossing_level = crossing_level;
    for (double p : p_grid) {
        std::uint64_t threshold = p_threshold(p);
        std::uint64_t hits = 0;
        for (std::uint64_t m : minimax)
            if (m < threshold) ++hits;
        curve.survival.push_back(static_cast<double>(hits) / static_cast<double>(draws));
    }
    double top = curve.survival.empty() ? 0.0 : curve.survival.back();
    double level = crossing_level * top;
    curve.threshold_estimate = p_grid.empty() ? 0.0 : p_grid.back();
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        if (curve.survival[i] >= level) {
            if (i == 0 || curve.survival[i] == curve.survival[i - 1]) {
                curve.threshold_estimate = p_grid[i];
            } else {
                // linear interpolation between the bracketing grid points
                double s0 = curve.survival[i - 1], s1 = curve.survival[i];
                curve.threshold_estimate =
                    p_grid[i - 1] + (p_grid[i] - p_grid[i - 1]) * (level - s0) / (s1 - s0);
            }
            break;
        }
    return curve;
}

RootedSampler cluster_sampler(const RootedSampler& s, double p) {
    p_threshold(p);  // validates
    RootedSampler out;
    out.descriptor = {{"kind", "cluster"}, {"p", p}, {"base", s.descriptor}};
    out.truncation_radius = s.truncation_radius;
    out.infinite_support = false;  // clusters may be finite
    out.max_root_degree = s.max_root_degree;
    auto base = s.draw;
    double pp = p;
    out.draw = [base, pp](std::uint64_t seed, std::uint64_t index) {
        RootedNetwork g = base(seed, index);
        CoupledPercolation c = couple(g.net, Rng::mix(seed ^ Rng::mix(index ^ kPercSalt)));
        const std::uint64_t threshold = p_threshold(pp);
        // keep only open edges, then take the root component
        Network open;
        open.vertex_marks = g.net.vertex_marks;
        for (std::size_t i = 0; i < g.net.edges.size(); ++i)
            if (c.labels[i] < threshold) {
                const Edge& e = g.net.edges[i];
                open.add_edge(e.u, e.v, e.mu, e.mv);
            }
        return component_of(open, g.root, g.validity_radius);
    };
    return out;
}

}  // namespace perc
}  // namespace umrn
