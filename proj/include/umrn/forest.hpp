#pragma once

#include <map>

#include "umrn/canonical.hpp"
#include "umrn/sampler.hpp"

namespace umrn {
namespace forest {

/// Edge subset of a parent network, kept as sorted edge indices.
struct SpanningSubgraph {
    std::vector<std::uint32_t> edges;

    bool operator==(const SpanningSubgraph& o) const { return edges == o.edges; }
    nlohmann::json to_json() const { return nlohmann::json(edges); }
};

/// acyclic + connected + n-1 edges, against the parent network
bool is_spanning_tree(const Network& g, const SpanningSubgraph& t);

/// Wilson's algorithm: spanning tree with probability proportional to the
/// product of its edge weights, built from loop-erased random walks to the
/// growing tree.
SpanningSubgraph wilson_ust(const Network& g, const std::vector<double>& weights,
                            std::uint32_t root, std::uint64_t seed);

/// Exact edge inclusion probabilities P[e in UST] = c(e) R_eff(e) via the
/// Laplacian pseudoinverse. Loops get probability 0; the sum over edges is
/// n - 1.
std::vector<double> edge_inclusion_oracle(const Network& g, const std::vector<double>& weights);

/// Uniform labels on edges, distinct by construction (63-bit scaled integers,
/// resampled on collision).
struct LabeledNetwork {
    Network net;
    std::vector<std::uint64_t> labels;
};
LabeledNetwork label_network(const Network& g, std::uint64_t seed);

/// Free MSF rule: delete every edge whose label is the largest in some cycle
/// through it. On finite connected inputs this is the minimum spanning tree.
SpanningSubgraph fmsf_rule(const LabeledNetwork& l);

/// Wired MSF rule on a truncation: additionally delete edges both of whose
/// endpoints reach the boundary through strictly smaller labels
/// (boundary-reaching paths stand in for the infinite paths of the rule).
SpanningSubgraph wmsf_rule(const LabeledNetwork& l, const std::vector<std::uint32_t>& boundary);

struct InvasionTrace {
    std::vector<std::uint32_t> edges;     // accepted, in invasion order
    std::vector<std::uint32_t> vertices;  // reached, in invasion order
};

/// Invasion percolation from `start`: repeatedly add the minimum-label
/// boundary edge; run to completion it is Prim's algorithm.
InvasionTrace invasion(const LabeledNetwork& l, std::uint32_t start, std::uint64_t max_steps);

struct UstDegreeReport {
    double mean_root_degree = 0.0;
    double se = 0.0;
    double exact_expected = 0.0;  // 2 - 2/n
    std::uint64_t draws = 0;
    /// canonical keys of the radius-1 in-tree ball around the uniform root;
    /// across a graph sequence these histograms track UST -> WUSF convergence
    std::map<std::string, std::uint64_t> ball_histogram;
    nlohmann::json to_json() const;
};

/// Wilson mean uniform-root degree against the exact 2 - 2/n.
UstDegreeReport ust_degree_stats(const Network& g, std::uint64_t draws, std::uint64_t seed);

double histogram_tv(const std::map<std::string, std::uint64_t>& a,
                    const std::map<std::string, std::uint64_t>& b);

struct MsfDegreeReport {
    double mean_root_degree = 0.0;
    double se = 0.0;
    std::uint64_t draws = 0;
    std::uint32_t radius = 0;
    std::map<std::string, std::uint64_t> ball_histogram;  // radius-1 in-forest balls
    nlohmann::json to_json() const;
};

/// Mean root degree in the wired-MSF of truncated draws; the boundary is the
/// validity sphere.
MsfDegreeReport msf_degree_stats(const RootedSampler& s, std::uint32_t R, std::uint64_t draws,
                                 std::uint64_t seed);

}  // namespace forest
}  // namespace umrn
