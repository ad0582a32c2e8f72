#pragma once

#include <map>

#include "umrn/rational.hpp"
#include "umrn/sampler.hpp"

namespace umrn {
namespace gen {

/// Offspring law with finite support and exactly rational probabilities,
/// so sampling and the degree formulas stay exact.
struct OffspringDistribution {
    std::vector<Rational> p;  // p[k] = P(k offspring)

    void validate() const;
    std::uint32_t max_support() const;
    /// expected root degree of the degree-biased (unimodular) version:
    /// (sum_k p_k/(k+1))^-1
    Rational ugw_expected_degree() const;
    /// sample an offspring count
    std::uint32_t sample(Rng& rng) const;
    /// parse "0:0.2,1:0.3,2:0.5" (values decimal or a/b)
    static OffspringDistribution parse(const std::string& text);

    nlohmann::json to_json() const;
};

/// point mass at k
OffspringDistribution delta(std::uint32_t k);

/// Uniform random root of a fixed finite network: the exact measure U(g).
RootedSampler uniform_root(const Network& g);

/// Root at vertex x with probability proportional to weights[x]. Not
/// unimodular in general; serves as the negative control for MTP tests.
RootedSampler biased_root_sampler(const Network& g, const std::vector<std::uint64_t>& weights);

/// Two independent Galton-Watson trees joined at their roots by an edge,
/// rooted at the first; truncated at radius R.
RootedSampler agw_sampler(const OffspringDistribution& p, std::uint32_t R);

/// AGW biased by the reciprocal root degree: the unimodular version.
RootedSampler ugw_sampler(const OffspringDistribution& p, std::uint32_t R);

/// Two-sided line (= AGW/UGW with one offspring per vertex), truncated at R.
RootedSampler line_sampler(std::uint32_t R);

/// Fixed-degree-distribution multigraph on n vertices targeting the UGW(p)
/// local limit: vertex ball counts r_k = p_{k-1}/(k c), balls paired
/// uniformly, one leftover ball ignored, loops and multi-edges kept.
Network config_model(std::uint32_t n, const OffspringDistribution& p, std::uint64_t seed);

/// Uniformly rooted fresh configuration models: draw index i uses the graph
/// with block index i / draws_per_graph and returns the radius-`ball_radius`
/// ball around the random root (so drawing stays O(ball), not O(n)).
RootedSampler config_model_sampler(std::uint32_t n, const OffspringDistribution& p,
                                   std::uint64_t draws_per_graph = 1000,
                                   std::uint32_t ball_radius = 2);

/// The random weak limit of balls in the 3-regular tree: root level n with
/// probability 2^-(n+1), leaves at level 0, binary joins upward.
RootedSampler canopy_sampler(std::uint32_t R);

/// Independent draws, Cartesian product graph rooted at the root pair.
RootedSampler cartesian_product(const RootedSampler& a, const RootedSampler& b);

/// A finite graph with an ordered pair of distinct pins, used to replace
/// edges.
struct TwoPointedGraph {
    Network net;
    std::uint32_t pin1 = 0, pin2 = 1;
};

/// Replace every edge by L(mark pair), re-rooting by the size-biased slot
/// rule (A = 2 + sum of internal vertex counts at the root; two slots keep
/// the old root).
RootedSampler edge_replace(const RootedSampler& s,
                           std::function<TwoPointedGraph(const Mark&, const Mark&)> L,
                           std::uint32_t max_replacement_vertices);

/// Non-backtracking-path tree to depth R with marks lifted through the cover
/// map.
RootedNetwork universal_cover(const RootedNetwork& g, std::uint32_t R);

/// Poisson weighted infinite tree, truncated: first K children per vertex,
/// edge lengths the first K points of a Poisson process with mean function
/// Lambda (piecewise linear through `grid`, extended by the last slope).
struct PwitConfig {
    std::vector<std::pair<double, double>> grid;  // (t, Lambda(t)), increasing, (0,0) first
    std::uint32_t K = 1;
    std::uint32_t R = 1;

    void validate() const;
    double lambda_inverse(double y) const;
};

RootedSampler pwit_sampler(const PwitConfig& cfg);

}  // namespace gen
}  // namespace umrn
