#pragma once

#include "umrn/sampler.hpp"

namespace umrn {
namespace perc {

/// The standard coupling: one independent uniform label per edge (63-bit
/// scaled integer), so every percolation parameter p is realized at once and
/// monotonically. Edge open at p iff label < threshold(p).
struct CoupledPercolation {
    Network net;
    std::vector<std::uint64_t> labels;
};

CoupledPercolation couple(const Network& g, std::uint64_t seed);

constexpr std::uint64_t kLabelScale = 1ULL << 63;

inline std::uint64_t p_threshold(double p) {
    if (p < 0.0 || p > 1.0) throw Error("invalid-parameter", "p must lie in [0,1]");
    if (p >= 1.0) return UINT64_MAX;  // everything open at p = 1
    return static_cast<std::uint64_t>(p * static_cast<double>(kLabelScale));
}

struct ClusterReport {
    std::vector<std::uint32_t> vertices;  // sorted
    std::uint32_t reach_radius = 0;       // max distance from the root inside the cluster
    bool hits_validity_boundary = false;  // cluster touched the truncation sphere
};

/// Open cluster of the root at parameter p by BFS over open edges. Touching
/// the validity boundary is reported, not fatal.
ClusterReport cluster_of_root(const CoupledPercolation& c, std::uint32_t root, double p,
                              std::uint32_t validity_radius = kUnboundedRadius);

/// Exact coupled monotonicity: cluster(p1) is contained in cluster(p2) for
/// p1 <= p2 on the same labels.
bool monotonicity_check(const CoupledPercolation& c, std::uint32_t root,
                        const std::vector<double>& p_list,
                        std::uint32_t validity_radius = kUnboundedRadius);

/// Smallest maximal label along any root-to-distance-R path: survival at p
/// is exactly (minimax label < threshold(p)), which makes the survival curve
/// monotone in p and antitone in R per draw.
std::uint64_t minimax_reach_label(const Network& g, const std::vector<std::uint64_t>& labels,
                                  std::uint32_t root, std::uint32_t R);

struct SurvivalCurve {
    std::vector<double> p_grid;
    std::vector<double> survival;   // P[root cluster reaches distance R]
    double threshold_estimate = 0;  // first p where survival crosses level * survival(max p)
    double crossing_level = 0.5;
    std::uint32_t radius = 0;
    std::uint64_t draws = 0;
    nlohmann::json to_json() const;
};

SurvivalCurve pc_estimate(const RootedSampler& s, std::uint32_t R,
                          const std::vector<double>& p_grid, std::uint64_t draws,
                          std::uint64_t seed, double crossing_level = 0.5);

/// The open cluster of the root as a rooted sampler; composes with the MTP
/// tests (the cluster of a unimodular measure is unimodular).
RootedSampler cluster_sampler(const RootedSampler& s, double p);

}  // namespace perc
}  // namespace umrn
