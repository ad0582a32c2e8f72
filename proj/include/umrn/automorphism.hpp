#pragma once

#include <cstdint>
#include <vector>

#include "umrn/network.hpp"

namespace umrn {

/// Orbit decomposition of the mark-preserving automorphism group.
struct OrbitReport {
    std::vector<std::vector<std::uint32_t>> orbits;   // partition of vertices
    std::vector<std::uint64_t> stabilizer_order;      // per orbit (of its representative)
    std::uint64_t automorphism_count = 0;

    /// orbit-stabilizer identity: |orbit| * |stab| == |Aut| for every orbit
    bool orbit_stabilizer_holds() const;
};

/// Exhaustive automorphism enumeration with refinement-color pruning.
/// Exact for networks up to `vertex_cap` vertices; throws size-cap-exceeded
/// beyond it (or if the group is too large to enumerate within the budget).
OrbitReport automorphism_orbits(const Network& g, std::uint32_t vertex_cap = 16,
                                std::uint64_t count_budget = 4'000'000);

/// All automorphisms as permutations (used by the exact MTP plumbing tests).
std::vector<std::vector<std::uint32_t>> all_automorphisms(const Network& g,
                                                          std::uint32_t vertex_cap = 16,
                                                          std::uint64_t count_budget = 4'000'000);

}  // namespace umrn
