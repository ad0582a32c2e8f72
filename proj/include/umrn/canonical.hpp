#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "umrn/network.hpp"

namespace umrn {

/// Identifier of a rooted-isomorphism class of a finite rooted network with
/// exactly equal marks. Two networks have equal keys iff they are
/// rooted-isomorphic; the bytes are a complete order-preserving encoding of
/// the canonically relabeled network, so the key doubles as a total order.
struct CanonicalKey {
    std::string bytes;

    std::string hex() const;
    friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) {
        return a.bytes == b.bytes;
    }
    friend bool operator!=(const CanonicalKey& a, const CanonicalKey& b) { return !(a == b); }
    friend bool operator<(const CanonicalKey& a, const CanonicalKey& b) {
        return a.bytes < b.bytes;
    }
};

struct CanonicalForm {
    CanonicalKey key;
    RootedNetwork relabeled;  // vertices {0..n-1}, root 0, canonical edge order
};

/// Canonical form of a finite connected rooted network. Deterministic,
/// invariant under relabeling; the key separates rooted-isomorphism classes
/// exactly. The search is iterated mark/degree refinement plus backtracking
/// over refinement-equivalent orderings seeded at the root, with orbit
/// pruning by the automorphisms discovered along the way.
CanonicalForm canonical_form(const RootedNetwork& g, std::size_t node_budget = 50'000'000);

CanonicalKey canonical_key(const RootedNetwork& g);

/// Stable equitable-refinement colors with the root individualized.
/// Color ids are isomorphism-invariant (assigned by sorted signature order).
std::vector<std::uint32_t> refinement_colors(const Network& g, std::int32_t rooted_at = -1);

}  // namespace umrn
