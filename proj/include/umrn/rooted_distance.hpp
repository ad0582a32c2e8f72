#pragma once

#include <optional>

#include "umrn/network.hpp"
#include "umrn/rational.hpp"

namespace umrn {

/// Result of the local metric. `exact` is true when the first disagreement
/// radius was resolved inside both validity radii; otherwise `value` is an
/// upper bound on the distance and `alpha_lower` the certified lower bound
/// on alpha (distance = 1/(1+alpha)).
struct RootedDistanceResult {
    bool exact = true;
    Rational value;
    Rational alpha_lower;
};

/// Distance 1/(1+alpha) on rooted networks, alpha = sup of r such that the
/// floor(r)-balls admit a rooted isomorphism with all corresponding mark
/// distances strictly below 1/r. Exact marks use canonical keys; the mark
/// tolerance search (min over isomorphisms of the max mark distance) runs on
/// balls up to `tolerance_cap` vertices.
RootedDistanceResult rooted_distance(const RootedNetwork& a, const RootedNetwork& b,
                                     std::uint32_t tolerance_cap = 64);

/// Min over rooted isomorphisms of the maximum mark distance between
/// corresponding marks; unset if the rooted networks are not structurally
/// isomorphic. Exposed for tests.
std::optional<Rational> min_max_mark_distance(const RootedNetwork& a, const RootedNetwork& b);

}  // namespace umrn
