#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "umrn/network.hpp"
#include "umrn/rng.hpp"

namespace umrn {

/// On-demand neighborhood access for random walks. A finite draw can only be
/// walked inside its validity radius; tree samplers provide spaces that grow
/// deterministically as the walk explores, so a 10^4-step walk never needs a
/// materialized radius-10^4 ball.
class WalkSpace {
public:
    virtual ~WalkSpace() = default;
    virtual std::uint32_t root() const = 0;
    /// Neighbor multiset of v (repeats = multiplicity, a loop contributes v twice).
    virtual const std::vector<std::uint32_t>& neighbors(std::uint32_t v) = 0;
    /// Exact graph distance from the root (exact on trees and finite spaces).
    virtual std::uint32_t depth(std::uint32_t v) const = 0;
    /// Ball of radius r around `center`, relabeled and rooted at the center.
    /// Finite spaces return the marked induced subnetwork; lazy spaces return
    /// the unmarked adjacency structure.
    virtual RootedNetwork materialize_ball(std::uint32_t center, std::uint32_t r);
};

/// Walk space over a materialized truncation. Asking for the neighbors of a
/// vertex sitting on the validity boundary throws truncation-escape: its
/// neighborhood cannot be trusted, and reflecting would bias the law.
class FiniteWalkSpace : public WalkSpace {
public:
    explicit FiniteWalkSpace(RootedNetwork g);
    std::uint32_t root() const override { return g_.root; }
    const std::vector<std::uint32_t>& neighbors(std::uint32_t v) override;
    std::uint32_t depth(std::uint32_t v) const override { return dist_[v]; }
    RootedNetwork materialize_ball(std::uint32_t center, std::uint32_t r) override;
    const RootedNetwork& network() const { return g_; }

private:
    RootedNetwork g_;
    std::vector<std::vector<std::uint32_t>> nbrs_;
    std::vector<std::uint32_t> dist_;
};

/// A seeded generator of rooted networks representing a probability measure
/// on rooted-isomorphism classes, exact or truncated to truncation_radius.
/// draw(seed, index) is a pure function, bit-identical across runs.
struct RootedSampler {
    nlohmann::json descriptor;
    std::uint32_t truncation_radius = kUnboundedRadius;
    bool infinite_support = false;  // truncation of an a.s.-infinite measure
    std::optional<std::uint32_t> max_root_degree;
    std::function<RootedNetwork(std::uint64_t seed, std::uint64_t index)> draw;
    std::function<std::unique_ptr<WalkSpace>(std::uint64_t seed, std::uint64_t index)> space;

    bool truncated() const { return truncation_radius != kUnboundedRadius; }

    /// Walk space for draw (seed, index); wraps the materialized draw unless
    /// the sampler installed a lazily growing implementation.
    std::unique_ptr<WalkSpace> make_space(std::uint64_t seed, std::uint64_t index) const;
};

/// Materialize the ball of radius r around `center` by BFS through a walk
/// space (marks are not represented in walk spaces; the result is unmarked).
RootedNetwork extract_ball(WalkSpace& space, std::uint32_t center, std::uint32_t r);

}  // namespace umrn
