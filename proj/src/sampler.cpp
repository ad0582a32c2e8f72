#include "umrn/sampler.hpp"

#include <deque>
#include <map>

namespace umrn {

RootedNetwork WalkSpace::materialize_ball(std::uint32_t center, std::uint32_t r) {
    std::map<std::uint32_t, std::uint32_t> id;
    std::vector<std::uint32_t> verts;
    std::vector<std::uint32_t> dist;
    auto intern = [&](std::uint32_t v, std::uint32_t d) {
        auto it = id.find(v);
        if (it != id.end()) return it->second;
        std::uint32_t i = static_cast<std::uint32_t>(verts.size());
        id[v] = i;
        verts.push_back(v);
        dist.push_back(d);
        return i;
    };
    intern(center, 0);
    RootedNetwork out;
    out.root = 0;
    out.validity_radius = r;
    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        std::uint32_t i = queue.front();
        queue.pop_front();
        if (dist[i] >= r) continue;
        for (std::uint32_t w : neighbors(verts[i])) {
            if (id.find(w) == id.end()) {
                std::uint32_t j = intern(w, dist[i] + 1);
                queue.push_back(j);
            }
        }
    }
    out.net.vertex_marks.assign(verts.size(), Mark{});
    // induced edges; iterate each vertex's multiset once, add each edge from
    // its smaller internal id (loops from the vertex itself, halved)
    for (std::uint32_t i = 0; i < verts.size(); ++i) {
        std::uint32_t loops = 0;
        for (std::uint32_t w : neighbors(verts[i])) {
            auto it = id.find(w);
            if (it == id.end()) continue;
            std::uint32_t j = it->second;
            if (j == i) { ++loops; continue; }
            if (i < j) out.net.add_edge(i, j);
        }
        for (std::uint32_t l = 0; l < loops / 2; ++l) out.net.add_edge(i, i);
    }
    return out;
}

FiniteWalkSpace::FiniteWalkSpace(RootedNetwork g) : g_(std::move(g)) {
    nbrs_.resize(g_.net.vertex_count());
    for (const Edge& e : g_.net.edges) {
        nbrs_[e.u].push_back(e.v);
        nbrs_[e.v].push_back(e.u);
    }
    dist_ = bfs_distances(g_.net, g_.root);
}

const std::vector<std::uint32_t>& FiniteWalkSpace::neighbors(std::uint32_t v) {
    if (g_.truncated() && dist_[v] >= g_.validity_radius)
        throw Error("truncation-escape",
                    "walk reached the validity boundary at distance " +
                        std::to_string(dist_[v]));
    return nbrs_[v];
}

RootedNetwork FiniteWalkSpace::materialize_ball(std::uint32_t center, std::uint32_t r) {
    RootedNetwork recentred = g_;
    recentred.root = center;
    // validity seen from the new center
    if (g_.truncated()) {
        if (dist_[center] + r > g_.validity_radius)
            throw Error("truncation-escape", "ball around walk position exceeds validity");
        recentred.validity_radius = g_.validity_radius - dist_[center];
    }
    return ball(recentred, r);
}

std::unique_ptr<WalkSpace> RootedSampler::make_space(std::uint64_t seed,
                                                     std::uint64_t index) const {
    if (space) return space(seed, index);
    return std::make_unique<FiniteWalkSpace>(draw(seed, index));
}

RootedNetwork extract_ball(WalkSpace& space, std::uint32_t center, std::uint32_t r) {
    return space.materialize_ball(center, r);
}

}  // namespace umrn
