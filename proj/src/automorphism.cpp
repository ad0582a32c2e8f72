#include "umrn/automorphism.hpp"

#include <algorithm>
#include <map>

#include "umrn/canonical.hpp"

namespace umrn {

namespace {

// multiset of (mark here, mark there) over the edges joining u and v,
// viewed from u; loops store both orderings so the profile is symmetric
using PairProfile = std::vector<std::pair<Mark, Mark>>;

struct Enumerator {
    const Network& g;
    std::uint32_t n;
    std::uint64_t budget;
    std::vector<std::uint32_t> colors;
    std::map<std::pair<std::uint32_t, std::uint32_t>, PairProfile> profiles;
    std::vector<std::vector<std::uint32_t>> found;

    explicit Enumerator(const Network& net, std::uint64_t count_budget)
        : g(net), n(net.vertex_count()), budget(count_budget) {
        colors = refinement_colors(g, -1);
        for (const Edge& e : g.edges) {
            profile(e.u, e.v).emplace_back(e.mu, e.mv);
            if (e.u != e.v || e.mu != e.mv) profile(e.v, e.u).emplace_back(e.mv, e.mu);
            if (e.u == e.v && e.mu != e.mv) { /* both orientations already added */ }
        }
        for (auto& kv : profiles) std::sort(kv.second.begin(), kv.second.end());
    }

    PairProfile& profile(std::uint32_t u, std::uint32_t v) { return profiles[{u, v}]; }

    const PairProfile* profile_of(std::uint32_t u, std::uint32_t v) const {
        auto it = profiles.find({u, v});
        return it == profiles.end() ? nullptr : &it->second;
    }

    bool compatible(std::uint32_t a, std::uint32_t b,
                    const std::vector<std::int32_t>& image, std::uint32_t upto) const {
        if (colors[a] != colors[b]) return false;
        if (g.vertex_marks[a] != g.vertex_marks[b]) return false;
        const PairProfile* loop_a = profile_of(a, a);
        const PairProfile* loop_b = profile_of(b, b);
        if ((loop_a == nullptr) != (loop_b == nullptr)) return false;
        if (loop_a && *loop_a != *loop_b) return false;
        for (std::uint32_t c = 0; c < upto; ++c) {
            const PairProfile* pa = profile_of(a, c);
            const PairProfile* pb = profile_of(b, static_cast<std::uint32_t>(image[c]));
            if ((pa == nullptr) != (pb == nullptr)) return false;
            if (pa && *pa != *pb) return false;
        }
        return true;
    }

    void recurse(std::uint32_t k, std::vector<std::int32_t>& image,
                 std::vector<bool>& used) {
        if (k == n) {
            if (found.size() >= budget)
                throw Error("size-cap-exceeded", "automorphism group too large to enumerate");
            found.emplace_back(image.begin(), image.end());
            return;
        }
        for (std::uint32_t b = 0; b < n; ++b) {
            if (used[b]) continue;
            if (!compatible(k, b, image, k)) continue;
            image[k] = static_cast<std::int32_t>(b);
            used[b] = true;
            recurse(k + 1, image, used);
            used[b] = false;
            image[k] = -1;
        }
    }
};

}  // namespace

std::vector<std::vector<std::uint32_t>> all_automorphisms(const Network& g,
                                                          std::uint32_t vertex_cap,
                                                          std::uint64_t count_budget) {
    if (g.vertex_count() > vertex_cap)
        throw Error("size-cap-exceeded",
                    "network has " + std::to_string(g.vertex_count()) +
                        " vertices, cap is " + std::to_string(vertex_cap));
    Enumerator e(g, count_budget);
    std::vector<std::int32_t> image(g.vertex_count(), -1);
    std::vector<bool> used(g.vertex_count(), false);
    e.recurse(0, image, used);
    std::vector<std::vector<std::uint32_t>> out(e.found.begin(), e.found.end());
    return out;
}

bool OrbitReport::orbit_stabilizer_holds() const {
    for (std::size_t i = 0; i < orbits.size(); ++i)
        if (orbits[i].size() * stabilizer_order[i] != automorphism_count) return false;
    return true;
}

OrbitReport automorphism_orbits(const Network& g, std::uint32_t vertex_cap,
                                std::uint64_t count_budget) {
    auto autos = all_automorphisms(g, vertex_cap, count_budget);
    const std::uint32_t n = g.vertex_count();

    OrbitReport rep;
    rep.automorphism_count = autos.size();

    std::vector<bool> seen(n, false);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (seen[v]) continue;
        std::vector<std::uint32_t> orbit;
        std::uint64_t stab = 0;
        std::vector<bool> in_orbit(n, false);
        for (const auto& a : autos) {
            if (!in_orbit[a[v]]) {
                in_orbit[a[v]] = true;
                orbit.push_back(a[v]);
            }
            if (a[v] == v) ++stab;
        }
        std::sort(orbit.begin(), orbit.end());
        for (std::uint32_t x : orbit) seen[x] = true;
        rep.orbits.push_back(std::move(orbit));
        rep.stabilizer_order.push_back(stab);
    }
    return rep;
}

}  // namespace umrn
