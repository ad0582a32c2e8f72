#include "umrn/rooted_distance.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "umrn/canonical.hpp"

namespace umrn {

namespace {

using Bundle = std::vector<std::pair<Mark, Mark>>;  // parallel edges (mark here, mark there)

std::map<std::pair<std::uint32_t, std::uint32_t>, Bundle> bundles_of(const Network& g) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, Bundle> out;
    for (const Edge& e : g.edges) {
        out[{e.u, e.v}].emplace_back(e.mu, e.mv);
        if (e.u != e.v) out[{e.v, e.u}].emplace_back(e.mv, e.mu);
    }
    return out;
}

// perfect matching between two equal-size bundles with pairwise mark
// distances <= theta; bundles are tiny, so Kuhn's algorithm is plenty
bool bundle_matches(const Bundle& x, const Bundle& y, const Rational& theta, bool loop) {
    if (x.size() != y.size()) return false;
    const std::size_t n = x.size();
    auto ok = [&](std::size_t i, std::size_t j) {
        bool direct = mark_distance(x[i].first, y[j].first) <= theta &&
                      mark_distance(x[i].second, y[j].second) <= theta;
        if (direct || !loop) return direct;
        // a loop may map onto a loop with its two ends swapped
        return mark_distance(x[i].first, y[j].second) <= theta &&
               mark_distance(x[i].second, y[j].first) <= theta;
    };
    std::vector<std::int32_t> match(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> visited(n, false);
        std::function<bool(std::size_t)> try_kuhn = [&](std::size_t a) -> bool {
            for (std::size_t j = 0; j < n; ++j) {
                if (visited[j] || !ok(a, j)) continue;
                visited[j] = true;
                if (match[j] < 0 || try_kuhn(static_cast<std::size_t>(match[j]))) {
                    match[j] = static_cast<std::int32_t>(a);
                    return true;
                }
            }
            return false;
        };
        if (!try_kuhn(i)) return false;
    }
    return true;
}

struct TolSearch {
    const Network& a;
    const Network& b;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Bundle> ba, bb;
    std::vector<std::uint32_t> order;  // BFS order of a from its root
    Rational theta;

    bool feasible(std::uint32_t ra, std::uint32_t rb) {
        std::vector<std::int32_t> image(a.vertex_count(), -1);
        std::vector<bool> used(b.vertex_count(), false);
        image[ra] = static_cast<std::int32_t>(rb);
        if (mark_distance(a.vertex_marks[ra], b.vertex_marks[rb]) > theta) return false;
        if (!pair_ok(ra, ra, rb, rb)) return false;
        used[rb] = true;
        return extend(1, image, used);
    }

    bool pair_ok(std::uint32_t u, std::uint32_t v, std::uint32_t pu, std::uint32_t pv) {
        auto ia = ba.find({u, v});
        auto ib = bb.find({pu, pv});
        const bool ha = ia != ba.end(), hb = ib != bb.end();
        if (ha != hb) return false;
        if (!ha) return true;
        return bundle_matches(ia->second, ib->second, theta, u == v);
    }

    bool extend(std::size_t k, std::vector<std::int32_t>& image, std::vector<bool>& used) {
        if (k == order.size()) return true;
        std::uint32_t va = order[k];
        for (std::uint32_t vb = 0; vb < b.vertex_count(); ++vb) {
            if (used[vb]) continue;
            if (mark_distance(a.vertex_marks[va], b.vertex_marks[vb]) > theta) continue;
            if (!pair_ok(va, va, vb, vb)) continue;
            bool good = true;
            for (std::uint32_t c = 0; c < a.vertex_count() && good; ++c) {
                if (image[c] < 0 || c == va) continue;
                good = pair_ok(va, c, vb, static_cast<std::uint32_t>(image[c]));
            }
            if (!good) continue;
            image[va] = static_cast<std::int32_t>(vb);
            used[vb] = true;
            if (extend(k + 1, image, used)) return true;
            image[va] = -1;
            used[vb] = false;
        }
        return false;
    }
};

std::optional<Rational> tol_iso(const RootedNetwork& x, const RootedNetwork& y) {
    if (x.net.vertex_count() != y.net.vertex_count() ||
        x.net.edges.size() != y.net.edges.size())
        return std::nullopt;

    TolSearch s{x.net, y.net, bundles_of(x.net), bundles_of(y.net), {}, Rational(0)};
    auto dist = bfs_distances(x.net, x.root);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> by_depth;
    for (std::uint32_t v = 0; v < x.net.vertex_count(); ++v) by_depth.push_back({dist[v], v});
    std::sort(by_depth.begin(), by_depth.end());
    for (auto& p : by_depth) s.order.push_back(p.second);

    // candidate thresholds: every pairwise mark distance that can occur
    std::set<Rational> cands{Rational(0)};
    for (const Mark& ma : x.net.vertex_marks)
        for (const Mark& mb : y.net.vertex_marks) cands.insert(mark_distance(ma, mb));
    for (const Edge& ea : x.net.edges)
        for (const Edge& eb : y.net.edges) {
            cands.insert(mark_distance(ea.mu, eb.mu));
            cands.insert(mark_distance(ea.mu, eb.mv));
            cands.insert(mark_distance(ea.mv, eb.mu));
            cands.insert(mark_distance(ea.mv, eb.mv));
        }

    for (const Rational& theta : cands) {
        s.theta = theta;
        if (s.feasible(x.root, y.root)) return theta;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Rational> min_max_mark_distance(const RootedNetwork& a, const RootedNetwork& b) {
    return tol_iso(a, b);
}

RootedDistanceResult rooted_distance(const RootedNetwork& a, const RootedNetwork& b,
                                     std::uint32_t tolerance_cap) {
    const std::uint32_t ka = a.validity_radius;
    const std::uint32_t kb = b.validity_radius;
    const std::uint32_t cap = std::min(ka, kb);  // kUnboundedRadius when both exact

    Rational alpha(0);

    for (std::uint32_t j = 0;; ++j) {
        if (j > cap) break;  // truncation ran out before disagreement

        RootedNetwork balla = ball(a, j);
        RootedNetwork ballb = ball(b, j);

        std::optional<Rational> m;
        if (canonical_key(balla) == canonical_key(ballb)) {
            m = Rational(0);
        } else if (balla.net.vertex_count() <= tolerance_cap &&
                   ballb.net.vertex_count() <= tolerance_cap) {
            m = tol_iso(balla, ballb);
        } else {
            m = std::nullopt;  // keys differ and too large for tolerance search
        }

        if (!m.has_value()) {
            // no isomorphism at radius j: alpha resolved
            RootedDistanceResult r;
            r.exact = true;
            r.alpha_lower = alpha;
            r.value = Rational(1) / (Rational(1) + alpha);
            return r;
        }
        if (*m == Rational(0)) {
            alpha = Rational(static_cast<std::int64_t>(j) + 1);
            // identical untruncated networks stabilize once the ball is everything
            if (ka == kUnboundedRadius && kb == kUnboundedRadius &&
                balla.net.vertex_count() == a.net.vertex_count() &&
                ballb.net.vertex_count() == b.net.vertex_count())
                return RootedDistanceResult{true, Rational(0), alpha};
            continue;
        }
        // marks differ by *m at radius j: window [j, j+1) valid for r < 1/m
        Rational inv = Rational(1) / *m;
        if (inv > Rational(static_cast<std::int64_t>(j))) {
            Rational c = std::min(inv, Rational(static_cast<std::int64_t>(j) + 1));
            alpha = std::max(alpha, c);
        }
        if (inv <= Rational(static_cast<std::int64_t>(j) + 1)) {
            // m is nondecreasing in j, later windows cannot contribute
            RootedDistanceResult r;
            r.exact = true;
            r.alpha_lower = alpha;
            r.value = Rational(1) / (Rational(1) + alpha);
            return r;
        }
        // marks within tolerance for the whole window; keep growing
    }

    // agreed u to the common validity radius: unresolved
    RootedDistanceResult r;
    r.exact = false;
    r.alpha_lower = alpha;
    r.value = Rational(1) / (Rational(1) + alpha);
    return r;
}

}  // namespace umrn
