#include "umrn/mtp.hpp"

#include <algorithm>
#include <limits>

#include "umrn/automorphism.hpp"
#include "umrn/exec.hpp"
#include "umrn/stats.hpp"

namespace umrn {
namespace mtp {

namespace {

constexpr std::uint64_t kPermSalt = 0x7065726d53616cULL;

/// Canonical key of the pair (x, y) seen to radius r: the induced network on
/// B(x,r) u B(y,r), rooted at x, with y flagged through an extra leading
/// mark element. Any relabeling of g yields the same key.
std::string double_rooted_key(const RootedNetwork& g, std::uint32_t x, std::uint32_t y,
                              std::uint32_t r) {
    auto dx = bfs_distances(g.net, x);
    auto dy = bfs_distances(g.net, y);
    std::vector<std::uint32_t> keep, newid(g.net.vertex_count(), kUnboundedRadius);
    for (std::uint32_t v = 0; v < g.net.vertex_count(); ++v)
        if (dx[v] <= r || dy[v] <= r) {
            newid[v] = static_cast<std::uint32_t>(keep.size());
            keep.push_back(v);
        }
    RootedNetwork pair;
    for (std::uint32_t v : keep) {
        Mark m;
        m.push_back(v == y ? (v == x ? 3 : 2) : (v == x ? 1 : 0));
        const Mark& base = g.net.vertex_marks[v];
        m.insert(m.end(), base.begin(), base.end());
        pair.net.add_vertex(std::move(m));
    }
    for (const Edge& e : g.net.edges)
        if (newid[e.u] != kUnboundedRadius && newid[e.v] != kUnboundedRadius)
            pair.net.add_edge(newid[e.u], newid[e.v], e.mu, e.mv);
    pair.root = newid[x];
    return canonical_form(pair).key.bytes;
}

std::uint32_t pair_distance(const Network& g, std::uint32_t x, std::uint32_t y) {
    return bfs_distances(g, x)[y];
}

}  // namespace

MassTransportFn key_lookup_mtf(std::uint32_t radius, std::uint64_t table_seed) {
    MassTransportFn f;
    f.radius = radius;
    f.evaluate = [radius, table_seed](const RootedNetwork& g, std::uint32_t x,
                                      std::uint32_t y) {
        if (pair_distance(g.net, x, y) > radius) return Rational(0);
        std::string key = double_rooted_key(g, x, y, radius);
        std::uint64_t h = table_seed;
        for (unsigned char c : key) h = Rng::mix(h ^ c);
        return Rational(static_cast<std::int64_t>(h % 8), 8);
    };
    return f;
}

MassTransportFn adjacency_mtf() {
    MassTransportFn f;
    f.radius = 1;
    f.evaluate = [](const RootedNetwork& g, std::uint32_t x, std::uint32_t y) {
        if (x == y) return Rational(0);
        for (const Edge& e : g.net.edges)
            if ((e.u == x && e.v == y) || (e.u == y && e.v == x)) return Rational(1);
        return Rational(0);
    };
    return f;
}

MassTransportFn degree_compare_mtf() {
    MassTransportFn f;
    f.radius = 1;
    f.evaluate = [](const RootedNetwork& g, std::uint32_t x, std::uint32_t y) {
        if (x == y) return Rational(0);
        bool adjacent = false;
        for (const Edge& e : g.net.edges)
            if ((e.u == x && e.v == y) || (e.u == y && e.v == x)) { adjacent = true; break; }
        if (!adjacent) return Rational(0);
        auto deg = degrees(g.net);
        return deg[y] < deg[x] ? Rational(1) : Rational(0);
    };
    return f;
}

std::pair<Rational, Rational> verify_mtp_finite(const Network& g, const MassTransportFn& f) {
    const std::uint32_t n = g.vertex_count();
    if (n == 0) throw Error("empty-network", "verify_mtp_finite on empty network");
    RootedNetwork whole;
    whole.net = g;
    whole.root = 0;
    Rational sent(0), received(0);
    for (std::uint32_t o = 0; o < n; ++o)
        for (std::uint32_t x = 0; x < n; ++x) {
            sent += f.evaluate(whole, o, x);
            received += f.evaluate(whole, x, o);
        }
    Rational nn(static_cast<std::int64_t>(n));
    return {sent / nn, received / nn};
}

nlohmann::json MtpTestReport::to_json() const {
    return {{"sent_mean", sent_mean},
            {"received_mean", received_mean},
            {"mean_diff", mean_diff},
            {"p_value", p_value},
            {"samples", samples}};
}

MtpTestReport mtp_monte_carlo_test(const RootedSampler& s, const MassTransportFn& f,
                                   std::uint64_t n, std::uint64_t seed,
                                   std::uint32_t permutations) {
    if (s.truncated() && 2 * f.radius > s.truncation_radius)
        throw Error("truncation-too-small",
                    "mass function radius " + std::to_string(f.radius) +
                        " needs truncation >= " + std::to_string(2 * f.radius));
    std::vector<double> sent(n), received(n);
    parallel_for(n, [&](std::uint64_t i) {
        RootedNetwork g = s.draw(seed, i);
        auto dist = bfs_distances(g.net, g.root);
        Rational snt(0), rcv(0);
        for (std::uint32_t x = 0; x < g.net.vertex_count(); ++x) {
            if (dist[x] > f.radius) continue;
            snt += f.evaluate(g, g.root, x);
            rcv += f.evaluate(g, x, g.root);
        }
        sent[i] = snt.to_double();
        received[i] = rcv.to_double();
    });
    std::vector<double> diffs(n);
    for (std::uint64_t i = 0; i < n; ++i) diffs[i] = sent[i] - received[i];

    MtpTestReport r;
    r.samples = n;
    r.sent_mean = mean_ci(sent).mean;
    r.received_mean = mean_ci(received).mean;
    r.mean_diff = r.sent_mean - r.received_mean;
    r.p_value = sign_flip_pvalue(diffs, permutations, Rng::stream(seed, 0, kPermSalt));
    return r;
}

StabRootReport stab_root_check(const Network& g) {
    OrbitReport orbits = automorphism_orbits(g);
    StabRootReport rep;
    rep.automorphism_count = orbits.automorphism_count;
    Rational c(0);
    for (std::size_t i = 0; i < orbits.orbits.size(); ++i)
        c += Rational(1, static_cast<std::int64_t>(orbits.stabilizer_order[i]));
    rep.holds = true;
    for (std::size_t i = 0; i < orbits.orbits.size(); ++i) {
        Rational mass(static_cast<std::int64_t>(orbits.orbits[i].size()),
                      static_cast<std::int64_t>(g.vertex_count()));
        Rational pred = (Rational(1) / c) *
                        Rational(1, static_cast<std::int64_t>(orbits.stabilizer_order[i]));
        rep.orbit_mass.push_back(mass);
        rep.predicted_mass.push_back(pred);
        if (mass != pred) rep.holds = false;
    }
    return rep;
}

EmpiricalBallDistribution ball_distribution(const RootedSampler& s, std::uint32_t r,
                                            std::uint64_t n, std::uint64_t seed) {
    if (s.truncated() && r > s.truncation_radius)
        throw Error("truncation-too-small", "ball radius exceeds truncation radius");
    std::vector<std::string> keys(n);
    parallel_for(n, [&](std::uint64_t i) {
        RootedNetwork g = s.draw(seed, i);
        keys[i] = canonical_form(ball(g, r)).key.bytes;
    });
    EmpiricalBallDistribution d;
    d.radius = r;
    d.total = n;
    for (auto& k : keys) ++d.counts[k];
    return d;
}

double tv_distance(const EmpiricalBallDistribution& a, const EmpiricalBallDistribution& b) {
    if (a.radius != b.radius)
        throw Error("radius-mismatch", "ball distributions have different radii");
    if (a.total == 0 || b.total == 0)
        throw Error("empty-distribution", "tv_distance needs nonempty histograms");
    double tv = 0.0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        double pa = 0.0, pb = 0.0;
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            pa = static_cast<double>(ia->second) / static_cast<double>(a.total);
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            pb = static_cast<double>(ib->second) / static_cast<double>(b.total);
            ++ib;
        } else {
            pa = static_cast<double>(ia->second) / static_cast<double>(a.total);
            pb = static_cast<double>(ib->second) / static_cast<double>(b.total);
            ++ia;
            ++ib;
        }
        tv += std::fabs(pa - pb);
    }
    return tv / 2.0;
}

IsoperimetryReport isoperimetry_report(
    const Network& g, const std::function<bool(const Mark&, const Mark&)>& open_marks) {
    const std::uint32_t n = g.vertex_count();
    if (n == 0) throw Error("empty-network", "isoperimetry on empty network");
    auto inc = make_incidence(g);

    // n(x): closed half-edges at x (a closed loop contributes 2)
    std::vector<std::int64_t> closed_at(n, 0);
    Network open_sub;
    open_sub.vertex_marks = g.vertex_marks;
    for (const Edge& e : g.edges) {
        if (open_marks(e.mu, e.mv)) {
            open_sub.add_edge(e.u, e.v, e.mu, e.mv);
        } else {
            closed_at[e.u] += 1;
            closed_at[e.v] += 1;
        }
    }
    auto deg = degrees(g);

    IsoperimetryReport rep;
    Rational cluster_mean(0), root_mean(0), alpha(0), expdeg(0);
    // open components via BFS
    std::vector<std::int32_t> comp(n, -1);
    std::vector<std::vector<std::uint32_t>> comps;
    auto open_inc = make_incidence(open_sub);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (comp[v] >= 0) continue;
        std::vector<std::uint32_t> stack{v}, members;
        comp[v] = static_cast<std::int32_t>(comps.size());
        while (!stack.empty()) {
            std::uint32_t x = stack.back();
            stack.pop_back();
            members.push_back(x);
            for (const HalfEdge& h : open_inc[x])
                if (comp[h.other] < 0) {
                    comp[h.other] = comp[v];
                    stack.push_back(h.other);
                }
        }
        comps.push_back(std::move(members));
    }
    std::vector<Rational> comp_boundary_ratio(comps.size(), Rational(0));
    for (std::size_t c = 0; c < comps.size(); ++c) {
        std::int64_t total = 0;
        for (std::uint32_t x : comps[c]) total += closed_at[x];
        comp_boundary_ratio[c] =
            Rational(total, static_cast<std::int64_t>(comps[c].size()));
    }
    for (std::uint32_t v = 0; v < n; ++v) {
        cluster_mean += comp_boundary_ratio[static_cast<std::size_t>(comp[v])];
        root_mean += Rational(closed_at[v]);
        alpha += Rational(static_cast<std::int64_t>(deg[v]) - closed_at[v]);
        expdeg += Rational(static_cast<std::int64_t>(deg[v]));
    }
    Rational nn(static_cast<std::int64_t>(n));
    rep.boundary_cluster_mean = cluster_mean / nn;
    rep.boundary_root_mean = root_mean / nn;
    rep.alpha_term = alpha / nn;
    rep.expected_degree = expdeg / nn;
    rep.lemma_holds = rep.boundary_cluster_mean == rep.boundary_root_mean;
    rep.identity_holds = rep.boundary_root_mean + rep.alpha_term == rep.expected_degree;
    return rep;
}

IotaUpperBound iota_upper_bound(const Network& g, const std::vector<double>& threshold_grid,
                                std::uint64_t seed) {
    // labels via the standard coupling, embedded as half-edge marks so the
    // isoperimetry report sees an ordinary mark predicate
    Rng rng = Rng::stream(seed, 0, 0x696f7461ULL);
    Network marked;
    marked.vertex_marks = g.vertex_marks;
    for (const Edge& e : g.edges) {
        Mark m{static_cast<std::int64_t>(rng.next() >> 1)};
        marked.add_edge(e.u, e.v, m, m);
    }
    IotaUpperBound out;
    out.grid = threshold_grid;
    out.value = std::numeric_limits<double>::infinity();
    const double scale = 9223372036854775808.0;  // 2^63
    for (double p : threshold_grid) {
        std::int64_t cut = static_cast<std::int64_t>(p * scale);
        auto rep = isoperimetry_report(
            marked, [cut](const Mark& mu, const Mark&) { return mu.at(0) < cut; });
        // keep the finite-component contract: reject thresholds whose open
        // subgraph swallows more than half the network in one cluster
        Network open;
        open.vertex_marks = marked.vertex_marks;
        for (const Edge& e : marked.edges)
            if (e.mu.at(0) < cut) open.add_edge(e.u, e.v);
        auto dist = bfs_distances(open, 0);
        std::size_t comp0 = 0;
        for (auto d : dist)
            if (d != kUnboundedRadius) ++comp0;
        bool giant = comp0 > open.vertex_count() / 2 && open.vertex_count() > 2;
        double mean = rep.boundary_root_mean.to_double();
        out.boundary_means.push_back(giant ? -1.0 : mean);
        if (!giant && mean < out.value) {
            out.value = mean;
            out.best_threshold = p;
        }
    }
    return out;
}

nlohmann::json ExpdegReport::to_json() const {
    return {{"mean", mean},
            {"se", se},
            {"samples", samples},
            {"applicable", applicable},
            {"violates_floor", violates_floor}};
}

ExpdegReport expdeg_floor_check(const RootedSampler& s, std::uint64_t n, std::uint64_t seed) {
    std::vector<double> deg(n);
    parallel_for(n, [&](std::uint64_t i) {
        RootedNetwork g = s.draw(seed, i);
        auto d = degrees(g.net);
        deg[i] = static_cast<double>(d[g.root]);
    });
    auto ci = mean_ci(deg);
    ExpdegReport r;
    r.mean = ci.mean;
    r.se = ci.se;
    r.samples = n;
    r.applicable = s.infinite_support;
    r.violates_floor = r.applicable && ci.mean < 2.0 - 3.0 * ci.se;
    return r;
}

}  // namespace mtp
}  // namespace umrn
