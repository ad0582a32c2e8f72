#include "umrn/gen.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <sstream>

namespace umrn {
namespace gen {

namespace {

constexpr std::uint64_t kDrawSalt = 0x6472617753616c74ULL;
constexpr std::uint64_t kRootSalt = 0x726f6f7453616c74ULL;
constexpr std::uint32_t kDrawVertexCap = 1u << 22;

/// Exact discrete sampler over rational weights indexed 0..k.
struct RationalTable {
    std::vector<std::uint64_t> cum;  // cumulative numerators over common denominator
    std::uint64_t total = 0;

    static RationalTable from(const std::vector<Rational>& w) {
        std::int64_t den = 1;
        for (const Rational& r : w) {
            if (r.num() < 0) throw Error("invalid-distribution", "negative weight");
            __int128 l = (__int128)den / std::gcd(den, r.den()) * r.den();
            if (l > INT64_MAX) throw Error("invalid-distribution", "denominator overflow");
            den = static_cast<std::int64_t>(l);
        }
        RationalTable t;
        std::uint64_t acc = 0;
        for (const Rational& r : w) {
            acc += static_cast<std::uint64_t>(r.num() * (den / r.den()));
            t.cum.push_back(acc);
        }
        t.total = acc;
        if (t.total == 0) throw Error("invalid-distribution", "all weights zero");
        return t;
    }

    std::uint32_t sample(Rng& rng) const {
        std::uint64_t x = rng.below(total);
        return static_cast<std::uint32_t>(
            std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
    }
};

}  // namespace

void OffspringDistribution::validate() const {
    if (p.empty()) throw Error("invalid-distribution", "empty offspring law");
    Rational sum(0);
    for (const Rational& r : p) {
        if (r < Rational(0)) throw Error("invalid-distribution", "negative probability");
        sum += r;
    }
    if (sum != Rational(1)) throw Error("invalid-distribution", "probabilities sum to " + sum.str());
}

std::uint32_t OffspringDistribution::max_support() const {
    for (std::size_t k = p.size(); k > 0; --k)
        if (p[k - 1] != Rational(0)) return static_cast<std::uint32_t>(k - 1);
    return 0;
}

Rational OffspringDistribution::ugw_expected_degree() const {
    Rational c(0);
    for (std::size_t k = 0; k < p.size(); ++k)
        c += p[k] / Rational(static_cast<std::int64_t>(k) + 1);
    return Rational(1) / c;
}

std::uint32_t OffspringDistribution::sample(Rng& rng) const {
    return RationalTable::from(p).sample(rng);
}

OffspringDistribution OffspringDistribution::parse(const std::string& text) {
    OffspringDistribution d;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw Error("invalid-distribution", "expected k:prob entries, got '" + item + "'");
        std::size_t k = std::stoul(item.substr(0, colon));
        Rational v = Rational::parse(item.substr(colon + 1));
        if (d.p.size() <= k) d.p.resize(k + 1, Rational(0));
        d.p[k] = v;
    }
    d.validate();
    return d;
}

nlohmann::json OffspringDistribution::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != Rational(0)) j[std::to_string(k)] = p[k].str();
    return j;
}

OffspringDistribution delta(std::uint32_t k) {
    OffspringDistribution d;
    d.p.assign(k + 1, Rational(0));
    d.p[k] = Rational(1);
    return d;
}

// ---------------------------------------------------------------------------
// fixed finite networks

RootedSampler uniform_root(const Network& g) {
    if (g.vertex_count() == 0) throw Error("empty-network", "uniform_root of empty network");
    auto shared = std::make_shared<Network>(g);
    RootedSampler s;
    s.descriptor = {{"kind", "uniform-root"},
                    {"vertices", g.vertex_count()},
                    {"edges", g.edges.size()}};
    s.truncation_radius = kUnboundedRadius;
    auto degs = degrees(g);
    s.max_root_degree = *std::max_element(degs.begin(), degs.end());
    s.draw = [shared](std::uint64_t seed, std::uint64_t index) {
        Rng rng = Rng::stream(seed, index, kRootSalt);
        std::uint32_t v = static_cast<std::uint32_t>(rng.below(shared->vertex_count()));
        return component_of(*shared, v);
    };
    return s;
}

RootedSampler biased_root_sampler(const Network& g, const std::vector<std::uint64_t>& weights) {
    if (weights.size() != g.vertex_count())
        throw Error("invalid-weights", "weight count must match vertex count");
    std::uint64_t total = std::accumulate(weights.begin(), weights.end(), std::uint64_t(0));
    if (total == 0) throw Error("all-zero-weights", "root weights are all zero");
    auto shared = std::make_shared<Network>(g);
    auto w = std::make_shared<std::vector<std::uint64_t>>(weights);
    RootedSampler s;
    s.descriptor = {{"kind", "biased-root"}, {"vertices", g.vertex_count()}};
    auto degs = degrees(g);
    s.max_root_degree = *std::max_element(degs.begin(), degs.end());
    s.draw = [shared, w, total](std::uint64_t seed, std::uint64_t index) {
        Rng rng = Rng::stream(seed, index, kRootSalt);
        std::uint64_t x = rng.below(total);
        std::uint32_t v = 0;
        std::uint64_t acc = 0;
        for (; v < w->size(); ++v) {
            acc += (*w)[v];
            if (x < acc) break;
        }
        return component_of(*shared, v);
    };
    return s;
}

// ---------------------------------------------------------------------------
// Galton-Watson trees

namespace {

/// Lazily grown rooted tree: the root gets `root_children` children, every
/// other vertex `offspring` children plus its parent.
class GwTreeSpace : public WalkSpace {
public:
    GwTreeSpace(RationalTable root_children, RationalTable offspring, Rng rng)
        : root_children_(std::move(root_children)), offspring_(std::move(offspring)),
          rng_(rng) {
        parent_.push_back(kUnboundedRadius);
        depth_.push_back(0);
        expanded_.push_back(false);
        nbrs_.emplace_back();
    }

    std::uint32_t root() const override { return 0; }

    const std::vector<std::uint32_t>& neighbors(std::uint32_t v) override {
        expand(v);
        return nbrs_[v];
    }

    std::uint32_t depth(std::uint32_t v) const override { return depth_[v]; }

private:
    void expand(std::uint32_t v) {
        if (expanded_[v]) return;
        expanded_[v] = true;
        std::uint32_t c = v == 0 ? root_children_.sample(rng_) : offspring_.sample(rng_);
        if (parent_[v] != kUnboundedRadius) nbrs_[v].push_back(parent_[v]);
        for (std::uint32_t i = 0; i < c; ++i) {
            std::uint32_t child = static_cast<std::uint32_t>(parent_.size());
            if (child >= kDrawVertexCap)
                throw Error("draw-too-large", "tree growth exceeded the vertex cap");
            parent_.push_back(v);
            depth_.push_back(depth_[v] + 1);
            expanded_.push_back(false);
            nbrs_.emplace_back();
            nbrs_[v].push_back(child);
        }
    }

    RationalTable root_children_, offspring_;
    Rng rng_;
    std::vector<std::uint32_t> parent_, depth_;
    std::vector<bool> expanded_;
    std::vector<std::vector<std::uint32_t>> nbrs_;
};

RootedSampler gw_sampler(nlohmann::json descriptor, const OffspringDistribution& p,
                         std::vector<Rational> root_count_weights, std::uint32_t R) {
    p.validate();
    RationalTable root_tab = RationalTable::from(root_count_weights);
    RationalTable off_tab = RationalTable::from(p.p);
    RootedSampler s;
    s.descriptor = std::move(descriptor);
    s.truncation_radius = R;
    s.max_root_degree = static_cast<std::uint32_t>(root_count_weights.size() - 1);
    s.space = [root_tab, off_tab](std::uint64_t seed, std::uint64_t index) {
        return std::make_unique<GwTreeSpace>(root_tab, off_tab,
                                             Rng::stream(seed, index, kDrawSalt));
    };
    std::uint32_t radius = R;
    s.draw = [root_tab, off_tab, radius](std::uint64_t seed, std::uint64_t index) {
        GwTreeSpace space(root_tab, off_tab, Rng::stream(seed, index, kDrawSalt));
        return space.materialize_ball(0, radius);
    };
    return s;
}

}  // namespace

RootedSampler agw_sampler(const OffspringDistribution& p, std::uint32_t R) {
    if (R < 1) throw Error("invalid-radius", "agw radius must be >= 1");
    // root degree = 1 + offspring of the first tree's root
    std::vector<Rational> root_w(p.p.size() + 1, Rational(0));
    for (std::size_t k = 0; k < p.p.size(); ++k) root_w[k + 1] = p.p[k];
    auto s = gw_sampler({{"kind", "agw"}, {"p", p.to_json()}, {"radius", R}}, p, root_w, R);
    s.infinite_support = p.max_support() >= 1 && p.p[0] == Rational(0);
    return s;
}

RootedSampler ugw_sampler(const OffspringDistribution& p, std::uint32_t R) {
    if (R < 1) throw Error("invalid-radius", "ugw radius must be >= 1");
    if (p.p.empty()) throw Error("unbounded-support", "ugw needs finite support");
    // bias the root degree by its reciprocal: weight p_k/(k+1) on degree k+1
    std::vector<Rational> root_w(p.p.size() + 1, Rational(0));
    for (std::size_t k = 0; k < p.p.size(); ++k)
        root_w[k + 1] = p.p[k] / Rational(static_cast<std::int64_t>(k) + 1);
    auto s = gw_sampler({{"kind", "ugw"}, {"p", p.to_json()}, {"radius", R}}, p, root_w, R);
    s.infinite_support = p.max_support() >= 1 && p.p[0] == Rational(0);
    return s;
}

RootedSampler line_sampler(std::uint32_t R) {
    auto s = agw_sampler(delta(1), R);
    s.descriptor = {{"kind", "line"}, {"radius", R}};
    s.infinite_support = true;
    return s;
}

// ---------------------------------------------------------------------------
// configuration model

Network config_model(std::uint32_t n, const OffspringDistribution& p, std::uint64_t seed) {
    if (n < 2) throw Error("invalid-size", "config model needs n >= 2");
    p.validate();
    // r_0 = 0, r_k = p_{k-1} / (k c) with c = sum p_j/(j+1)
    Rational c(0);
    for (std::size_t j = 0; j < p.p.size(); ++j)
        c += p.p[j] / Rational(static_cast<std::int64_t>(j) + 1);
    std::vector<Rational> r(p.p.size() + 1, Rational(0));
    for (std::size_t k = 1; k <= p.p.size(); ++k) {
        r[k] = p.p[k - 1] / (Rational(static_cast<std::int64_t>(k)) * c);
        if (r[k] < Rational(0)) throw Error("invalid-r-distribution", "negative r_k");
    }
    RationalTable tab = RationalTable::from(r);

    Rng rng = Rng::stream(seed, 0, kDrawSalt);
    Network g;
    std::vector<std::uint32_t> stubs;
    for (std::uint32_t v = 0; v < n; ++v) {
        g.add_vertex();
        std::uint32_t balls = tab.sample(rng);
        for (std::uint32_t b = 0; b < balls; ++b) stubs.push_back(v);
    }
    rng.shuffle(stubs.data(), stubs.size());
    // odd leftover ball is ignored
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) g.add_edge(stubs[i], stubs[i + 1]);
    return g;
}

RootedSampler config_model_sampler(std::uint32_t n, const OffspringDistribution& p,
                                   std::uint64_t draws_per_graph,
                                   std::uint32_t ball_radius) {
    p.validate();
    struct Prepared {
        Network g;
        std::vector<std::vector<HalfEdge>> inc;
    };
    struct Cache {
        std::mutex mu;
        std::vector<std::pair<std::uint64_t, std::shared_ptr<const Prepared>>> entries;
    };
    auto cache = std::make_shared<Cache>();
    auto pp = std::make_shared<OffspringDistribution>(p);
    std::uint32_t nn = n;
    std::uint64_t block = draws_per_graph;

    auto graph_for = [cache, pp, nn](std::uint64_t seed, std::uint64_t gidx) {
        std::uint64_t key = Rng::mix(seed ^ Rng::mix(gidx));
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            for (auto& e : cache->entries)
                if (e.first == key) return e.second;
        }
        auto prepared = std::make_shared<Prepared>();
        prepared->g = config_model(nn, *pp, key);
        prepared->inc = make_incidence(prepared->g);
        std::shared_ptr<const Prepared> out = prepared;
        std::lock_guard<std::mutex> lock(cache->mu);
        if (cache->entries.size() >= 8) cache->entries.erase(cache->entries.begin());
        cache->entries.emplace_back(key, out);
        return out;
    };

    RootedSampler s;
    s.descriptor = {{"kind", "config-model"},
                    {"n", n},
                    {"p", p.to_json()},
                    {"draws_per_graph", draws_per_graph},
                    {"ball_radius", ball_radius}};
    s.truncation_radius = ball_radius;
    s.max_root_degree = static_cast<std::uint32_t>(p.p.size());
    s.draw = [graph_for, block, ball_radius](std::uint64_t seed, std::uint64_t index) {
        auto prep = graph_for(seed, index / block);
        Rng rng = Rng::stream(seed, index, kRootSalt);
        std::uint32_t root = static_cast<std::uint32_t>(rng.below(prep->g.vertex_count()));
        // local BFS ball, O(ball size) rather than O(n)
        std::map<std::uint32_t, std::uint32_t> id;
        std::vector<std::uint32_t> verts, dist;
        auto intern = [&](std::uint32_t v, std::uint32_t d) {
            auto it = id.find(v);
            if (it != id.end()) return it->second;
            std::uint32_t i = static_cast<std::uint32_t>(verts.size());
            id[v] = i;
            verts.push_back(v);
            dist.push_back(d);
            return i;
        };
        intern(root, 0);
        for (std::uint32_t i = 0; i < verts.size(); ++i) {
            if (dist[i] >= ball_radius) continue;
            for (const HalfEdge& h : prep->inc[verts[i]]) intern(h.other, dist[i] + 1);
        }
        RootedNetwork out;
        out.root = 0;
        out.validity_radius = ball_radius;
        for (std::uint32_t v : verts) out.net.add_vertex(prep->g.vertex_marks[v]);
        for (std::uint32_t i = 0; i < verts.size(); ++i)
            for (const HalfEdge& h : prep->inc[verts[i]]) {
                if (!h.from_u) continue;  // each edge once, from its u side
                auto it = id.find(h.other);
                if (it == id.end()) continue;
                out.net.add_edge(i, it->second, prep->g.edges[h.edge].mu,
                                 prep->g.edges[h.edge].mv);
            }
        return out;
    };
    return s;
}

// ---------------------------------------------------------------------------
// canopy tree

namespace {

/// The canopy tree as implicit coordinates (level, offset), offset relative
/// to the root's ancestor line. Children of (l, m) are (l-1, 2m) and
/// (l-1, 2m+1); the parent is (l+1, floor(m/2)).
class CanopySpace : public WalkSpace {
public:
    CanopySpace(std::uint32_t root_level) : root_level_(root_level) {
        intern(root_level_, 0);
    }

    std::uint32_t root() const override { return 0; }

    const std::vector<std::uint32_t>& neighbors(std::uint32_t v) override {
        if (nbrs_[v].empty()) {
            auto [l, m] = coords_[v];
            if (l > 60) throw Error("draw-too-large", "canopy walk climbed beyond level 60");
            // intern first: it may reallocate nbrs_
            std::uint32_t parent = intern(l + 1, m >> 1);
            std::uint32_t c0 = l >= 1 ? intern(l - 1, 2 * m) : 0;
            std::uint32_t c1 = l >= 1 ? intern(l - 1, 2 * m + 1) : 0;
            nbrs_[v].push_back(parent);
            if (l >= 1) {
                nbrs_[v].push_back(c0);
                nbrs_[v].push_back(c1);
            }
        }
        return nbrs_[v];
    }

    std::uint32_t depth(std::uint32_t v) const override {
        auto [l, m] = coords_[v];
        // distance to the root (root_level_, 0) through the lowest common ancestor
        std::uint32_t up = l;
        std::int64_t mm = m;
        std::uint32_t steps = 0;
        while (up < root_level_ || mm != 0) {
            mm >>= 1;
            ++up;
            ++steps;
        }
        return steps + (up - root_level_);
    }

private:
    std::uint32_t intern(std::uint32_t l, std::int64_t m) {
        auto key = std::make_pair(l, m);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        std::uint32_t i = static_cast<std::uint32_t>(coords_.size());
        ids_[key] = i;
        coords_.push_back(key);
        nbrs_.emplace_back();
        return i;
    }

    std::uint32_t root_level_;
    std::map<std::pair<std::uint32_t, std::int64_t>, std::uint32_t> ids_;
    std::vector<std::pair<std::uint32_t, std::int64_t>> coords_;
    std::vector<std::vector<std::uint32_t>> nbrs_;
};

std::uint32_t sample_canopy_level(Rng& rng) {
    // P(level = n) = 2^-(n+1): count leading 1-bits
    std::uint32_t level = 0;
    while (rng.next() & 1) ++level;
    return level;
}

}  // namespace

RootedSampler canopy_sampler(std::uint32_t R) {
    if (R < 1) throw Error("invalid-radius", "canopy radius must be >= 1");
    RootedSampler s;
    s.descriptor = {{"kind", "canopy"}, {"radius", R}};
    s.truncation_radius = R;
    s.infinite_support = true;
    s.max_root_degree = 3;
    s.space = [](std::uint64_t seed, std::uint64_t index) -> std::unique_ptr<WalkSpace> {
        Rng rng = Rng::stream(seed, index, kDrawSalt);
        return std::make_unique<CanopySpace>(sample_canopy_level(rng));
    };
    std::uint32_t radius = R;
    s.draw = [radius](std::uint64_t seed, std::uint64_t index) {
        Rng rng = Rng::stream(seed, index, kDrawSalt);
        CanopySpace space(sample_canopy_level(rng));
        return space.materialize_ball(0, radius);
    };
    return s;
}

// ---------------------------------------------------------------------------
// cartesian product

RootedSampler cartesian_product(const RootedSampler& a, const RootedSampler& b) {
    auto da = a.draw, db = b.draw;
    RootedSampler s;
    s.descriptor = {{"kind", "cartesian-product"},
                    {"a", a.descriptor},
                    {"b", b.descriptor}};
    s.truncation_radius = std::min(a.truncation_radius, b.truncation_radius);
    s.infinite_support = a.infinite_support || b.infinite_support;
    if (a.max_root_degree && b.max_root_degree)
        s.max_root_degree = *a.max_root_degree + *b.max_root_degree;
    std::uint32_t validity = s.truncation_radius;
    s.draw = [da, db, validity](std::uint64_t seed, std::uint64_t index) {
        RootedNetwork ga = da(Rng::mix(seed ^ 0xA), index);
        RootedNetwork gb = db(Rng::mix(seed ^ 0xB), index);
        auto dista = bfs_distances(ga.net, ga.root);
        auto distb = bfs_distances(gb.net, gb.root);
        const std::uint32_t na = ga.net.vertex_count(), nb = gb.net.vertex_count();
        auto within = [&](std::uint32_t x, std::uint32_t y) {
            if (validity == kUnboundedRadius) return true;
            return dista[x] + distb[y] <= validity;
        };
        std::vector<std::uint32_t> id(static_cast<std::size_t>(na) * nb, kUnboundedRadius);
        RootedNetwork out;
        out.validity_radius = validity;
        auto pair_mark = [](const Mark& x, const Mark& y) {
            Mark m;
            m.push_back(static_cast<std::int64_t>(x.size()));
            m.insert(m.end(), x.begin(), x.end());
            m.insert(m.end(), y.begin(), y.end());
            return m;
        };
        for (std::uint32_t x = 0; x < na; ++x)
            for (std::uint32_t y = 0; y < nb; ++y)
                if (within(x, y)) {
                    id[static_cast<std::size_t>(x) * nb + y] = out.net.vertex_count();
                    out.net.add_vertex(pair_mark(ga.net.vertex_marks[x], gb.net.vertex_marks[y]));
                }
        for (const Edge& e : ga.net.edges)
            for (std::uint32_t y = 0; y < nb; ++y) {
                std::uint32_t iu = id[static_cast<std::size_t>(e.u) * nb + y];
                std::uint32_t iv = id[static_cast<std::size_t>(e.v) * nb + y];
                if (iu != kUnboundedRadius && iv != kUnboundedRadius)
                    out.net.add_edge(iu, iv, e.mu, e.mv);
            }
        for (const Edge& e : gb.net.edges)
            for (std::uint32_t x = 0; x < na; ++x) {
                std::uint32_t iu = id[static_cast<std::size_t>(x) * nb + e.u];
                std::uint32_t iv = id[static_cast<std::size_t>(x) * nb + e.v];
                if (iu != kUnboundedRadius && iv != kUnboundedRadius)
                    out.net.add_edge(iu, iv, e.mu, e.mv);
            }
        out.root = id[static_cast<std::size_t>(ga.root) * nb + gb.root];
        return out;
    };
    return s;
}

// ---------------------------------------------------------------------------
// edge replacement

RootedSampler edge_replace(const RootedSampler& s,
                           std::function<TwoPointedGraph(const Mark&, const Mark&)> L,
                           std::uint32_t max_replacement_vertices) {
    if (!s.max_root_degree)
        throw Error("bias-overflow", "edge_replace needs a root degree bound for rejection");
    if (max_replacement_vertices < 2)
        throw Error("invalid-replacement", "replacement graphs have at least the two pins");
    const std::uint64_t a_max =
        2 + static_cast<std::uint64_t>(*s.max_root_degree) * (max_replacement_vertices - 2);
    auto base_draw = s.draw;
    const std::uint32_t base_radius = s.truncation_radius;

    RootedSampler out;
    out.descriptor = {{"kind", "edge-replace"}, {"base", s.descriptor}};
    out.infinite_support = s.infinite_support;
    std::uint32_t max_repl = max_replacement_vertices;

    out.draw = [base_draw, L, a_max, base_radius, max_repl](std::uint64_t seed,
                                                            std::uint64_t index) {
        Rng rng = Rng::stream(seed, index, 0xED6E5EALL);
        for (std::uint32_t attempt = 0; attempt < 100000; ++attempt) {
            RootedNetwork g = base_draw(Rng::mix(seed + Rng::kGolden * (attempt + 1)), index);
            auto inc = make_incidence(g.net);
            // A(g, o) = 2 + sum over root edges of (|V(L)| - 2)
            std::vector<TwoPointedGraph> root_repl;
            std::uint64_t a_val = 2;
            for (const HalfEdge& h : inc[g.root]) {
                if (h.other == g.root && !h.from_u) continue;  // loop counted once
                const Edge& e = g.net.edges[h.edge];
                TwoPointedGraph t = h.from_u ? L(e.mu, e.mv) : L(e.mv, e.mu);
                if (t.net.vertex_count() < 2 || t.pin1 == t.pin2 ||
                    t.net.vertex_count() > max_repl)
                    throw Error("invalid-replacement", "replacement violates the pin contract");
                a_val += t.net.vertex_count() - 2;
                root_repl.push_back(std::move(t));
            }
            if (a_val > a_max) throw Error("bias-overflow", "A exceeded the declared bound");
            if (!rng.bernoulli(static_cast<double>(a_val) / static_cast<double>(a_max)))
                continue;

            // build H: originals keep ids, internals appended per edge
            Network h;
            for (const Mark& m : g.net.vertex_marks) h.add_vertex(m);
            std::uint32_t d_max = 0;
            std::vector<std::vector<std::uint32_t>> internals_per_edge(g.net.edges.size());
            for (std::uint32_t ei = 0; ei < g.net.edges.size(); ++ei) {
                const Edge& e = g.net.edges[ei];
                TwoPointedGraph t = L(e.mu, e.mv);
                std::vector<std::uint32_t> map(t.net.vertex_count(), 0);
                for (std::uint32_t v = 0; v < t.net.vertex_count(); ++v) {
                    if (v == t.pin1) map[v] = e.u;
                    else if (v == t.pin2) map[v] = e.v;
                    else {
                        map[v] = h.vertex_count();
                        internals_per_edge[ei].push_back(h.vertex_count());
                        h.add_vertex(t.net.vertex_marks[v]);
                    }
                }
                for (const Edge& te : t.net.edges)
                    h.add_edge(map[te.u], map[te.v], te.mu, te.mv);
                auto d1 = bfs_distances(t.net, t.pin1);
                auto d2 = bfs_distances(t.net, t.pin2);
                for (std::uint32_t v = 0; v < t.net.vertex_count(); ++v)
                    d_max = std::max(d_max, std::max(d1[v], d2[v]));
            }

            // slot list: internal vertices of root edges, then the root twice
            std::vector<std::uint32_t> slots;
            for (const HalfEdge& hh : inc[g.root]) {
                if (hh.other == g.root && !hh.from_u) continue;
                for (std::uint32_t w : internals_per_edge[hh.edge]) slots.push_back(w);
            }
            slots.push_back(g.root);
            slots.push_back(g.root);
            std::uint32_t new_root = slots[rng.below(slots.size())];

            RootedNetwork rooted;
            rooted.net = std::move(h);
            rooted.root = new_root;
            rooted.validity_radius = kUnboundedRadius;
            if (base_radius != kUnboundedRadius) {
                std::uint32_t safe =
                    base_radius > d_max + 1 ? base_radius - d_max - 1 : 0;
                rooted = ball(rooted, safe);
            }
            return rooted;
        }
        throw Error("bias-overflow", "edge_replace rejection never accepted");
    };
    // truncation shrinks by the replacement stretch; report conservatively
    out.truncation_radius =
        s.truncated() ? (s.truncation_radius > max_replacement_vertices
                             ? s.truncation_radius - max_replacement_vertices
                             : 0)
                      : kUnboundedRadius;
    return out;
}

// ---------------------------------------------------------------------------
// universal cover

RootedNetwork universal_cover(const RootedNetwork& g, std::uint32_t R) {
    if (g.truncated() && R > g.validity_radius)
        throw Error("radius-exceeds-validity", "cover depth exceeds validity radius");
    auto inc = make_incidence(g.net);

    struct Node {
        std::uint32_t vertex;
        std::uint32_t in_edge;  // kUnboundedRadius at the root
        bool in_dir;            // true = arrived travelling u->v
        std::uint32_t depth;
    };
    RootedNetwork out;
    out.root = 0;
    out.validity_radius = R;
    std::vector<Node> nodes{{g.root, kUnboundedRadius, false, 0}};
    out.net.add_vertex(g.net.vertex_marks[g.root]);
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        Node cur = nodes[i];
        if (cur.depth == R) continue;
        for (const HalfEdge& h : inc[cur.vertex]) {
            bool out_dir = h.from_u;  // travelling u->v of edge h.edge
            if (cur.in_edge == h.edge && out_dir != cur.in_dir) continue;  // backtrack
            std::uint32_t child = out.net.vertex_count();
            out.net.add_vertex(g.net.vertex_marks[h.other]);
            const Edge& e = g.net.edges[h.edge];
            // mark at the parent end is the mark at cur.vertex's end
            if (out_dir)
                out.net.add_edge(i, child, e.mu, e.mv);
            else
                out.net.add_edge(i, child, e.mv, e.mu);
            nodes.push_back({h.other, h.edge, out_dir, cur.depth + 1});
            if (out.net.vertex_count() > kDrawVertexCap)
                throw Error("draw-too-large", "cover exceeded the vertex cap");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Poisson weighted infinite tree

void PwitConfig::validate() const {
    if (grid.empty() || grid.front().first != 0.0 || grid.front().second != 0.0)
        throw Error("invalid-pwit", "Lambda grid must start at (0,0)");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i].first <= grid[i - 1].first || grid[i].second <= grid[i - 1].second)
            throw Error("invalid-pwit", "Lambda grid must be strictly increasing");
    if (R < 1) throw Error("invalid-pwit", "R must be >= 1");
}

double PwitConfig::lambda_inverse(double y) const {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (y <= grid[i].second) {
            double t0 = grid[i - 1].first, y0 = grid[i - 1].second;
            return t0 + (y - y0) * (grid[i].first - t0) / (grid[i].second - y0);
        }
    }
    // extend past the grid with the final slope
    std::size_t m = grid.size();
    double t0 = grid[m - 2].first, y0 = grid[m - 2].second;
    double slope = (grid[m - 1].first - t0) / (grid[m - 1].second - y0);
    return grid[m - 1].first + (y - grid[m - 1].second) * slope;
}

RootedSampler pwit_sampler(const PwitConfig& cfg) {
    cfg.validate();
    auto shared = std::make_shared<PwitConfig>(cfg);
    RootedSampler s;
    nlohmann::json gj = nlohmann::json::array();
    for (auto& p : cfg.grid) gj.push_back({p.first, p.second});
    s.descriptor = {{"kind", "pwit"}, {"grid", gj}, {"K", cfg.K}, {"R", cfg.R}};
    s.truncation_radius = cfg.R;
    s.infinite_support = cfg.K > 0;
    s.max_root_degree = cfg.K;
    s.draw = [shared](std::uint64_t seed, std::uint64_t index) {
        Rng rng = Rng::stream(seed, index, kDrawSalt);
        RootedNetwork out;
        out.root = 0;
        out.validity_radius = shared->R;
        out.net.add_vertex();
        struct Item { std::uint32_t id, depth; };
        std::deque<Item> queue{{0, 0}};
        while (!queue.empty()) {
            auto [id, depth] = queue.front();
            queue.pop_front();
            if (depth == shared->R) continue;
            double gamma = 0.0;
            for (std::uint32_t k = 0; k < shared->K; ++k) {
                gamma += rng.exponential(1.0);
                double length = shared->lambda_inverse(gamma);
                std::uint32_t child = out.net.vertex_count();
                out.net.add_vertex();
                Mark m = real_mark(length);
                out.net.add_edge(id, child, m, m);
                queue.push_back({child, depth + 1});
                if (out.net.vertex_count() > kDrawVertexCap)
                    throw Error("draw-too-large", "pwit exceeded the vertex cap");
            }
        }
        return out;
    };
    return s;
}

}  // namespace gen
}  // namespace umrn
