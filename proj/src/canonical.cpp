#include "umrn/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace umrn {

std::string CanonicalKey::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

namespace {

// Order-preserving byte encodings. A mark is a 0x01-prefixed element list
// closed by 0x00, so a proper prefix sorts below its extensions. Blocks are
// closed by 0xFF, so a block with more edge entries sorts below one with
// fewer (missing edge = +infinity, matching the ball-growing order).
constexpr unsigned char kElem = 0x01;
constexpr unsigned char kMarkEnd = 0x00;
constexpr unsigned char kEntry = 0x01;
constexpr unsigned char kBlockEnd = 0xFF;

void encode_u32(std::string& out, std::uint32_t x) {
    out.push_back(static_cast<char>(x >> 24));
    out.push_back(static_cast<char>((x >> 16) & 0xff));
    out.push_back(static_cast<char>((x >> 8) & 0xff));
    out.push_back(static_cast<char>(x & 0xff));
}

void encode_mark(std::string& out, const Mark& m) {
    for (std::int64_t e : m) {
        out.push_back(static_cast<char>(kElem));
        std::uint64_t u = static_cast<std::uint64_t>(e) ^ 0x8000000000000000ULL;  // sign flip
        for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<char>((u >> s) & 0xff));
    }
    out.push_back(static_cast<char>(kMarkEnd));
}

struct Searcher {
    const Network& g;
    std::vector<std::vector<HalfEdge>> inc;
    std::vector<std::uint32_t> colors;
    std::uint32_t n;
    std::size_t budget;
    std::size_t nodes = 0;

    std::vector<std::int32_t> lab;            // vertex -> label or -1
    std::vector<std::uint32_t> order;         // label -> vertex
    std::vector<std::uint32_t> frontier_cnt;  // # labeled neighbors
    std::string cur;

    bool have_best = false;
    std::string best;
    std::vector<std::uint32_t> best_order;

    std::vector<std::vector<std::uint32_t>> gens;  // discovered automorphisms
    static constexpr std::size_t kMaxGens = 256;

    explicit Searcher(const Network& net, std::size_t node_budget)
        : g(net), inc(make_incidence(net)), n(net.vertex_count()), budget(node_budget) {
        lab.assign(n, -1);
        frontier_cnt.assign(n, 0);
    }

    // Block appended for vertex v receiving label k: vertex mark, then the
    // sorted entries (head label, mark at v, mark at head) of edges from v to
    // already-labeled vertices; loops at v count once with head label k.
    std::string block_of(std::uint32_t v, std::uint32_t k) const {
        std::string blk;
        encode_mark(blk, g.vertex_marks[v]);
        std::vector<std::string> entries;
        for (const HalfEdge& h : inc[v]) {
            std::string ent;
            if (h.other == v) {
                if (!h.from_u) continue;  // each loop once
                const Edge& e = g.edges[h.edge];
                const Mark& a = std::min(e.mu, e.mv);
                const Mark& b = std::max(e.mu, e.mv);
                ent.push_back(static_cast<char>(kEntry));
                encode_u32(ent, k);
                encode_mark(ent, a);
                encode_mark(ent, b);
            } else if (lab[h.other] >= 0) {
                ent.push_back(static_cast<char>(kEntry));
                encode_u32(ent, static_cast<std::uint32_t>(lab[h.other]));
                encode_mark(ent, mark_here(g, h));
                encode_mark(ent, mark_there(g, h));
            } else {
                continue;
            }
            entries.push_back(std::move(ent));
        }
        std::sort(entries.begin(), entries.end());
        for (const std::string& e : entries) blk += e;
        blk.push_back(static_cast<char>(kBlockEnd));
        return blk;
    }

    void assign(std::uint32_t v, std::uint32_t k) {
        lab[v] = static_cast<std::int32_t>(k);
        order.push_back(v);
        for (const HalfEdge& h : inc[v])
            if (h.other != v) ++frontier_cnt[h.other];
    }

    void unassign(std::uint32_t v) {
        lab[v] = -1;
        order.pop_back();
        for (const HalfEdge& h : inc[v])
            if (h.other != v) --frontier_cnt[h.other];
    }

    // Union-find orbit partition for the subgroup of discovered automorphisms
    // that fix the current prefix pointwise.
    std::vector<std::uint32_t> prefix_orbits(std::uint32_t k) const {
        std::vector<std::uint32_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& gen : gens) {
            bool fixes = true;
            for (std::uint32_t i = 0; i < k; ++i)
                if (gen[order[i]] != order[i]) { fixes = false; break; }
            if (!fixes) continue;
            for (std::uint32_t v = 0; v < n; ++v) {
                std::uint32_t a = find(v), b = find(gen[v]);
                if (a != b) parent[a] = b;
            }
        }
        for (std::uint32_t v = 0; v < n; ++v) parent[v] = find(v);
        return parent;
    }

    // Returns true if best was replaced inside this subtree.
    bool recurse(std::uint32_t k, std::size_t eq_upto, bool lt) {
        if (++nodes > budget)
            throw Error("canonical-budget", "canonical search node budget exceeded");
        if (k == n) {
            if (!have_best || lt) {
                best = cur;
                best_order = order;
                have_best = true;
                return true;
            }
            // full tie: the two labelings compose to an automorphism
            if (gens.size() < kMaxGens) {
                std::vector<std::uint32_t> gen(n);
                for (std::uint32_t i = 0; i < n; ++i) gen[best_order[i]] = order[i];
                gens.push_back(std::move(gen));
            }
            return false;
        }

        // candidates: unlabeled frontier vertices with the minimal next block
        std::vector<std::uint32_t> cands;
        std::string min_blk;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (lab[v] >= 0 || frontier_cnt[v] == 0) continue;
            std::string blk = block_of(v, k);
            if (cands.empty() || blk < min_blk) {
                min_blk = std::move(blk);
                cands.assign(1, v);
            } else if (blk == min_blk) {
                cands.push_back(v);
            }
        }
        if (cands.empty())
            throw Error("disconnected-input", "rooted network is not connected");

        if (cands.size() > 1) {
            // refinement-color filter (isomorphism-invariant tiebreak)
            std::uint32_t min_color = colors[cands[0]];
            for (std::uint32_t v : cands) min_color = std::min(min_color, colors[v]);
            std::vector<std::uint32_t> keep;
            for (std::uint32_t v : cands)
                if (colors[v] == min_color) keep.push_back(v);
            cands.swap(keep);
        }

        std::vector<std::uint32_t> orbit;
        if (cands.size() > 1 && !gens.empty()) orbit = prefix_orbits(k);

        const std::size_t node_len = cur.size();
        bool replaced_any = false;
        std::vector<std::uint32_t> seen_reps;
        for (std::uint32_t v : cands) {
            if (!orbit.empty()) {
                std::uint32_t rep = orbit[v];
                if (std::find(seen_reps.begin(), seen_reps.end(), rep) != seen_reps.end())
                    continue;
                seen_reps.push_back(rep);
            }
            cur += min_blk;
            std::size_t neq = eq_upto;
            bool nlt = lt;
            bool prune = false;
            if (have_best && !nlt) {
                for (std::size_t i = eq_upto; i < cur.size(); ++i) {
                    unsigned char a = static_cast<unsigned char>(cur[i]);
                    unsigned char b = static_cast<unsigned char>(best[i]);
                    if (a < b) { nlt = true; break; }
                    if (a > b) { prune = true; break; }
                }
                if (!nlt && !prune) neq = cur.size();
            }
            if (!prune) {
                assign(v, k);
                if (recurse(k + 1, neq, nlt)) {
                    replaced_any = true;
                    lt = false;
                    eq_upto = node_len;  // new best extends our prefix
                }
                unassign(v);
            }
            cur.resize(node_len);
        }
        return replaced_any;
    }
};

}  // namespace umrn::(anonymous)

std::vector<std::uint32_t> refinement_colors(const Network& g, std::int32_t rooted_at) {
    const std::uint32_t n = g.vertex_count();
    auto inc = make_incidence(g);

    // initial colors: (is_root, vertex mark), ids by sorted signature order
    std::vector<std::uint32_t> color(n);
    {
        std::vector<std::pair<std::pair<int, Mark>, std::uint32_t>> sig(n);
        for (std::uint32_t v = 0; v < n; ++v)
            sig[v] = {{static_cast<std::int32_t>(v) == rooted_at ? 0 : 1, g.vertex_marks[v]}, v};
        std::sort(sig.begin(), sig.end());
        std::uint32_t c = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i > 0 && sig[i].first != sig[i - 1].first) ++c;
            color[sig[i].second] = c;
        }
    }

    using Item = std::tuple<Mark, Mark, std::uint32_t>;  // (mark here, mark there, color there)
    for (;;) {
        std::vector<std::pair<std::pair<std::uint32_t, std::vector<Item>>, std::uint32_t>> sig(n);
        for (std::uint32_t v = 0; v < n; ++v) {
            std::vector<Item> items;
            items.reserve(inc[v].size());
            for (const HalfEdge& h : inc[v])
                items.emplace_back(mark_here(g, h), mark_there(g, h), color[h.other]);
            std::sort(items.begin(), items.end());
            sig[v] = {{color[v], std::move(items)}, v};
        }
        std::sort(sig.begin(), sig.end());
        std::vector<std::uint32_t> next(n);
        std::uint32_t c = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i > 0 && sig[i].first != sig[i - 1].first) ++c;
            next[sig[i].second] = c;
        }
        if (next == color) break;
        color = std::move(next);
    }
    return color;
}

CanonicalForm canonical_form(const RootedNetwork& g, std::size_t node_budget) {
    const std::uint32_t n = g.net.vertex_count();
    if (n == 0) throw Error("empty-network", "cannot canonicalize an empty network");
    if (g.root >= n) throw Error("invalid-root", "root index out of range");

    Searcher s(g.net, node_budget);
    s.colors = refinement_colors(g.net, static_cast<std::int32_t>(g.root));

    // step 0 is forced: the root takes label 0
    s.cur += s.block_of(g.root, 0);
    s.assign(g.root, 0);
    s.recurse(1, 0, false);

    CanonicalForm out;
    out.key.bytes = s.best;
    out.relabeled.root = 0;
    out.relabeled.validity_radius = g.validity_radius;
    std::vector<std::uint32_t> newid(n);
    for (std::uint32_t i = 0; i < n; ++i) newid[s.best_order[i]] = i;
    for (std::uint32_t i = 0; i < n; ++i)
        out.relabeled.net.add_vertex(g.net.vertex_marks[s.best_order[i]]);
    std::vector<Edge> edges;
    for (const Edge& e : g.net.edges) {
        std::uint32_t a = newid[e.u], b = newid[e.v];
        if (a < b || (a == b && e.mu <= e.mv))
            edges.push_back(Edge{a, b, e.mu, e.mv});
        else
            edges.push_back(Edge{b, a, e.mv, e.mu});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.u, x.v, x.mu, x.mv) < std::tie(y.u, y.v, y.mu, y.mv);
    });
    out.relabeled.net.edges = std::move(edges);
    return out;
}

CanonicalKey canonical_key(const RootedNetwork& g) { return canonical_form(g).key; }

}  // namespace umrn
