#include "umrn/walk.hpp"

#include <algorithm>
#include <map>

#include "umrn/canonical.hpp"
#include "umrn/exec.hpp"
#include "umrn/stats.hpp"

namespace umrn {
namespace walk {

namespace {
constexpr std::uint64_t kWalkSalt = 0x77616c6b53616cULL;
constexpr std::uint64_t kBiasSalt = 0x6269617353616cULL;
}  // namespace

Trajectory srw_trajectory(const RootedNetwork& g, std::uint32_t steps, std::uint64_t seed) {
    FiniteWalkSpace space(g);
    Rng rng = Rng::stream(seed, 0, kWalkSalt);
    Trajectory t;
    std::uint32_t cur = space.root();
    t.positions.push_back(cur);
    for (std::uint32_t i = 0; i < steps; ++i) {
        const auto& nb = space.neighbors(cur);
        if (nb.empty()) throw Error("isolated-vertex", "walk stuck at isolated vertex");
        cur = nb[rng.below(nb.size())];
        t.positions.push_back(cur);
    }
    return t;
}

Stepper srw_stepper() {
    return [](WalkSpace& space, std::uint32_t v, Rng& rng) {
        const auto& nb = space.neighbors(v);
        if (nb.empty()) throw Error("isolated-vertex", "walk stuck at isolated vertex");
        return nb[rng.below(nb.size())];
    };
}

Stepper drift_stepper(double q) {
    // environment with drift toward locally smaller degrees: equivariant but
    // not reversible for the degree measure, the negative control for the
    // reversibility test
    return [q](WalkSpace& space, std::uint32_t v, Rng& rng) {
        std::vector<std::uint32_t> nb = space.neighbors(v);
        if (nb.empty()) throw Error("isolated-vertex", "walk stuck at isolated vertex");
        std::size_t my_deg = nb.size();
        std::vector<std::uint32_t> lower;
        for (std::uint32_t w : nb)
            if (space.neighbors(w).size() < my_deg) lower.push_back(w);
        if (!lower.empty() && rng.uniform() < q) return lower[rng.below(lower.size())];
        return nb[rng.below(nb.size())];
    };
}

RootedSampler degree_biased(const RootedSampler& s) {
    if (!s.max_root_degree)
        throw Error("unbounded-degree", "degree biasing needs a root degree bound");
    const std::uint32_t max_deg = *s.max_root_degree;
    RootedSampler out = s;
    out.descriptor = {{"kind", "degree-biased"}, {"base", s.descriptor}};
    auto base_draw = s.draw;
    out.draw = [base_draw, max_deg](std::uint64_t seed, std::uint64_t index) {
        Rng rng = Rng::stream(seed, index, kBiasSalt);
        for (std::uint32_t attempt = 0; attempt < 1000000; ++attempt) {
            RootedNetwork g = base_draw(Rng::mix(seed + Rng::kGolden * (attempt + 1)), index);
            auto deg = degrees(g.net);
            if (deg[g.root] > max_deg)
                throw Error("unbounded-degree", "draw exceeded the declared degree bound");
            if (rng.below(max_deg) < deg[g.root]) return g;
        }
        throw Error("unbounded-degree", "degree-biased rejection never accepted");
    };
    if (s.space) {
        auto base_space = s.space;
        out.space = [base_space, max_deg](std::uint64_t seed, std::uint64_t index) {
            Rng rng = Rng::stream(seed, index, kBiasSalt);
            for (std::uint32_t attempt = 0; attempt < 1000000; ++attempt) {
                auto sp = base_space(Rng::mix(seed + Rng::kGolden * (attempt + 1)), index);
                std::uint32_t deg =
                    static_cast<std::uint32_t>(sp->neighbors(sp->root()).size());
                if (rng.below(max_deg) < deg) return sp;
            }
            throw Error("unbounded-degree", "degree-biased rejection never accepted");
        };
    } else {
        out.space = nullptr;
    }
    return out;
}

nlohmann::json PairedKeyReport::to_json() const {
    return {{"tv", tv}, {"p_value", p_value}, {"samples", samples}};
}

namespace {

PairedKeyReport paired_key_test(std::vector<std::pair<std::string, std::string>> pairs,
                                std::uint64_t seed, std::uint32_t permutations) {
    const std::uint64_t n = pairs.size();
    // intern keys; pairs with equal keys are invariant under swapping and
    // only dilute the permutation loop
    std::map<std::string, std::uint32_t> ids;
    auto intern = [&](const std::string& k) {
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        std::uint32_t i = static_cast<std::uint32_t>(ids.size());
        ids.emplace(k, i);
        return i;
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> active;
    for (const auto& pr : pairs) {
        std::uint32_t a = intern(pr.first), b = intern(pr.second);
        if (a != b) active.push_back({a, b});
    }
    const std::size_t k = ids.size();
    auto tv_of = [&](const std::vector<std::int64_t>& diff) {
        std::int64_t abs_sum = 0;
        for (std::int64_t d : diff) abs_sum += d < 0 ? -d : d;
        return static_cast<double>(abs_sum) / (2.0 * static_cast<double>(n));
    };
    std::vector<std::int64_t> diff(k, 0);
    for (auto& pr : active) {
        diff[pr.first] += 1;
        diff[pr.second] -= 1;
    }
    PairedKeyReport rep;
    rep.samples = n;
    rep.tv = tv_of(diff);

    Rng rng = Rng::stream(seed, 1, kWalkSalt);
    std::uint64_t extreme = 0;
    std::vector<std::int64_t> d2(k);
    for (std::uint32_t b = 0; b < permutations; ++b) {
        std::fill(d2.begin(), d2.end(), 0);
        for (auto& pr : active) {
            if (rng.next() & 1) {
                d2[pr.first] += 1;
                d2[pr.second] -= 1;
            } else {
                d2[pr.second] += 1;
                d2[pr.first] -= 1;
            }
        }
        if (tv_of(d2) >= rep.tv - 1e-15) ++extreme;
    }
    rep.p_value = static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
    return rep;
}

}  // namespace

PairedKeyReport stationarity_test(const RootedSampler& s, std::uint32_t r, std::uint32_t k,
                                  std::uint64_t n, std::uint64_t seed, bool bias,
                                  const Stepper& step, std::uint32_t permutations) {
    // samplers with lazily growing spaces are not bound by the draw truncation
    if (!s.space && s.truncated() && r + k > s.truncation_radius)
        throw Error("truncation-too-small", "stationarity test needs radius r + k");
    RootedSampler src = bias ? degree_biased(s) : s;
    std::vector<std::pair<std::string, std::string>> pairs(n);
    parallel_for(n, [&](std::uint64_t i) {
        auto space = src.make_space(seed, i);
        Rng rng = Rng::stream(seed, i, kWalkSalt);
        std::uint32_t cur = space->root();
        std::string key0 = canonical_form(space->materialize_ball(cur, r)).key.bytes;
        for (std::uint32_t j = 0; j < k; ++j) cur = step(*space, cur, rng);
        std::string keyk = canonical_form(space->materialize_ball(cur, r)).key.bytes;
        pairs[i] = {std::move(key0), std::move(keyk)};
    });
    return paired_key_test(std::move(pairs), seed, permutations);
}

PairedKeyReport reversibility_test(const RootedSampler& s, std::uint32_t r, std::uint64_t n,
                                   std::uint64_t seed, bool bias, const Stepper& step,
                                   std::uint32_t permutations) {
    if (!s.space && s.truncated() && r + 1 > s.truncation_radius)
        throw Error("truncation-too-small", "reversibility test needs radius r + 1");
    RootedSampler src = bias ? degree_biased(s) : s;
    std::vector<std::pair<std::string, std::string>> pairs(n);
    parallel_for(n, [&](std::uint64_t i) {
        auto space = src.make_space(seed, i);
        Rng rng = Rng::stream(seed, i, kWalkSalt);
        std::uint32_t w0 = space->root();
        std::uint32_t w1 = step(*space, w0, rng);
        std::string k0 = canonical_form(space->materialize_ball(w0, r)).key.bytes;
        std::string k1 = canonical_form(space->materialize_ball(w1, r)).key.bytes;
        // ordered pair encoded by concatenation with a separator
        pairs[i] = {k0 + '\x1f' + k1, k1 + '\x1f' + k0};
    });
    return paired_key_test(std::move(pairs), seed, permutations);
}

Rational exact_stationarity_tv(const Network& g, std::uint32_t r, std::uint32_t k) {
    const std::uint32_t n = g.vertex_count();
    if (n == 0) throw Error("empty-network", "empty network");
    auto deg = degrees(g);
    std::int64_t total_deg = 0;
    for (auto d : deg) total_deg += d;
    if (total_deg == 0) throw Error("isolated-vertex", "no edges");

    // exact k-step distribution from the degree-biased start
    std::vector<Rational> dist(n);
    for (std::uint32_t v = 0; v < n; ++v)
        dist[v] = Rational(static_cast<std::int64_t>(deg[v]), total_deg);
    // edge multiplicities
    std::vector<std::vector<std::int64_t>> mult(n, std::vector<std::int64_t>(n, 0));
    for (const Edge& e : g.edges) {
        if (e.u == e.v) mult[e.u][e.v] += 2;
        else {
            mult[e.u][e.v] += 1;
            mult[e.v][e.u] += 1;
        }
    }
    std::vector<Rational> start = dist;
    for (std::uint32_t step = 0; step < k; ++step) {
        std::vector<Rational> next(n, Rational(0));
        for (std::uint32_t x = 0; x < n; ++x) {
            if (dist[x] == Rational(0)) continue;
            for (std::uint32_t y = 0; y < n; ++y)
                if (mult[x][y] > 0)
                    next[y] += dist[x] * Rational(mult[x][y], static_cast<std::int64_t>(deg[x]));
        }
        dist = std::move(next);
    }

    // project both distributions onto canonical r-ball keys
    std::map<std::string, Rational> h0, hk;
    for (std::uint32_t v = 0; v < n; ++v) {
        RootedNetwork rooted = component_of(g, v);
        std::string key = canonical_form(ball(rooted, r)).key.bytes;
        auto it0 = h0.find(key);
        if (it0 == h0.end()) h0[key] = start[v]; else it0->second += start[v];
        auto itk = hk.find(key);
        if (itk == hk.end()) hk[key] = dist[v]; else itk->second += dist[v];
    }
    Rational tv(0);
    for (const auto& kv : h0) {
        Rational other = hk.count(kv.first) ? hk[kv.first] : Rational(0);
        Rational d = kv.second - other;
        tv += d < Rational(0) ? -d : d;
    }
    for (const auto& kv : hk)
        if (!h0.count(kv.first)) tv += kv.second < Rational(0) ? -kv.second : kv.second;
    return tv / Rational(2);
}

bool pair_matrix_symmetric(const Network& g) {
    const std::uint32_t n = g.vertex_count();
    std::vector<std::vector<std::int64_t>> mult(n, std::vector<std::int64_t>(n, 0));
    for (const Edge& e : g.edges) {
        mult[e.u][e.v] += 1;
        mult[e.v][e.u] += 1;
    }
    // M(i,j) = deg(i) p(i,j) / sum deg = mult(i,j) / sum deg
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
            if (mult[i][j] != mult[j][i]) return false;
    return true;
}

Environment canonical_environment(const RootedNetwork& g) {
    const std::uint32_t n = g.net.vertex_count();
    auto deg = degrees(g.net);
    for (std::uint32_t v = 0; v < n; ++v)
        if (deg[v] == 0) throw Error("isolated-vertex", "canonical environment needs deg > 0");
    auto inc = make_incidence(g.net);

    Environment env;
    env.F.assign(n, Rational(0));
    for (std::uint32_t x = 0; x < n; ++x)
        for (const HalfEdge& h : inc[x])
            env.F[x] += Rational(1, static_cast<std::int64_t>(deg[h.other]));

    env.transition.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::uint32_t x = 0; x < n; ++x)
        for (const HalfEdge& h : inc[x])
            env.transition[x][h.other] +=
                (Rational(1) / env.F[x]) * Rational(1, static_cast<std::int64_t>(deg[h.other]));

    // Z = E[F(o)/deg(o)] under uniform rooting, so that E[nu(o)] = 1
    env.Z = Rational(0);
    for (std::uint32_t x = 0; x < n; ++x)
        env.Z += env.F[x] / Rational(static_cast<std::int64_t>(deg[x]));
    env.Z /= Rational(static_cast<std::int64_t>(n));
    env.bias.assign(n, Rational(0));
    for (std::uint32_t x = 0; x < n; ++x)
        env.bias[x] = env.F[x] / Rational(static_cast<std::int64_t>(deg[x])) / env.Z;

    env.rows_sum_to_one = true;
    for (std::uint32_t x = 0; x < n; ++x) {
        Rational s(0);
        for (std::uint32_t y = 0; y < n; ++y) s += env.transition[x][y];
        if (s != Rational(1)) env.rows_sum_to_one = false;
    }
    env.detailed_balance = true;
    for (std::uint32_t x = 0; x < n; ++x)
        for (std::uint32_t y = 0; y < n; ++y)
            if (env.bias[x] * env.transition[x][y] != env.bias[y] * env.transition[y][x])
                env.detailed_balance = false;
    return env;
}

nlohmann::json SpeedReport::to_json() const {
    return {{"mean", mean}, {"se", se}, {"steps", steps}, {"trials", trials}};
}

SpeedReport speed_estimate(const RootedSampler& s, std::uint32_t steps, std::uint32_t trials,
                           std::uint64_t seed) {
    if (s.truncated() && !s.space && steps > s.truncation_radius)
        throw Error("truncation-too-small", "walk length exceeds truncation radius");
    RootedSampler biased = degree_biased(s);
    std::vector<double> speeds(trials);
    parallel_for(trials, [&](std::uint64_t i) {
        auto space = biased.make_space(seed, i);
        Rng rng = Rng::stream(seed, i, kWalkSalt);
        std::uint32_t cur = space->root();
        for (std::uint32_t j = 0; j < steps; ++j) {
            const auto& nb = space->neighbors(cur);
            cur = nb[rng.below(nb.size())];
        }
        speeds[i] = static_cast<double>(space->depth(cur)) / static_cast<double>(steps);
    });
    auto ci = mean_ci(speeds);
    SpeedReport r;
    r.mean = ci.mean;
    r.se = ci.se;
    r.steps = steps;
    r.trials = trials;
    return r;
}

double tree_speed_formula(double mean_degree) {
    if (mean_degree <= 0) throw Error("invalid-degree", "mean degree must be positive");
    return 1.0 - 2.0 / mean_degree;
}

CtrwResult ctrw_simulate(const RootedNetwork& g, const std::vector<double>& edge_weights,
                         double t_max, std::uint64_t cap, std::uint64_t seed) {
    if (edge_weights.size() != g.net.edges.size())
        throw Error("invalid-weights", "one weight per edge required");
    for (double w : edge_weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw Error("nonfinite-weight", "edge rates must be positive and finite");
    auto inc = make_incidence(g.net);
    auto dist = bfs_distances(g.net, g.root);

    Rng rng = Rng::stream(seed, 0, kWalkSalt);
    CtrwResult res;
    std::uint32_t cur = g.root;
    res.trajectory.positions.push_back(cur);
    res.trajectory.jump_times.push_back(0.0);
    std::vector<double> holds;
    double t = 0.0;
    while (res.jumps < cap) {
        if (g.truncated() && dist[cur] >= g.validity_radius)
            throw Error("truncation-escape", "continuous-time walk left the validity radius");
        double rate = 0.0;
        for (const HalfEdge& h : inc[cur]) rate += edge_weights[h.edge];
        if (rate <= 0.0) break;  // absorbed
        double hold = rng.exponential(rate);
        if (t + hold > t_max) { t = t_max; break; }
        t += hold;
        holds.push_back(hold);
        double pick = rng.uniform() * rate;
        std::uint32_t nxt = cur;
        for (const HalfEdge& h : inc[cur]) {
            pick -= edge_weights[h.edge];
            if (pick <= 0.0) { nxt = h.other; break; }
        }
        cur = nxt;
        ++res.jumps;
        if (res.trajectory.positions.size() < 100000) {
            res.trajectory.positions.push_back(cur);
            res.trajectory.jump_times.push_back(t);
        }
    }
    res.elapsed = t;
    if (!holds.empty()) {
        std::size_t from = holds.size() - holds.size() / 10;
        for (std::size_t i = from; i < holds.size(); ++i) res.last_decade_holding += holds[i];
    }
    res.flagged = res.jumps >= cap && t < t_max;
    return res;
}

}  // namespace walk
}  // namespace umrn
