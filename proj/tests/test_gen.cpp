#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "umrn/canonical.hpp"
#include "umrn/gen.hpp"
#include "oracles.hpp"

using namespace umrn;
using namespace umrn::gen;

namespace {

double binom_sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

std::map<std::string, double> key_histogram(const RootedSampler& s, std::uint32_t r,
                                            std::uint64_t n, std::uint64_t seed) {
    std::map<std::string, double> h;
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = s.draw(seed, i);
        h[canonical_key(ball(g, r)).bytes] += 1.0 / static_cast<double>(n);
    }
    return h;
}

}  // namespace

TEST_CASE("offspring distribution parsing and degree formula") {
    auto p = OffspringDistribution::parse("0:0.2,1:0.3,2:0.5");
    CHECK(p.p[0] == Rational(1, 5));
    CHECK(p.p[1] == Rational(3, 10));
    CHECK(p.p[2] == Rational(1, 2));
    // (0.2/1 + 0.3/2 + 0.5/3)^-1 = 60/31
    CHECK(p.ugw_expected_degree() == Rational(60, 31));
    CHECK(delta(2).ugw_expected_degree() == Rational(3));
    CHECK_THROWS_AS(OffspringDistribution::parse("0:0.5,1:0.4"), Error);
}

TEST_CASE("samplers draw bit-identically for equal (seed, index)") {
    auto p = OffspringDistribution::parse("0:0.25,2:0.5,3:0.25");
    Rng graph_rng(4);
    std::vector<RootedSampler> samplers;
    samplers.push_back(agw_sampler(p, 4));
    samplers.push_back(ugw_sampler(p, 4));
    samplers.push_back(canopy_sampler(4));
    samplers.push_back(uniform_root(oracles::random_network(8, graph_rng, true)));
    for (const auto& s : samplers)
        for (std::uint64_t i = 0; i < 5; ++i)
            CHECK(to_json_string(s.draw(123, i)) == to_json_string(s.draw(123, i)));
}

TEST_CASE("uniform_root on P3: end class 2/3, center 1/3") {
    auto s = uniform_root(path_network(3));
    const std::uint64_t n = 6000;
    auto hist = key_histogram(s, 1, n, 7);
    CHECK(hist.size() == 2);
    Network p3 = path_network(3);
    std::string end_key = canonical_key(ball({p3, 0, kUnboundedRadius}, 1)).bytes;
    CHECK(hist[end_key] == doctest::Approx(2.0 / 3).epsilon(0.08));

    auto single = uniform_root(Network{{Mark{}}, {}});
    CHECK(single.draw(1, 0).net.vertex_count() == 1);

    auto tri = uniform_root(cycle_network(3));
    auto th = key_histogram(tri, 1, 50, 3);
    CHECK(th.size() == 1);  // vertex-transitive: one class
}

TEST_CASE("agw: delta_2 root degree 3; delta_0 single edge; mixed law") {
    auto d2 = agw_sampler(delta(2), 3);
    for (std::uint64_t i = 0; i < 30; ++i) {
        RootedNetwork g = d2.draw(5, i);
        CHECK(degrees(g.net)[g.root] == 3);
    }
    auto d0 = agw_sampler(delta(0), 3);
    for (std::uint64_t i = 0; i < 10; ++i) {
        RootedNetwork g = d0.draw(5, i);
        CHECK(g.net.vertex_count() == 2);
        CHECK(g.net.edges.size() == 1);
    }
    auto mixed = agw_sampler(OffspringDistribution::parse("0:0.5,2:0.5"), 3);
    const std::uint64_t n = 4000;
    std::uint64_t deg1 = 0, deg3 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto g = mixed.draw(11, i);
        std::uint32_t d = degrees(g.net)[g.root];
        if (d == 1) ++deg1;
        if (d == 3) ++deg3;
    }
    CHECK(deg1 + deg3 == n);
    double frac = static_cast<double>(deg1) / n;
    CHECK(std::fabs(frac - 0.5) < 3 * binom_sigma(0.5, n));
}

TEST_CASE("ugw: degree law matches the reciprocal-degree biasing") {
    auto d2 = ugw_sampler(delta(2), 3);
    for (std::uint64_t i = 0; i < 20; ++i) {
        RootedNetwork g = d2.draw(5, i);
        CHECK(degrees(g.net)[g.root] == 3);
    }

    auto d0 = ugw_sampler(delta(0), 2);
    CHECK(d0.draw(5, 0).net.vertex_count() == 2);

    auto p = OffspringDistribution::parse("0:0.2,1:0.3,2:0.5");
    auto s = ugw_sampler(p, 2);
    const std::uint64_t n = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto g = s.draw(17, i);
        double d = degrees(g.net)[g.root];
        sum += d;
        sum_sq += d * d;
    }
    double mean = sum / n;
    double se = std::sqrt((sum_sq / n - mean * mean) / n);
    double expect = p.ugw_expected_degree().to_double();  // 60/31 = 1.93548...
    CHECK(expect == doctest::Approx(1.935483870967742));
    CHECK(std::fabs(mean - expect) < 3 * se);
}

TEST_CASE("config model: exact r-law consequences") {
    // delta_2 target: r_3 = 1, random 3-regular multigraph (one leftover ball possible)
    Network g = config_model(101, delta(2), 99);
    auto deg = degrees(g);
    std::uint32_t off = 0;
    for (auto d : deg)
        if (d != 3) ++off;
    CHECK(off <= 1);

    // delta_0: r_1 = 1, perfect matching
    Network m = config_model(100, delta(0), 13);
    auto mdeg = degrees(m);
    std::uint32_t bad = 0;
    for (auto d : mdeg)
        if (d != 1) ++bad;
    CHECK(bad <= 1);
    CHECK(m.edges.size() == 50);

    // n = 2, delta_0: always the single edge
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Network two = config_model(2, delta(0), seed);
        CHECK(two.edges.size() == 1);
    }
}

TEST_CASE("canopy: level law 2^-(n+1), expected degree 2, leaf balls") {
    auto s = canopy_sampler(2);
    const std::uint64_t n = 8000;
    std::uint64_t leaves = 0;
    double deg_sum = 0.0;
    std::string leaf_r1_key;
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = s.draw(23, i);
        std::uint32_t d = degrees(g.net)[g.root];
        deg_sum += d;
        if (d == 1) {
            ++leaves;
            if (leaf_r1_key.empty()) leaf_r1_key = canonical_key(ball(g, 1)).bytes;
        }
    }
    double frac0 = static_cast<double>(leaves) / n;
    CHECK(std::fabs(frac0 - 0.5) < 3 * binom_sigma(0.5, n));
    CHECK(std::fabs(deg_sum / n - 2.0) < 3 * 1.0 / std::sqrt(static_cast<double>(n)));
    // a level-0 root's radius-1 ball is a single edge
    Network p2 = path_network(2);
    CHECK(leaf_r1_key == canonical_key(ball({p2, 0, kUnboundedRadius}, 1)).bytes);
}

TEST_CASE("cartesian product: singletons, grid ball, degree additivity") {
    Network one;
    one.add_vertex();
    auto sv = uniform_root(one);
    auto prod1 = cartesian_product(sv, sv);
    CHECK(prod1.draw(1, 0).net.vertex_count() == 1);

    auto line = line_sampler(3);
    auto grid = cartesian_product(line, line);
    RootedNetwork g = grid.draw(9, 0);
    CHECK(g.validity_radius == 3);
    CHECK(g.net.vertex_count() == 2 * 3 * 3 + 2 * 3 + 1);  // |{|x|+|y| <= 3}| = 25
    CHECK(degrees(g.net)[g.root] == 4);
}

TEST_CASE("edge replacement: identity and subdivision") {
    // identity replacement: sampler unchanged in law
    auto identity = [](const Mark&, const Mark&) {
        TwoPointedGraph t;
        t.net = path_network(2);
        t.pin1 = 0;
        t.pin2 = 1;
        return t;
    };
    auto tri = uniform_root(cycle_network(3));
    auto same = edge_replace(tri, identity, 2);
    std::string tri_key = canonical_key(tri.draw(1, 0)).bytes;
    for (std::uint64_t i = 0; i < 10; ++i)
        CHECK(canonical_key(same.draw(31, i)).bytes == tri_key);

    // subdivision with a marked internal vertex
    auto subdivide = [](const Mark&, const Mark&) {
        TwoPointedGraph t;
        t.net = path_network(3);
        t.net.vertex_marks[1] = {77};
        t.pin1 = 0;
        t.pin2 = 2;
        return t;
    };
    auto line = line_sampler(6);
    auto sub = edge_replace(line, subdivide, 3);
    const std::uint64_t n = 4000;
    std::uint64_t at_subdiv = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = sub.draw(41, i);
        if (g.net.vertex_marks[g.root] == Mark{77}) ++at_subdiv;
    }
    // A = 4: two internal slots of four
    double frac = static_cast<double>(at_subdiv) / n;
    CHECK(std::fabs(frac - 0.5) < 3 * binom_sigma(0.5, n));

    // 3-regular tree: slot enumeration gives (2/5)*3 + (3/5)*2 = 2.4
    auto tree = ugw_sampler(delta(2), 6);
    auto sub3 = edge_replace(tree, subdivide, 3);
    double deg_sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = sub3.draw(43, i);
        deg_sum += degrees(g.net)[g.root];
    }
    double mean = deg_sum / n;
    double sigma = 0.5 / std::sqrt(static_cast<double>(n));  // degree spread is 1
    CHECK(std::fabs(mean - 2.4) < 3 * sigma);
}

TEST_CASE("universal cover: trees fixed, cycles unroll, degree preserved") {
    auto tree = oracles::regular_tree(3, 3);
    RootedNetwork cover = universal_cover(tree, 3);
    CHECK(canonical_key(cover) == canonical_key(ball(tree, 3)));

    RootedNetwork tri{cycle_network(3), 0, kUnboundedRadius};
    RootedNetwork unrolled = universal_cover(tri, 4);
    auto line = line_sampler(4);
    CHECK(canonical_key(unrolled) == canonical_key(line.draw(1, 0)));

    Rng rng(51);
    for (int i = 0; i < 100; ++i) {
        Network g = oracles::random_network(6, rng, true);
        RootedNetwork rooted = component_of(g, static_cast<std::uint32_t>(
                                                   rng.below(g.vertex_count())));
        RootedNetwork cov = universal_cover(rooted, 2);
        CHECK(degrees(cov.net)[cov.root] == degrees(rooted.net)[rooted.root]);
    }
}

TEST_CASE("pwit: empty cutoff, exponential first point, mean count") {
    PwitConfig cfg;
    cfg.grid = {{0.0, 0.0}, {10.0, 10.0}};  // Lambda(t) = t
    cfg.K = 0;
    cfg.R = 1;
    auto empty = pwit_sampler(cfg);
    CHECK(empty.draw(1, 0).net.vertex_count() == 1);

    cfg.K = 8;
    cfg.R = 1;
    auto s = pwit_sampler(cfg);
    const std::uint64_t n = 4000;
    double first_sum = 0.0;
    double count_leq1 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = s.draw(61, i);
        double shortest = 1e18;
        for (const Edge& e : g.net.edges) {
            double len = scaled_real_value(e.mu);
            shortest = std::min(shortest, len);
            if (len <= 1.0) count_leq1 += 1.0;
        }
        first_sum += shortest;
    }
    // first point of a unit Poisson process is Exp(1); counts below 1 have mean Lambda(1)=1
    CHECK(std::fabs(first_sum / n - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(count_leq1 / n - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("biased root sampler") {
    Network p3 = path_network(3);
    auto center_only = biased_root_sampler(p3, {0, 1, 0});
    std::string center_key = canonical_key(component_of(p3, 1)).bytes;
    for (std::uint64_t i = 0; i < 20; ++i)
        CHECK(canonical_key(center_only.draw(3, i)).bytes == center_key);

    CHECK_THROWS_AS(biased_root_sampler(p3, {0, 0, 0}), Error);

    // uniform weights agree with uniform_root in law
    auto uw = biased_root_sampler(p3, {1, 1, 1});
    auto ur = uniform_root(p3);
    auto h1 = key_histogram(uw, 1, 4000, 77);
    auto h2 = key_histogram(ur, 1, 4000, 78);
    for (auto& kv : h1) CHECK(std::fabs(kv.second - h2[kv.first]) < 0.05);
}

TEST_CASE("walk spaces agree with materialized draws") {
    auto s = ugw_sampler(OffspringDistribution::parse("0:0.3,2:0.7"), 4);
    for (std::uint64_t i = 0; i < 10; ++i) {
        auto space = s.make_space(91, i);
        RootedNetwork via_space = space->materialize_ball(space->root(), 4);
        RootedNetwork via_draw = s.draw(91, i);
        CHECK(canonical_key(via_space) == canonical_key(via_draw));
    }
}

TEST_CASE("config model ball counts match the exact r-law") {
    // p = {0.2, 0.3, 0.5}: c = 31/60, r_1 = 12/31, r_2 = 9/31, r_3 = 10/31
    auto p = OffspringDistribution::parse("0:0.2,1:0.3,2:0.5");
    const std::uint32_t n = 30000;
    Network g = config_model(n, p, 12345);
    auto deg = degrees(g);
    std::array<double, 4> frac{0, 0, 0, 0};
    for (auto d : deg)
        if (d <= 3) frac[d] += 1.0 / n;
    const std::array<double, 4> expect{0.0, 12.0 / 31, 9.0 / 31, 10.0 / 31};
    for (std::size_t k = 1; k <= 3; ++k) {
        double sigma = std::sqrt(expect[k] * (1 - expect[k]) / n);
        // pairing does not change ball counts; one leftover ball at most
        CHECK(std::fabs(frac[k] - expect[k]) < 3 * sigma + 2.0 / n);
    }
}

TEST_CASE("canopy levels 1 and 2 carry mass 1/4 and 1/8") {
    auto s = canopy_sampler(4);
    const std::uint64_t n = 8000;
    std::array<std::uint64_t, 3> level_count{0, 0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = s.draw(29, i);
        // root level = distance to the nearest true leaf (degree-1 vertex
        // strictly inside the validity radius)
        auto deg = degrees(g.net);
        auto dist = bfs_distances(g.net, g.root);
        std::uint32_t level = kUnboundedRadius;
        for (std::uint32_t v = 0; v < g.net.vertex_count(); ++v)
            if (deg[v] == 1 && dist[v] < g.validity_radius)
                level = std::min(level, dist[v]);
        if (level <= 2) ++level_count[level];
    }
    for (std::uint32_t l = 0; l < 3; ++l) {
        double expect = std::pow(2.0, -(static_cast<double>(l) + 1));
        double sigma = std::sqrt(expect * (1 - expect) / n);
        CHECK(std::fabs(level_count[l] / static_cast<double>(n) - expect) < 3 * sigma);
    }
}
