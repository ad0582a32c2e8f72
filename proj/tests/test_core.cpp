#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "umrn/automorphism.hpp"
#include "umrn/canonical.hpp"
#include "umrn/network.hpp"
#include "umrn/rooted_distance.hpp"
#include "oracles.hpp"

using namespace umrn;

TEST_CASE("rational arithmetic is exact") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-1, -2) == Rational(1, 2));
    CHECK(Rational(1, 3) * Rational(3, 7) == Rational(1, 7));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("2/6") == Rational(1, 3));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rng streams are deterministic and distinct") {
    Rng a = Rng::stream(7, 3);
    Rng b = Rng::stream(7, 3);
    Rng c = Rng::stream(7, 4);
    CHECK(a.next() == b.next());
    CHECK(a.next() == b.next());
    CHECK(Rng::stream(7, 3).next() != c.next());
    // below() is within range
    Rng d = Rng::stream(1, 1);
    for (int i = 0; i < 100; ++i) CHECK(d.below(7) < 7);
}

TEST_CASE("mark metric") {
    CHECK(mark_distance({1, 2, 3}, {1, 2, 3}) == Rational(0));
    CHECK(mark_distance({1, 2, 3}, {1, 2, 4}) == Rational(1, 3));
    CHECK(mark_distance({}, {1}) == Rational(1));
    CHECK(mark_distance(scaled_real_mark(kScaledOne), scaled_real_mark(3 * kScaledOne)) ==
          Rational(2));
}

TEST_CASE("ball: radius zero, tree count, whole triangle") {
    auto tree = oracles::regular_tree(3, 5);
    RootedNetwork b0 = ball(tree, 0);
    CHECK(b0.net.vertex_count() == 1);
    CHECK(b0.net.edges.empty());

    RootedNetwork b2 = ball(tree, 2);
    CHECK(b2.net.vertex_count() == 10);  // 1 + 3 + 6
    CHECK(b2.validity_radius == 2);

    RootedNetwork tri{cycle_network(3), 1, kUnboundedRadius};
    RootedNetwork btri = ball(tri, 1);
    CHECK(btri.net.vertex_count() == 3);
    CHECK(btri.net.edges.size() == 3);

    CHECK_THROWS_AS(ball(b2, 3), Error);  // radius exceeds validity
}

TEST_CASE("ball of ball composes") {
    Rng rng(42);
    for (int i = 0; i < 25; ++i) {
        Network g = oracles::random_network(9, rng, true);
        RootedNetwork rooted = component_of(g, 0);
        std::uint32_t r1 = 3, r2 = 1 + static_cast<std::uint32_t>(rng.below(3));
        RootedNetwork a = ball(ball(rooted, r1), std::min(r1, r2));
        RootedNetwork b = ball(rooted, std::min(r1, r2));
        CHECK(canonical_key(a) == canonical_key(b));
    }
}

TEST_CASE("canonical form: basic examples") {
    RootedNetwork single{Network{{Mark{0}}, {}}, 0, kUnboundedRadius};
    auto form = canonical_form(single);
    CHECK(form.key.bytes.size() > 0);
    CHECK(form.key.hex() == canonical_form(single).key.hex());  // deterministic

    // triangle rooted at each vertex: all keys equal
    Network tri = cycle_network(3);
    auto k0 = canonical_key({tri, 0, kUnboundedRadius});
    auto k1 = canonical_key({tri, 1, kUnboundedRadius});
    auto k2 = canonical_key({tri, 2, kUnboundedRadius});
    CHECK(k0 == k1);
    CHECK(k1 == k2);

    // path rooted at ends vs middle
    Network p3 = path_network(3);
    auto ka = canonical_key({p3, 0, kUnboundedRadius});
    auto kb = canonical_key({p3, 1, kUnboundedRadius});
    auto kc = canonical_key({p3, 2, kUnboundedRadius});
    CHECK(ka == kc);
    CHECK(ka != kb);
    CHECK(oracles::brute_force_rooted_isomorphic({p3, 0, kUnboundedRadius},
                                                 {p3, 2, kUnboundedRadius}));
    CHECK(!oracles::brute_force_rooted_isomorphic({p3, 0, kUnboundedRadius},
                                                  {p3, 1, kUnboundedRadius}));
}

TEST_CASE("canonical form: relabeling invariance, 100 permuted copies") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        Network g = oracles::random_network(4 + rng.below(7), rng, true);
        RootedNetwork rooted = component_of(g, static_cast<std::uint32_t>(
                                                   rng.below(g.vertex_count())));
        auto reference = canonical_key(rooted);
        auto ref_form = canonical_form(rooted);
        for (int copy = 0; copy < 10; ++copy) {
            RootedNetwork shuffled = oracles::permuted_copy(rooted, rng);
            CHECK(canonical_key(shuffled) == reference);
        }
        // the relabeled output is itself rooted-isomorphic to the input
        CHECK(oracles::brute_force_rooted_isomorphic(rooted, ref_form.relabeled));
        CHECK(ref_form.relabeled.root == 0);
    }
}

TEST_CASE("canonical form separates non-isomorphic networks") {
    Rng rng(99);
    int checked = 0;
    while (checked < 40) {
        Network g1 = oracles::random_network(6, rng, true);
        Network g2 = oracles::random_network(6, rng, true);
        RootedNetwork a = component_of(g1, 0);
        RootedNetwork b = component_of(g2, 0);
        bool iso = oracles::brute_force_rooted_isomorphic(a, b);
        bool keys_equal = canonical_key(a) == canonical_key(b);
        CHECK(iso == keys_equal);
        ++checked;
    }
}

TEST_CASE("canonical form handles multigraphs, loops, and big symmetric trees") {
    // double edge vs single edge differ
    Network single = path_network(2);
    Network doubled = path_network(2);
    doubled.add_edge(0, 1);
    CHECK(canonical_key({single, 0, kUnboundedRadius}) !=
          canonical_key({doubled, 0, kUnboundedRadius}));

    // loop contributes degree 2 and is visible in the key
    Network loop;
    loop.add_vertex();
    loop.add_edge(0, 0);
    CHECK(degrees(loop)[0] == 2);
    Network bare;
    bare.add_vertex();
    CHECK(canonical_key({loop, 0, kUnboundedRadius}) !=
          canonical_key({bare, 0, kUnboundedRadius}));

    // depth-6 3-regular tree ball: 190 vertices, automorphism group 3 * 2^93
    auto big = oracles::regular_tree(3, 6);
    CHECK(big.net.vertex_count() == 190);
    auto key = canonical_key(big);
    Rng rng(7);
    auto shuffled = oracles::permuted_copy(big, rng);
    CHECK(canonical_key(shuffled) == key);
}

TEST_CASE("rooted distance: identical, vertex vs edge, deep agreement") {
    Network p1;
    p1.add_vertex();
    RootedNetwork single{p1, 0, kUnboundedRadius};
    Network p2 = path_network(2);
    RootedNetwork edge{p2, 0, kUnboundedRadius};

    auto zero = rooted_distance(single, single);
    CHECK(zero.exact);
    CHECK(zero.value == Rational(0));

    auto half = rooted_distance(single, edge);
    CHECK(half.exact);
    CHECK(half.value == Rational(1, 2));

    // depth-6 tree vs depth-8 tree: balls agree to radius 6, so only an
    // upper bound <= 1/7 is certified
    auto t6 = oracles::regular_tree(3, 6);
    auto t8 = oracles::regular_tree(3, 8);
    auto bound = rooted_distance(t6, t8);
    CHECK(!bound.exact);
    CHECK(bound.value <= Rational(1, 7));
}

TEST_CASE("rooted distance: mark tolerance window") {
    // same structure, root marks at scaled-real distance 2: alpha = 1/2
    Network a, b;
    a.add_vertex(scaled_real_mark(0));
    b.add_vertex(scaled_real_mark(2 * kScaledOne));
    auto r = rooted_distance({a, 0, kUnboundedRadius}, {b, 0, kUnboundedRadius});
    CHECK(r.exact);
    CHECK(r.value == Rational(2, 3));  // 1/(1 + 1/2)
}

TEST_CASE("rooted distance: symmetry and ultrametric-style triangle bound") {
    Rng rng(5);
    std::vector<RootedNetwork> pool;
    for (int i = 0; i < 6; ++i) {
        Network g = oracles::random_network(5 + rng.below(3), rng, false);
        pool.push_back(component_of(g, 0));
    }
    for (const auto& x : pool)
        for (const auto& y : pool) {
            auto dxy = rooted_distance(x, y);
            auto dyx = rooted_distance(y, x);
            CHECK(dxy.value == dyx.value);
            CHECK(dxy.value >= Rational(0));
            if (&x == &y) CHECK(dxy.value == Rational(0));
        }
    for (const auto& x : pool)
        for (const auto& y : pool)
            for (const auto& z : pool) {
                auto dxz = rooted_distance(x, z);
                auto dxy = rooted_distance(x, y);
                auto dyz = rooted_distance(y, z);
                if (dxz.exact && dxy.exact && dyz.exact)
                    CHECK(dxz.value <= std::max(dxy.value, dyz.value));
            }
}

TEST_CASE("automorphism orbits: path, triangle, marked path, star") {
    auto p3 = automorphism_orbits(path_network(3));
    CHECK(p3.automorphism_count == 2);
    CHECK(p3.orbits.size() == 2);
    CHECK(p3.orbit_stabilizer_holds());

    auto tri = automorphism_orbits(cycle_network(3));
    CHECK(tri.automorphism_count == 6);
    CHECK(tri.orbits.size() == 1);
    CHECK(tri.orbit_stabilizer_holds());

    Network marked = path_network(3);
    marked.vertex_marks[0] = {1};
    marked.vertex_marks[1] = {2};
    marked.vertex_marks[2] = {3};
    auto m = automorphism_orbits(marked);
    CHECK(m.automorphism_count == 1);
    CHECK(m.orbits.size() == 3);

    auto star = automorphism_orbits(star_network(3));
    CHECK(star.automorphism_count == 6);  // S_3 on the leaves
    CHECK(star.orbits.size() == 2);
    // stabilizer of the center is everything, of a leaf S_2
    for (std::size_t i = 0; i < star.orbits.size(); ++i) {
        if (star.orbits[i].size() == 1) CHECK(star.stabilizer_order[i] == 6);
        if (star.orbits[i].size() == 3) CHECK(star.stabilizer_order[i] == 2);
    }
    CHECK(star.orbit_stabilizer_holds());

    CHECK_THROWS_AS(automorphism_orbits(path_network(20)), Error);  // size cap
}

TEST_CASE("orbit-stabilizer identity on random small networks") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        Network g = oracles::random_network(3 + rng.below(5), rng, rng.next() & 1);
        auto rep = automorphism_orbits(g);
        CHECK(rep.orbit_stabilizer_holds());
        std::size_t total = 0;
        for (auto& orb : rep.orbits) total += orb.size();
        CHECK(total == g.vertex_count());
    }
}

TEST_CASE("network json round trip") {
    Rng rng(3);
    Network g = oracles::random_network(6, rng, true);
    g.edges[0].mu = scaled_real_mark(12345);
    RootedNetwork rooted = component_of(g, 2, 4);
    RootedNetwork back = rooted_network_from_json(to_json_string(rooted));
    CHECK(back.root == rooted.root);
    CHECK(back.validity_radius == rooted.validity_radius);
    CHECK(canonical_key(back) == canonical_key(rooted));

    RootedNetwork untagged = component_of(g, 2);
    RootedNetwork back2 = rooted_network_from_json(to_json_string(untagged));
    CHECK(!back2.truncated());
}

TEST_CASE("canonical keys separate exactly on adversarial marked multigraphs") {
    // parallel edges, loops, asymmetric half-edge marks from a tiny alphabet:
    // key equality must coincide with brute-force rooted isomorphism
    Rng rng(1234);
    auto random_marked_multigraph = [&](std::uint32_t n) {
        Network g;
        for (std::uint32_t v = 0; v < n; ++v)
            g.add_vertex(Mark{static_cast<std::int64_t>(rng.below(2))});
        auto rnd_mark = [&]() { return Mark{static_cast<std::int64_t>(rng.below(2))}; };
        for (std::uint32_t v = 1; v < n; ++v)
            g.add_edge(static_cast<std::uint32_t>(rng.below(v)), v, rnd_mark(), rnd_mark());
        for (std::uint32_t extra = 0; extra < n / 2; ++extra) {
            std::uint32_t u = static_cast<std::uint32_t>(rng.below(n));
            std::uint32_t v = static_cast<std::uint32_t>(rng.below(n));
            g.add_edge(u, v, rnd_mark(), rnd_mark());  // may double up or loop
        }
        return g;
    };
    for (int trial = 0; trial < 300; ++trial) {
        std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.below(4));
        RootedNetwork a = component_of(random_marked_multigraph(n), 0);
        RootedNetwork b = component_of(random_marked_multigraph(n), 0);
        bool keys = canonical_key(a) == canonical_key(b);
        bool iso = oracles::brute_force_rooted_isomorphic(a, b);
        CAPTURE(trial);
        REQUIRE(keys == iso);
        // the isomorphic direction: relabeled copies with orientation flips
        RootedNetwork ap = oracles::permuted_copy(a, rng);
        REQUIRE(canonical_key(ap) == canonical_key(a));
        REQUIRE(oracles::brute_force_rooted_isomorphic(a, ap));
    }
}

TEST_CASE("canonical search respects its node budget") {
    auto big = oracles::regular_tree(3, 6);
    CHECK_THROWS_AS(canonical_form(big, 50), Error);
    CHECK_NOTHROW(canonical_form(big));
}
