#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "umrn/gen.hpp"
#include "umrn/mtp.hpp"
#include "umrn/perc.hpp"
#include "oracles.hpp"

using namespace umrn;
using namespace umrn::perc;

namespace {

// branching survival oracle for the 3-regular tree: q_d = P(one child edge
// chain reaches depth d), survival = 1 - (1 - q_R)^3 from the root's 3 edges
double tree_survival(double p, std::uint32_t R) {
    double q = p;  // depth 1
    for (std::uint32_t d = 2; d <= R; ++d) q = p * (1.0 - (1.0 - q) * (1.0 - q));
    return 1.0 - std::pow(1.0 - q, 3.0);
}

}  // namespace

TEST_CASE("coupling: extremes and the Bernoulli mean") {
    Network g = cycle_network(8);
    CoupledPercolation c = couple(g, 5);
    auto all = cluster_of_root(c, 0, 1.0);
    CHECK(all.vertices.size() == 8);
    auto none = cluster_of_root(c, 0, 0.0);
    CHECK(none.vertices == std::vector<std::uint32_t>{0});

    // empirical open fraction at p = 0.3
    const std::uint64_t n = 3000;
    std::uint64_t open = 0;
    std::uint64_t total = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
        CoupledPercolation ci = couple(g, s);
        for (std::uint64_t label : ci.labels) {
            if (label < p_threshold(0.3)) ++open;
            ++total;
        }
    }
    double frac = static_cast<double>(open) / static_cast<double>(total);
    CHECK(std::fabs(frac - 0.3) <
          3 * std::sqrt(0.3 * 0.7 / static_cast<double>(total)));
}

TEST_CASE("cluster of root: explicit labels on P3") {
    CoupledPercolation c;
    c.net = path_network(3);
    c.labels = {p_threshold(0.3), p_threshold(0.7)};  // first edge open at p=0.5
    auto rep = cluster_of_root(c, 0, 0.5);
    CHECK(rep.vertices == std::vector<std::uint32_t>{0, 1});
    CHECK(rep.reach_radius == 1);
}

TEST_CASE("coupled monotonicity holds exactly") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        Network g = oracles::random_network(4 + rng.below(10), rng, false);
        CoupledPercolation c = couple(g, rng.next());
        CHECK(monotonicity_check(c, 0, {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}));
    }
}

TEST_CASE("minimax reach labels make survival monotone per draw") {
    Rng rng(11);
    Network g = oracles::random_network(40, rng, false, 1.0, 0.0);
    CoupledPercolation c = couple(g, 3);
    // survival at p is exactly [minimax < threshold(p)], monotone in p
    std::uint64_t m2 = minimax_reach_label(g, c.labels, 0, 2);
    std::uint64_t m3 = minimax_reach_label(g, c.labels, 0, 3);
    CHECK(m2 <= m3);  // antitone in R: farther spheres are harder
}

TEST_CASE("pc estimate: line survival oracle") {
    // reach probability on the two-sided line: 1 - (1 - p^R)^2 exactly
    auto line = gen::line_sampler(6);
    std::vector<double> grid{0.3, 0.5, 0.7, 0.9, 1.0};
    auto curve = pc_estimate(line, 6, grid, 6000, 13);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double p = grid[i];
        double expect = 1.0 - std::pow(1.0 - std::pow(p, 6.0), 2.0);
        double sigma = std::sqrt(std::max(expect * (1 - expect), 1e-6) / 6000.0);
        CHECK(std::fabs(curve.survival[i] - expect) < 4 * sigma + 1e-9);
    }
    CHECK(curve.survival.back() == doctest::Approx(1.0));

    // survival is nondecreasing in p (coupled, exact) and antitone in R
    for (std::size_t i = 1; i < curve.survival.size(); ++i)
        CHECK(curve.survival[i] >= curve.survival[i - 1]);
    auto shorter = pc_estimate(line, 3, grid, 6000, 13);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(shorter.survival[i] + 1e-12 >= curve.survival[i]);
}

TEST_CASE("pc estimate: 3-regular tree crossing near 1/2") {
    auto tree = gen::ugw_sampler(gen::delta(2), 9);
    std::vector<double> grid;
    for (double p = 0.30; p <= 0.851; p += 0.05) grid.push_back(p);
    auto curve = pc_estimate(tree, 9, grid, 3000, 17);
    // pointwise agreement with the branching oracle
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double expect = tree_survival(grid[i], 9);
        double sigma = std::sqrt(std::max(expect * (1 - expect), 1e-6) / 3000.0);
        CHECK(std::fabs(curve.survival[i] - expect) < 4 * sigma + 1e-9);
    }
    // the crossing estimate matches the oracle's interpolated crossing
    double top = tree_survival(grid.back(), 9);
    double oracle_cross = grid.back();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s1 = tree_survival(grid[i], 9);
        if (s1 >= 0.5 * top) {
            double s0 = i == 0 ? 0.0 : tree_survival(grid[i - 1], 9);
            oracle_cross = i == 0 ? grid[0]
                                  : grid[i - 1] + (grid[i] - grid[i - 1]) *
                                                      (0.5 * top - s0) / (s1 - s0);
            break;
        }
    }
    CHECK(std::fabs(curve.threshold_estimate - oracle_cross) < 0.04);
}

TEST_CASE("cluster sampler: identity at p=1, singleton at p=0, thinning law") {
    auto tri = gen::uniform_root(cycle_network(3));
    auto full = cluster_sampler(tri, 1.0);
    CHECK(canonical_key(full.draw(1, 0)) == canonical_key(tri.draw(1, 0)));

    auto empty = cluster_sampler(tri, 0.0);
    CHECK(empty.draw(1, 0).net.vertex_count() == 1);

    // root cluster of the 3-regular tree at p: radius-1 degree is Binomial(3, p)
    auto tree = gen::ugw_sampler(gen::delta(2), 4);
    auto cl = cluster_sampler(tree, 0.4);
    const std::uint64_t n = 4000;
    std::array<std::uint64_t, 4> counts{0, 0, 0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
        RootedNetwork g = cl.draw(23, i);
        counts[degrees(g.net)[g.root]] += 1;
    }
    for (std::uint32_t k = 0; k <= 3; ++k) {
        double expect = std::pow(0.4, k) * std::pow(0.6, 3.0 - k);
        if (k == 1 || k == 2) expect *= 3;
        double sigma = std::sqrt(expect * (1 - expect) / static_cast<double>(n));
        CHECK(std::fabs(counts[k] / static_cast<double>(n) - expect) < 4 * sigma);
    }
}

TEST_CASE("cluster sampler passes the MTP test") {
    auto tree = gen::ugw_sampler(gen::OffspringDistribution::parse("0:0.2,2:0.8"), 4);
    auto cl = cluster_sampler(tree, 0.6);
    auto rep = mtp::mtp_monte_carlo_test(cl, mtp::key_lookup_mtf(1, 5), 3000, 29, 2000);
    CHECK(rep.p_value > 0.01);
}
