#pragma once

#include <map>

#include "umrn/canonical.hpp"
#include "umrn/rational.hpp"
#include "umrn/sampler.hpp"

namespace umrn {
namespace mtp {

/// Bounded-radius isomorphism-equivariant mass function f(G, x, y) >= 0.
/// Equivariance is the caller's obligation; the built-in constructors below
/// guarantee it by evaluating on canonical keys only.
struct MassTransportFn {
    std::uint32_t radius = 1;
    std::function<Rational(const RootedNetwork&, std::uint32_t, std::uint32_t)> evaluate;
};

/// f given by a pseudo-random lookup on the canonical key of the doubly
/// rooted radius-r ball around (x, y): equivariant by construction. Values
/// in {0, 1/8, ..., 7/8}.
MassTransportFn key_lookup_mtf(std::uint32_t radius, std::uint64_t table_seed);

/// f(G,x,y) = 1 when x ~ y (radius 1, symmetric).
MassTransportFn adjacency_mtf();

/// f(G,x,y) = 1 when x ~ y and deg(y) < deg(x): the simplest asymmetric
/// equivariant mass, good at catching non-unimodular root biasing.
MassTransportFn degree_compare_mtf();

/// Both sides of the Mass-Transport identity on a finite network under
/// uniform rooting, by full enumeration in exact rationals:
/// lhs = (1/n) sum_{o,x} f(G,o,x), rhs = (1/n) sum_{o,x} f(G,x,o).
std::pair<Rational, Rational> verify_mtp_finite(const Network& g, const MassTransportFn& f);

struct MtpTestReport {
    double sent_mean = 0.0;
    double received_mean = 0.0;
    double mean_diff = 0.0;
    double p_value = 1.0;
    std::uint64_t samples = 0;
    nlohmann::json to_json() const;
};

/// Paired Monte Carlo estimates of E[sum_x f(G,o,x)] and E[sum_x f(G,x,o)],
/// with a sign-flip permutation test on the per-draw differences.
MtpTestReport mtp_monte_carlo_test(const RootedSampler& s, const MassTransportFn& f,
                                   std::uint64_t n, std::uint64_t seed,
                                   std::uint32_t permutations = 10000);

/// Checks the fixed-graph root law: under uniform rooting the orbit of x
/// carries mass |orbit(x)|/n, which must equal c^{-1} |Stab(x)|^{-1} with
/// c = sum_i |Stab(o_i)|^{-1} over an orbit section.
struct StabRootReport {
    bool holds = false;
    std::vector<Rational> orbit_mass;       // per orbit, |orbit|/n
    std::vector<Rational> predicted_mass;   // per orbit, c^-1 |Stab|^-1
    std::uint64_t automorphism_count = 0;
};
StabRootReport stab_root_check(const Network& g);

struct EmpiricalBallDistribution {
    std::uint32_t radius = 0;
    std::map<std::string, std::uint64_t> counts;  // canonical key bytes -> count
    std::uint64_t total = 0;
};

EmpiricalBallDistribution ball_distribution(const RootedSampler& s, std::uint32_t r,
                                            std::uint64_t n, std::uint64_t seed);

double tv_distance(const EmpiricalBallDistribution& a, const EmpiricalBallDistribution& b);

/// Exact isoperimetry report for a finite network and an open-edge predicate
/// on the half-edge mark pair. n(x) counts closed half-edges at x, K(o) is
/// the open cluster of the root.
struct IsoperimetryReport {
    Rational boundary_cluster_mean;  // E[n(K(o))/|K(o)|]
    Rational boundary_root_mean;     // E[n(o)]          (lemma: equal to the above)
    Rational alpha_term;             // E[deg(o) - n(o)]
    Rational expected_degree;        // E[deg(o)]
    bool lemma_holds = false;
    bool identity_holds = false;     // boundary + alpha == expdeg
};
IsoperimetryReport isoperimetry_report(
    const Network& g, const std::function<bool(const Mark&, const Mark&)>& open_marks);

/// Upper bound on iota_E by a grid search over Bernoulli thresholds of a
/// standard coupling: the true infimum ranges over all finite-component
/// percolations and is not computable, so this is an upper bound only.
/// Thresholds whose open subgraph has a giant component are skipped.
struct IotaUpperBound {
    double value = 0.0;
    double best_threshold = 0.0;
    std::vector<double> grid;
    std::vector<double> boundary_means;  // per threshold, E[n(o)] (or -1 when skipped)
};
IotaUpperBound iota_upper_bound(const Network& g, const std::vector<double>& threshold_grid,
                                std::uint64_t seed);

/// Expected root degree with a confidence interval; flags a violation of the
/// expdeg >= 2 bound for samplers claiming an infinite-graph measure.
struct ExpdegReport {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t samples = 0;
    bool applicable = false;     // sampler tagged as an infinite-graph truncation
    bool violates_floor = false; // mean < 2 by more than 3 se
    nlohmann::json to_json() const;
};
ExpdegReport expdeg_floor_check(const RootedSampler& s, std::uint64_t n, std::uint64_t seed);

}  // namespace mtp
}  // namespace umrn
