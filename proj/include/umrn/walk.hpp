#pragma once

#include "umrn/rational.hpp"
#include "umrn/sampler.hpp"

namespace umrn {
namespace walk {

struct Trajectory {
    std::vector<std::uint32_t> positions;  // w_0 .. w_n
    std::vector<double> jump_times;        // empty for discrete time
};

/// Simple random walk on a materialized rooted network; transition
/// probability proportional to edge multiplicity. Throws truncation-escape
/// if the walk would leave the validity radius.
Trajectory srw_trajectory(const RootedNetwork& g, std::uint32_t steps, std::uint64_t seed);

/// One-step rule for walks over a WalkSpace; the default is simple random walk.
using Stepper = std::function<std::uint32_t(WalkSpace&, std::uint32_t, Rng&)>;
Stepper srw_stepper();
/// Control with an inward drift: step to the depth-decreasing neighbor with
/// probability q, else uniformly to one of the others. Not degree-reversible.
Stepper drift_stepper(double q);

/// The sampler reweighted by the degree of the root (rejection against the
/// declared maximum root degree).
RootedSampler degree_biased(const RootedSampler& s);

struct PairedKeyReport {
    double tv = 0.0;
    double p_value = 1.0;
    std::uint64_t samples = 0;
    nlohmann::json to_json() const;
};

/// Distribution of the canonical r-ball at w_0 versus at w_k under the
/// degree-biased sampler (bias=false runs the walk from the raw sampler, as
/// a negative control). Permutation test swaps the two keys per draw.
PairedKeyReport stationarity_test(const RootedSampler& s, std::uint32_t r, std::uint32_t k,
                                  std::uint64_t n, std::uint64_t seed, bool bias = true,
                                  const Stepper& step = srw_stepper(),
                                  std::uint32_t permutations = 10000);

/// Distribution of the ordered pair (ball key at w_0, ball key at w_1)
/// against its swap under degree biasing.
PairedKeyReport reversibility_test(const RootedSampler& s, std::uint32_t r, std::uint64_t n,
                                   std::uint64_t seed, bool bias = true,
                                   const Stepper& step = srw_stepper(),
                                   std::uint32_t permutations = 10000);

/// Exact TV distance between the canonical r-ball law at w_0 and at w_k for
/// simple random walk on a finite network started from the degree-biased
/// root (0 by stationarity; rational arithmetic throughout).
Rational exact_stationarity_tv(const Network& g, std::uint32_t r, std::uint32_t k);

/// Exact check that M(i,j) = #edges(i,j) / 2|E| is symmetric, i.e. the
/// degree measure is reversible for SRW on finite networks.
bool pair_matrix_symmetric(const Network& g);

/// The canonical reversible environment: F(x) = sum_{y~x} 1/deg(y),
/// p(x,y) = 1/(F(x) deg(y)) per incident edge, nu(x) = F(x)/deg(x)/Z.
struct Environment {
    std::vector<std::vector<Rational>> transition;  // dense p(x,y)
    std::vector<Rational> bias;                     // nu(x), sums to 1
    std::vector<Rational> F;
    Rational Z;
    bool rows_sum_to_one = false;
    bool detailed_balance = false;
};
Environment canonical_environment(const RootedNetwork& g);

struct SpeedReport {
    double mean = 0.0;
    double se = 0.0;
    std::uint32_t steps = 0;
    std::uint32_t trials = 0;
    nlohmann::json to_json() const;
};

/// Monte Carlo dist(w_0, w_n)/n under the degree-biased sampler.
SpeedReport speed_estimate(const RootedSampler& s, std::uint32_t steps, std::uint32_t trials,
                           std::uint64_t seed);

/// Speed of simple random walk on unimodular trees: 1 - 2/mean_degree.
double tree_speed_formula(double mean_degree);

struct CtrwResult {
    Trajectory trajectory;
    bool flagged = false;        // POSSIBLE_EXPLOSION evidence, never proof
    std::uint64_t jumps = 0;
    double elapsed = 0.0;
    double last_decade_holding = 0.0;  // time spent in the last 90% .. 100% of jumps
};

/// Minimal continuous-time walk with exponential clocks at rate = sum of
/// incident weights. Flags POSSIBLE_EXPLOSION when `cap` jumps occur before
/// t_max; the shrinkage of holding times is reported as a diagnostic.
CtrwResult ctrw_simulate(const RootedNetwork& g,
                         const std::vector<double>& edge_weights, double t_max,
                         std::uint64_t cap, std::uint64_t seed);

}  // namespace walk
}  // namespace umrn
