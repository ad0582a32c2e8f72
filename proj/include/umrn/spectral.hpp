#pragma once

#include <functional>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "umrn/network.hpp"

namespace umrn {
namespace walk {

/// Weighted network Laplacian: off-diagonal -c(e), diagonal chosen for zero
/// row sums. The heat semigroup is P_t = e^{-At}.
struct WeightedOperator {
    Eigen::MatrixXd laplacian;

    std::uint32_t size() const { return static_cast<std::uint32_t>(laplacian.rows()); }
};

/// Builds A from per-edge weights; loops cancel in the Laplacian and are
/// ignored. Throws nonfinite-weight on bad rates and size-cap beyond
/// max_vertices.
WeightedOperator laplacian_operator(const Network& g, const std::vector<double>& edge_weights,
                                    std::uint32_t max_vertices = 2000);

/// P_t = e^{-At} via dense symmetric eigendecomposition; built symmetric
/// entry-by-entry so that P == P^T exactly.
Eigen::MatrixXd heat_kernel(const WeightedOperator& w, double t);

/// (1/n) tr e^{-At} directly from the spectrum.
double average_return_probability(const WeightedOperator& w, double t);

/// Average of phi over the spectrum: (1/n) tr phi(A), ensemble-averaged with
/// uniform network weights (the finite trace of the operator algebra).
double spectral_trace(const std::vector<WeightedOperator>& ensemble,
                      const std::function<double(double)>& phi);

struct ReturnComparisonReport {
    std::vector<double> t_grid;
    std::vector<double> trace_light;  // (1/n) tr e^{-A1 t}
    std::vector<double> trace_heavy;  // (1/n) tr e^{-A2 t}
    bool holds(double tolerance = 1e-10) const;
    nlohmann::json to_json() const;
};

/// Monotonicity of return probabilities under the coupled weight increase
/// c1(e) <= c2(e): the light trace dominates. Throws coupling-violation if
/// c1 > c2 anywhere.
ReturnComparisonReport return_comparison(const Network& g, const std::vector<double>& c1,
                                         const std::vector<double>& c2,
                                         const std::vector<double>& t_grid);

}  // namespace walk
}  // namespace umrn
