#include "umrn/spectral.hpp"

#include <cmath>

namespace umrn {
namespace walk {

WeightedOperator laplacian_operator(const Network& g, const std::vector<double>& edge_weights,
                                    std::uint32_t max_vertices) {
    const std::uint32_t n = g.vertex_count();
    if (n > max_vertices)
        throw Error("size-cap-exceeded", "dense spectral computations capped at " +
                                             std::to_string(max_vertices) + " vertices");
    if (edge_weights.size() != g.edges.size())
        throw Error("invalid-weights", "one weight per edge required");
    WeightedOperator w;
    w.laplacian = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        double c = edge_weights[i];
        if (!std::isfinite(c) || c < 0.0)
            throw Error("nonfinite-weight", "edge weights must be finite and nonnegative");
        if (e.u == e.v) continue;  // loops cancel in the Laplacian
        w.laplacian(e.u, e.v) -= c;
        w.laplacian(e.v, e.u) -= c;
        w.laplacian(e.u, e.u) += c;
        w.laplacian(e.v, e.v) += c;
    }
    return w;
}

Eigen::MatrixXd heat_kernel(const WeightedOperator& w, double t) {
    if (t < 0.0) throw Error("invalid-time", "heat kernel requires t >= 0");
    const auto n = w.laplacian.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.laplacian);
    Eigen::VectorXd factors = (-t * es.eigenvalues().array()).exp();
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            double acc = 0.0;
            for (Eigen::Index k = 0; k < n; ++k) acc += factors(k) * v(i, k) * v(j, k);
            p(i, j) = acc;
            p(j, i) = acc;
        }
    return p;
}

double average_return_probability(const WeightedOperator& w, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.laplacian,
                                                      Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        s += std::exp(-t * es.eigenvalues()(k));
    return s / static_cast<double>(w.laplacian.rows());
}

double spectral_trace(const std::vector<WeightedOperator>& ensemble,
                      const std::function<double(double)>& phi) {
    if (ensemble.empty()) throw Error("empty-ensemble", "spectral trace of empty ensemble");
    double total = 0.0;
    for (const WeightedOperator& w : ensemble) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.laplacian,
                                                          Eigen::EigenvaluesOnly);
        double s = 0.0;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            double val = phi(es.eigenvalues()(k));
            if (!std::isfinite(val))
                throw Error("spectral-range-error", "phi not finite on the spectrum");
            s += val;
        }
        total += s / static_cast<double>(w.laplacian.rows());
    }
    return total / static_cast<double>(ensemble.size());
}

bool ReturnComparisonReport::holds(double tolerance) const {
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (trace_light[i] < trace_heavy[i] - tolerance) return false;
    return true;
}

nlohmann::json ReturnComparisonReport::to_json() const {
    return {{"t", t_grid}, {"trace_light", trace_light}, {"trace_heavy", trace_heavy}};
}

ReturnComparisonReport return_comparison(const Network& g, const std::vector<double>& c1,
                                         const std::vector<double>& c2,
                                         const std::vector<double>& t_grid) {
    if (c1.size() != g.edges.size() || c2.size() != g.edges.size())
        throw Error("invalid-weights", "one weight per edge required");
    for (std::size_t i = 0; i < c1.size(); ++i)
        if (c1[i] > c2[i])
            throw Error("coupling-violation",
                        "c1 must be dominated by c2 on every edge (edge " +
                            std::to_string(i) + ")");
    WeightedOperator a1 = laplacian_operator(g, c1);
    WeightedOperator a2 = laplacian_operator(g, c2);
    ReturnComparisonReport rep;
    rep.t_grid = t_grid;
    for (double t : t_grid) {
        rep.trace_light.push_back(average_return_probability(a1, t));
        rep.trace_heavy.push_back(average_return_probability(a2, t));
    }
    return rep;
}

}  // namespace walk
}  // namespace umrn
