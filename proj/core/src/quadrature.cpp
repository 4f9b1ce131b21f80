#include "cvqkd/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cvqkd {

void gauss_hermite(int order, std::vector<double>& nodes,
                   std::vector<double>& weights) {
    if (order < 1) {
        throw std::invalid_argument("gauss_hermite: order must be >= 1");
    }
    // Golub-Welsch on the Jacobi matrix of the (physicists') Hermite
    // recurrence: zero diagonal, off-diagonal sqrt(k/2).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
    for (int k = 1; k < order; ++k) {
        sub(k - 1) = std::sqrt(0.5 * k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("gauss_hermite: eigensolver failed");
    }

    nodes.resize(order);
    weights.resize(order);
    for (int i = 0; i < order; ++i) {
        nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        weights[i] = v0 * v0; // already normalized: weights sum to 1
    }
    // Enforce the exact +/- symmetry of the rule.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double t = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -t;
        nodes[j] = t;
        const double w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if (order % 2 == 1) nodes[order / 2] = 0.0;
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (double& w : weights) w /= sum;
}

QuadratureGrid build_grid(double sigma2, int order) {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("build_grid: sigma2 must be > 0");
    }
    if (order < 8 || order > 256 || order % 2 != 0) {
        throw std::invalid_argument("build_grid: order must be even and in [8, 256]");
    }
    std::vector<double> t, w;
    gauss_hermite(order, t, w);

    const double scale = std::sqrt(2.0 * sigma2);
    QuadratureGrid grid;
    grid.order = order;
    grid.sigma2 = sigma2;
    grid.nodes.reserve(static_cast<std::size_t>(order) * order);
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            grid.nodes.push_back({scale * t[i], scale * t[j], w[i] * w[j]});
        }
    }
    return grid;
}

} // namespace cvqkd
