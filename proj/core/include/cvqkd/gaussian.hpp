#pragma once

#include <Eigen/Core>

namespace cvqkd {

/// Single-mode Gaussian state as mean vector and covariance matrix in
/// normalized quadratures (vacuum variance 1). In these units a coherent
/// state |x+iy> has mean (2x, 2y), a modulation of variance S^2 per real
/// component adds 4 S^2 to the covariance diagonal, and det(cov) >= 1 is
/// the uncertainty bound.
struct GaussianState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();
};

/// Entropy of a thermal state with mean photon number nbar, in bits:
/// (n+1) log2(n+1) - n log2 n.
double g_function(double nbar);

/// Von Neumann entropy in bits via the symplectic eigenvalue
/// nu = sqrt(det cov); independent of the mean. det(cov) < 1 - 1e-10
/// raises std::invalid_argument (unphysical state).
double gaussian_entropy(const GaussianState& state);

} // namespace cvqkd
