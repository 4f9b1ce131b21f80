#include "cvqkd/gaussian.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace cvqkd {

double g_function(double nbar) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw std::invalid_argument("g_function: nbar must be finite and >= 0");
    }
    if (nbar == 0.0) return 0.0;
    return (nbar + 1.0) * std::log2(nbar + 1.0) - nbar * std::log2(nbar);
}

double gaussian_entropy(const GaussianState& state) {
    const Eigen::Matrix2d& cov = state.cov;
    if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-9) {
        throw std::invalid_argument("gaussian_entropy: covariance is not symmetric");
    }
    const double det = cov.determinant();
    if (det < 1.0 - 1e-10) {
        throw std::invalid_argument(
            "gaussian_entropy: det(cov) < 1, state violates the uncertainty bound");
    }
    const double nu = std::sqrt(det < 1.0 ? 1.0 : det);
    return g_function(0.5 * (nu - 1.0));
}

} // namespace cvqkd
