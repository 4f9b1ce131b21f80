#include "cvqkd/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {
constexpr double kHermTol = 1e-12;
constexpr double kEigenvalueClamp = 1e-14;
constexpr double kNegativeEigenvalueTol = -1e-10;
} // namespace

FockDensityMatrix FockDensityMatrix::zero(int cutoff) {
    if (cutoff < 1) {
        throw std::invalid_argument("FockDensityMatrix: cutoff must be >= 1");
    }
    return FockDensityMatrix{Eigen::MatrixXcd::Zero(cutoff, cutoff)};
}

double FockDensityMatrix::hermiticity_error() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double FockDensityMatrix::renormalize() {
    const double tr = trace_real();
    if (!(tr > 0.0)) {
        throw std::runtime_error("FockDensityMatrix: non-positive trace");
    }
    entries /= tr;
    return 1.0 - tr;
}

void accumulate_coherent_projector(FockDensityMatrix& rho, Amplitude alpha,
                                   double weight) {
    if (!(weight >= 0.0)) {
        throw std::invalid_argument("accumulate_coherent_projector: weight must be >= 0");
    }
    if (weight == 0.0) return;
    const Eigen::VectorXcd c = coherent_fock_amplitudes(alpha, rho.cutoff());
    rho.entries.noalias() += weight * (c * c.adjoint());
}

namespace detail {

double entropy_from_eigenvalues(const Eigen::VectorXd& eigenvalues) {
    double bits = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double lambda = eigenvalues(i);
        if (lambda < kNegativeEigenvalueTol) {
            throw std::invalid_argument(
                "fock_entropy: eigenvalue below the positivity tolerance");
        }
        if (lambda < kEigenvalueClamp) continue;
        bits -= lambda * std::log2(lambda);
    }
    return bits;
}

} // namespace detail

double fock_entropy(const FockDensityMatrix& rho) {
    if (rho.hermiticity_error() > kHermTol) {
        throw std::invalid_argument("fock_entropy: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("fock_entropy: eigensolver failed");
    }
    return detail::entropy_from_eigenvalues(solver.eigenvalues());
}

} // namespace cvqkd
