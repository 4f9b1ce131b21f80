#pragma once

#include <Eigen/Core>

#include "cvqkd/coherent.hpp"

namespace cvqkd {

/// Density matrix in a truncated number basis. Finished states are
/// Hermitian within 1e-12, have trace within the truncation budget of 1,
/// and are positive semidefinite up to -1e-10 on the spectrum.
struct FockDensityMatrix {
    Eigen::MatrixXcd entries;

    static FockDensityMatrix zero(int cutoff);

    int cutoff() const { return static_cast<int>(entries.rows()); }
    double trace_real() const { return entries.real().trace(); }
    double hermiticity_error() const;

    /// Rescales to unit trace; returns the discarded mass 1 - trace.
    double renormalize();
};

/// rho += weight |alpha><alpha| restricted to the cutoff. The outer
/// product keeps Hermiticity exact in floating point.
void accumulate_coherent_projector(FockDensityMatrix& rho, Amplitude alpha,
                                   double weight);

/// Von Neumann entropy -sum lambda log2 lambda in bits. Eigenvalues below
/// 1e-14 are treated as zero; values below -1e-10 or a Hermiticity defect
/// beyond 1e-12 raise std::invalid_argument.
double fock_entropy(const FockDensityMatrix& rho);

namespace detail {
/// Entropy in bits of a set of eigenvalues (clamping as in fock_entropy).
double entropy_from_eigenvalues(const Eigen::VectorXd& eigenvalues);
} // namespace detail

} // namespace cvqkd
