#pragma once

// Independent validation routes for the entropy machinery. Everything
// here is built from number-basis accumulation and direct summation only,
// so it can vouch for the Gaussian closed forms without sharing code
// paths with them.

#include <Eigen/Core>

#include "cvqkd/fock.hpp"

namespace cvqkd::checks {

/// Thermal state with mean photon number nbar on a truncated basis.
FockDensityMatrix thermal_state(double nbar, int cutoff);

/// Entropy of the truncated thermal state by direct summation of the
/// geometric distribution (bits).
double thermal_entropy_direct(double nbar, int cutoff);

/// Eigenvalues (1 +- |<a|-a>|)/2 of the balanced two-state mixture of
/// |alpha> and |-alpha>, from the 2x2 Gram matrix.
Eigen::Vector2d two_coherent_mixture_eigenvalues(Amplitude alpha);

/// Entropy of the adversary state conditioned on one modulation
/// component: fixed x, Gaussian mixture over y, accumulated on a 1D
/// Gauss-Hermite rule in the number basis.
double eve_fixed_x_entropy_fock(double sigma2, double eta, double x_fixed,
                                int order, int cutoff);

/// Entropy of the adversary state after the receiver announces a
/// homodyne outcome b: 2D prior-grid accumulation with importance
/// weights N(b; 2 sqrt(eta) x, 1). No posterior-covariance algebra.
double eve_posterior_entropy_fock(double sigma2, double eta, double outcome,
                                  int order, int cutoff);

/// Entropy of the unconditional adversary state by 2D accumulation.
double eve_unconditional_entropy_fock(double sigma2, double eta, int order,
                                      int cutoff);

} // namespace cvqkd::checks
