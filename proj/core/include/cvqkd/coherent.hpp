#pragma once

#include <Eigen/Core>
#include <complex>

namespace cvqkd {

/// Coherent amplitude alpha = x + iy; |alpha|^2 is the mean photon number.
using Amplitude = std::complex<double>;

/// Number-basis coefficients c_n = e^{-|a|^2/2} a^n / sqrt(n!) for
/// n < cutoff, evaluated in log-magnitude/phase form so large |a| does
/// not overflow. sum |c_n|^2 <= 1, with the deficit equal to the
/// Poisson(|a|^2) tail beyond the cutoff.
Eigen::VectorXcd coherent_fock_amplitudes(Amplitude alpha, int cutoff);

} // namespace cvqkd
