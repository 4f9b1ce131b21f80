#pragma once

#include <utility>

#include "cvqkd/coherent.hpp"

namespace cvqkd {

/// Experiment configuration: Gaussian modulation variance per quadrature
/// (sigma2), local-oscillator amplitude beta and phase phi, and the
/// overall channel transmissivity eta (all losses lumped into one beam
/// splitter before detection).
struct ProtocolParams {
    double sigma2 = 2.0;
    double beta = 2.0;
    double phi = 0.0;
    double eta = 1.0;

    void validate() const;

    /// Same channel seen from the tapped arm (eta -> 1 - eta).
    ProtocolParams complement() const;
};

/// Mean photocounts at the two detectors behind the balanced beam
/// splitter. mu1 + mu2 == eta (x^2 + y^2) + beta^2.
struct PhotocountMeans {
    double mu1 = 0.0;
    double mu2 = 0.0;
};

/// Density of the zero-mean modulation N(0, sigma2) at z.
/// sigma2 == 0 raises std::invalid_argument (degenerate distribution).
double gaussian_modulation_pdf(double z, double sigma2);

/// Balanced beam splitter on coherent inputs:
/// (alpha, beta e^{i phi}) -> ((alpha + lo)/sqrt2, (lo - alpha)/sqrt2).
std::pair<Amplitude, Amplitude> bs_output_amplitudes(Amplitude alpha,
                                                     double beta, double phi);

/// Mean photocounts for input |x+iy> after loss eta, mixed with the LO.
PhotocountMeans photocount_means(double x, double y,
                                 const ProtocolParams& params);

/// Joint density of (x, y, n, m): Gaussian modulation times the two
/// conditionally independent Poisson photocount laws.
double joint_density(double x, double y, int n, int m,
                     const ProtocolParams& params);

/// Amplitude of the tapped fraction reaching the adversary:
/// sqrt(1-eta) (x + iy).
Amplitude eve_tap_amplitude(double x, double y, double eta);

} // namespace cvqkd
