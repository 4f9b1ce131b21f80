#pragma once

#include "cvqkd/counts.hpp"
#include "cvqkd/fock.hpp"
#include "cvqkd/gaussian.hpp"

namespace cvqkd {

/// The adversary's unconditional state: the modulation-averaged mixture
/// of tapped coherent states, in both a number-basis and a Gaussian
/// representation (the two are cross-validated in the test suite).
struct UnconditionalEveState {
    FockDensityMatrix fock;
    GaussianState gaussian;
    double discarded_mass = 0.0;
};

UnconditionalEveState rho_e_unconditional(const ProtocolParams& params,
                                          const QuadratureGrid& grid,
                                          int cutoff);

/// Holevo information between sender and adversary when the receiver
/// homodynes one quadrature: S[rho_E] - S[rho_E|x], with the conditional
/// a coherent mixture along the unused quadrature (entropy independent
/// of x).
double holevo_ae_hd(const ProtocolParams& params);

/// Photocounting case: the conditional states are pure, so the Holevo
/// information equals S[rho_E] = g(2 (1-eta) sigma2).
double holevo_ae_pnr(const ProtocolParams& params);

/// Adversary-receiver Holevo bound for the homodyne protocol, from
/// Bayesian conditioning of the modulation on the homodyne outcome
/// (posterior variance sigma2 / (1 + 4 eta sigma2)).
double holevo_eb_hd(const ProtocolParams& params);

/// Adversary state conditioned on the receiver's photocount pair (n,m):
/// the posterior-weighted coherent mixture, trace-renormalized after
/// truncation. Throws std::runtime_error when p(n,m) < 1e-300 (caller
/// skips such cells).
FockDensityMatrix conditional_eve_state_pnr(int n, int m,
                                            const ProtocolParams& params,
                                            const QuadratureGrid& grid,
                                            int cutoff);

struct HolevoEbResult {
    double bits = 0.0;
    /// Count mass not covered by the processed cells (support tail plus
    /// skipped negligible cells).
    double discarded_mass = 0.0;
    /// One-sided bound on the contribution of that mass: mass * log2(cutoff).
    double error_bound_bits = 0.0;
    bool saturated = false;
};

/// chi(E;B) = S[rho_E] - sum p(n,m) S[rho_E|(n,m)] over the support.
HolevoEbResult holevo_eb_pnr(const ProtocolParams& params,
                             const QuadratureGrid& grid,
                             const CountSupport& support, int cutoff);

/// Basis size for the adversary's coherent mixtures: smallest dimension
/// capturing the grid-averaged photon-number law of the tapped ensemble
/// within the policy's tail mass, padded by the safety factor.
CutoffResult eve_state_cutoff(const ProtocolParams& params,
                              const QuadratureGrid& grid,
                              const TruncationPolicy& policy);

/// sum_{n,m} p(n,m) rho_E|(n,m) over the support (cells below cell_floor
/// marginal mass are skipped). Reconstructs rho_E up to truncation; used
/// to validate the conditional-state machinery.
FockDensityMatrix reconstruct_rho_e_from_conditionals(
    const ProtocolParams& params, const QuadratureGrid& grid,
    const CountSupport& support, int cutoff, double cell_floor = 1e-13);

} // namespace cvqkd
