#pragma once

namespace cvqkd {

/// How aggressively number-basis objects (Fock matrices, photocount
/// supports) are truncated. tail_mass is the probability mass allowed
/// beyond a cutoff, safety_factor pads the resulting index.
struct TruncationPolicy {
    double tail_mass = 1e-10;
    int max_cutoff = 256;
    double safety_factor = 1.2;

    void validate() const;
};

struct CutoffResult {
    int value = 0;
    /// True when the policy cap was hit; callers should surface this.
    bool saturated = false;
};

/// Smallest basis size covering Poisson(mu_max) up to the policy's tail
/// mass, padded by the safety factor. Never below 8, capped at
/// max_cutoff (with the saturation flag set).
CutoffResult choose_cutoff(double mu_max, const TruncationPolicy& policy);

/// ln(n!) from a cumulative table (exact summation, no Stirling).
double log_factorial(int n);

} // namespace cvqkd
