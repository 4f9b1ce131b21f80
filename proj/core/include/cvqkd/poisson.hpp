#pragma once

#include <vector>

namespace cvqkd {

/// P(N = n) for N ~ Poisson(mu), evaluated in log space.
/// poisson_pmf(0, 0) == 1 (degenerate distribution at zero).
double poisson_pmf(int n, double mu);

/// ln P(N = n); -inf when the mass is exactly zero (mu == 0, n > 0).
double poisson_log_pmf(int n, double mu);

/// P(N <= n).
double poisson_cdf(int n, double mu);

/// pmf for n = 0..n_max inclusive, by upward recurrence (switches to
/// per-term log evaluation for large mu where exp(-mu) underflows).
void fill_poisson_pmf(double mu, int n_max, std::vector<double>& out);

/// Shannon entropy of Poisson(mu) in bits, summed term by term until the
/// captured mass is within tail_mass of 1.
double poisson_entropy_bits(double mu, double tail_mass = 1e-13);

} // namespace cvqkd
