#pragma once

#include "cvqkd/counts.hpp"

namespace cvqkd {

/// Homodyne mutual information between sender and receiver:
/// 0.5 log2(1 + 4 eta sigma2).
double hd_mutual_info_ab(double sigma2, double eta);

/// Sender-adversary homodyne information: the eta -> 1-eta mirror.
double hd_mutual_info_ae(double sigma2, double eta);

/// Adversary-receiver homodyne information:
/// 0.5 log2[(1+4 eta s)(1+4(1-eta) s)/(1+4 s)].
double hd_mutual_info_eb(double sigma2, double eta);

/// Mutual information in bits between the modulation pair (x,y) and the
/// photocount pair (n,m), computed as the quadrature average of the KL
/// divergence from the conditional product-Poisson law to the count
/// marginal (identical to the joint-entropy form, without cancellation).
double pnr_mutual_info(const ProtocolParams& params, const QuadratureGrid& grid,
                       const CountSupport& support);

/// Convenience overload: builds the grid and support internally.
double pnr_mutual_info(const ProtocolParams& params, int grid_order,
                       const TruncationPolicy& policy);

/// Mutual information between the receiver's count pair (transmissivity
/// eta) and the adversary's count pair (transmissivity 1-eta, same LO),
/// the four counts being conditionally independent given (x,y).
double pnr_mutual_info_eb(const ProtocolParams& params,
                          const QuadratureGrid& grid,
                          const CountSupport& support_b,
                          const CountSupport& support_e);

/// LO amplitude at which the lossless photocounting mutual information
/// crosses the homodyne value 0.5 log2(1+4 sigma2): bisection on a
/// bracket found by doubling from beta = 0.25. Throws std::runtime_error
/// if no sign change is found up to beta = 64.
double beta_threshold(double sigma2, double tol, int grid_order,
                      const TruncationPolicy& policy);

} // namespace cvqkd
