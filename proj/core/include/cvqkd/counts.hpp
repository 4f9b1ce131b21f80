#pragma once

#include <Eigen/Core>

#include "cvqkd/channel.hpp"
#include "cvqkd/quadrature.hpp"
#include "cvqkd/truncation.hpp"

namespace cvqkd {

/// Finite photocount support: the downward-closed rectangle
/// [0, n_max] x [0, m_max]. captured_mass is the modulation-averaged
/// product-Poisson mass inside the rectangle.
struct CountSupport {
    int n_max = 0;
    int m_max = 0;
    double captured_mass = 0.0;
    bool saturated = false;

    bool contains(int n, int m) const {
        return n >= 0 && m >= 0 && n <= n_max && m <= m_max;
    }
    long size() const {
        return static_cast<long>(n_max + 1) * static_cast<long>(m_max + 1);
    }
};

/// Sizes the rectangle so the weighted-average Poisson tail over the grid
/// stays below the policy's tail mass, then pads by the safety factor.
/// Grows further if the joint captured mass still falls short.
CountSupport count_support(const ProtocolParams& params,
                           const TruncationPolicy& policy,
                           const QuadratureGrid& grid);

/// Marginal photocount distribution p(n,m), quadrature-averaged over the
/// modulation. p(n, m) lives at row n, column m.
struct JointCountTable {
    Eigen::MatrixXd p;
    double total = 0.0;

    int n_max() const { return static_cast<int>(p.rows()) - 1; }
    int m_max() const { return static_cast<int>(p.cols()) - 1; }
};

JointCountTable pnr_count_marginal(const ProtocolParams& params,
                                   const QuadratureGrid& grid,
                                   const CountSupport& support);

} // namespace cvqkd
