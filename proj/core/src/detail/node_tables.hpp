#pragma once

// Shared internals for the quadrature-node computations. At phi = 0 the
// photocount means depend on y only through y^2, and the information
// quantities are invariant under rotating the LO phase away, so every
// routine here works on the y >= 0 half-grid with doubled weights. The
// pairing also makes the adversary's mixed states real symmetric in the
// number basis: |x+iy><x+iy| + |x-iy><x-iy| has entries 2 Re(c_i c_j*).

#include <Eigen/Core>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/quadrature.hpp"

namespace cvqkd::detail {

/// y > 0 half of a tensor grid, weights doubled.
struct HalfGrid {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
    double sigma2 = 0.0;

    std::size_t size() const { return x.size(); }
};

HalfGrid fold_grid(const QuadratureGrid& grid);

/// Per-node Poisson pmf rows for the two detectors: p1(k, n) is the pmf
/// of detector 1 at node k and count n, for the channel transmissivity
/// baked into params.
struct CountTables {
    Eigen::MatrixXd p1;
    Eigen::MatrixXd p2;
    int n_max = 0;
    int m_max = 0;
};

CountTables build_count_tables(const ProtocolParams& params,
                               const HalfGrid& half, int n_max, int m_max);

/// Stacked real coherent components of the tapped ensemble: column pairs
/// (Re c_k, Im c_k) scaled by sqrt(w_k), so that R R^T is the
/// unconditional adversary state. Column 2k belongs to node k's real
/// part and column 2k+1 to its imaginary part.
Eigen::MatrixXd tapped_component_matrix(const ProtocolParams& params,
                                        const HalfGrid& half, int cutoff);

/// Eigenvalue entropy of a real symmetric matrix (bits), with the same
/// clamping rules as fock_entropy.
double entropy_real_symmetric(const Eigen::MatrixXd& m);

/// Smallest n at which the w-weighted Poisson survival sum over the given
/// means drops below target; -1 if that does not happen by hard_stop.
int weighted_poisson_tail_index(const std::vector<double>& mu,
                                const std::vector<double>& w, double target,
                                int hard_stop);

} // namespace cvqkd::detail
