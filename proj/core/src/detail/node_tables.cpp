#include "detail/node_tables.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqkd/coherent.hpp"
#include "cvqkd/fock.hpp"
#include "cvqkd/poisson.hpp"

namespace cvqkd::detail {

HalfGrid fold_grid(const QuadratureGrid& grid) {
    HalfGrid half;
    half.sigma2 = grid.sigma2;
    half.x.reserve(grid.nodes.size() / 2);
    half.y.reserve(grid.nodes.size() / 2);
    half.w.reserve(grid.nodes.size() / 2);
    for (const auto& node : grid.nodes) {
        if (node.y > 0.0) {
            half.x.push_back(node.x);
            half.y.push_back(node.y);
            half.w.push_back(2.0 * node.w);
        } else if (node.y == 0.0) {
            throw std::invalid_argument("fold_grid: grid has a node at y = 0");
        }
    }
    if (half.size() * 2 != grid.nodes.size()) {
        throw std::invalid_argument("fold_grid: grid is not symmetric in y");
    }
    return half;
}

CountTables build_count_tables(const ProtocolParams& params, const HalfGrid& half,
                               int n_max, int m_max) {
    CountTables tables;
    tables.n_max = n_max;
    tables.m_max = m_max;
    const auto k_nodes = static_cast<Eigen::Index>(half.size());
    tables.p1.resize(k_nodes, n_max + 1);
    tables.p2.resize(k_nodes, m_max + 1);
    std::vector<double> row;
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        const PhotocountMeans mu = photocount_means(half.x[k], half.y[k], params);
        fill_poisson_pmf(mu.mu1, n_max, row);
        for (int n = 0; n <= n_max; ++n) tables.p1(k, n) = row[n];
        fill_poisson_pmf(mu.mu2, m_max, row);
        for (int m = 0; m <= m_max; ++m) tables.p2(k, m) = row[m];
    }
    return tables;
}

Eigen::MatrixXd tapped_component_matrix(const ProtocolParams& params,
                                        const HalfGrid& half, int cutoff) {
    const auto k_nodes = static_cast<Eigen::Index>(half.size());
    Eigen::MatrixXd r(cutoff, 2 * k_nodes);
    const double tap = std::sqrt(1.0 - params.eta);
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        const Amplitude alpha{tap * half.x[k], tap * half.y[k]};
        const Eigen::VectorXcd c = coherent_fock_amplitudes(alpha, cutoff);
        const double root_w = std::sqrt(half.w[k]);
        r.col(2 * k) = root_w * c.real();
        r.col(2 * k + 1) = root_w * c.imag();
    }
    return r;
}

double entropy_real_symmetric(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("entropy_real_symmetric: eigensolver failed");
    }
    return entropy_from_eigenvalues(solver.eigenvalues());
}

int weighted_poisson_tail_index(const std::vector<double>& mu,
                                const std::vector<double>& w, double target,
                                int hard_stop) {
    const std::size_t k_nodes = mu.size();
    std::vector<double> pmf(k_nodes), cdf(k_nodes);
    for (std::size_t k = 0; k < k_nodes; ++k) {
        pmf[k] = std::exp(-mu[k]); // underflows to 0 for huge means
        cdf[k] = pmf[k];
    }
    for (int n = 0; n <= hard_stop; ++n) {
        if (n > 0) {
            for (std::size_t k = 0; k < k_nodes; ++k) {
                pmf[k] *= mu[k] / n;
                cdf[k] += pmf[k];
            }
        }
        double survival = 0.0;
        for (std::size_t k = 0; k < k_nodes; ++k) {
            survival += w[k] * (1.0 - std::min(cdf[k], 1.0));
        }
        if (survival < target) return n;
    }
    return -1;
}

} // namespace cvqkd::detail
