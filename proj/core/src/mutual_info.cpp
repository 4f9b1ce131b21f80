#include "cvqkd/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cvqkd/parallel.hpp"
#include "detail/node_tables.hpp"

namespace cvqkd {

namespace {

// Cells of a count marginal below this mass are dropped from the
// adversary-receiver table; the dropped total stays orders of magnitude
// below the quoted tolerances.
constexpr double kSignificantCellMass = 1e-12;
// Grid nodes below this weight cannot move any reported quantity.
constexpr double kSignificantNodeWeight = 1e-15;

Eigen::MatrixXd marginal_from_tables(const detail::CountTables& tables,
                                     const std::vector<double>& w) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(tables.n_max + 1, tables.m_max + 1);
    for (Eigen::Index k = 0; k < tables.p1.rows(); ++k) {
        p.noalias() += w[static_cast<std::size_t>(k)] *
                       (tables.p1.row(k).transpose() * tables.p2.row(k));
    }
    return p;
}

// log2 with zeros mapped to zero; callers only use these entries where
// the multiplying probability vanishes as well.
Eigen::MatrixXd masked_log2(const Eigen::MatrixXd& p) {
    Eigen::MatrixXd lp = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            const double v = p(i, j);
            if (v > 0.0) lp(i, j) = std::log2(v);
        }
    }
    return lp;
}

Eigen::VectorXd masked_log2(const Eigen::VectorXd& p) {
    Eigen::VectorXd lp = Eigen::VectorXd::Zero(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > 0.0) lp(i) = std::log2(p(i));
    }
    return lp;
}

void require_positive_sigma2(const ProtocolParams& params) {
    params.validate();
    if (!(params.sigma2 > 0.0)) {
        throw std::invalid_argument("mutual information: sigma2 must be > 0");
    }
}

} // namespace

double hd_mutual_info_ab(double sigma2, double eta) {
    ProtocolParams p;
    p.sigma2 = sigma2;
    p.eta = eta;
    p.validate();
    return 0.5 * std::log2(1.0 + 4.0 * eta * sigma2);
}

double hd_mutual_info_ae(double sigma2, double eta) {
    return hd_mutual_info_ab(sigma2, 1.0 - eta);
}

double hd_mutual_info_eb(double sigma2, double eta) {
    ProtocolParams p;
    p.sigma2 = sigma2;
    p.eta = eta;
    p.validate();
    return 0.5 * std::log2((1.0 + 4.0 * eta * sigma2) *
                           (1.0 + 4.0 * (1.0 - eta) * sigma2) /
                           (1.0 + 4.0 * sigma2));
}

double pnr_mutual_info(const ProtocolParams& params, const QuadratureGrid& grid,
                       const CountSupport& support) {
    require_positive_sigma2(params);
    ProtocolParams canonical = params;
    canonical.phi = 0.0;

    const detail::HalfGrid half = detail::fold_grid(grid);
    const detail::CountTables tables =
        detail::build_count_tables(canonical, half, support.n_max, support.m_max);

    const Eigen::MatrixXd marginal = marginal_from_tables(tables, half.w);
    if ((marginal.array() < 0.0).any()) {
        throw std::runtime_error("pnr_mutual_info: negative probability entry");
    }
    const Eigen::MatrixXd log_marginal = masked_log2(marginal);

    // I = sum_k w_k sum_{n,m} p1 p2 [log2 p1 + log2 p2 - log2 p(n,m)],
    // with the cross term folded into a matrix-vector product per node.
    double info = 0.0;
    Eigen::VectorXd cross(support.n_max + 1);
    for (Eigen::Index k = 0; k < tables.p1.rows(); ++k) {
        const Eigen::VectorXd p1 = tables.p1.row(k).transpose();
        const Eigen::VectorXd p2 = tables.p2.row(k).transpose();
        const Eigen::VectorXd lp1 = masked_log2(p1);
        const Eigen::VectorXd lp2 = masked_log2(p2);
        const double s1 = p1.sum();
        const double s2 = p2.sum();
        cross.noalias() = log_marginal * p2;
        const double node_sum = s2 * p1.dot(lp1) + s1 * p2.dot(lp2) - p1.dot(cross);
        info += half.w[static_cast<std::size_t>(k)] * node_sum;
    }
    return info;
}

double pnr_mutual_info(const ProtocolParams& params, int grid_order,
                       const TruncationPolicy& policy) {
    require_positive_sigma2(params);
    const QuadratureGrid grid = build_grid(params.sigma2, grid_order);
    const CountSupport support = count_support(params, policy, grid);
    return pnr_mutual_info(params, grid, support);
}

double pnr_mutual_info_eb(const ProtocolParams& params, const QuadratureGrid& grid,
                          const CountSupport& support_b,
                          const CountSupport& support_e) {
    require_positive_sigma2(params);
    ProtocolParams bob = params;
    bob.phi = 0.0;
    const ProtocolParams eve = bob.complement();

    const detail::HalfGrid half = detail::fold_grid(grid);
    const detail::CountTables tb =
        detail::build_count_tables(bob, half, support_b.n_max, support_b.m_max);
    const detail::CountTables te =
        detail::build_count_tables(eve, half, support_e.n_max, support_e.m_max);

    // Restrict to grid nodes and marginal cells that carry mass.
    std::vector<Eigen::Index> nodes;
    nodes.reserve(half.size());
    for (std::size_t k = 0; k < half.size(); ++k) {
        if (half.w[k] >= kSignificantNodeWeight) {
            nodes.push_back(static_cast<Eigen::Index>(k));
        }
    }
    const auto n_nodes = static_cast<Eigen::Index>(nodes.size());

    const Eigen::MatrixXd pb = marginal_from_tables(tb, half.w);
    const Eigen::MatrixXd pe = marginal_from_tables(te, half.w);

    struct Cell {
        int n;
        int m;
        double p;
    };
    auto significant_cells = [](const Eigen::MatrixXd& p) {
        std::vector<Cell> cells;
        for (Eigen::Index n = 0; n < p.rows(); ++n) {
            for (Eigen::Index m = 0; m < p.cols(); ++m) {
                if (p(n, m) >= kSignificantCellMass) {
                    cells.push_back({static_cast<int>(n), static_cast<int>(m), p(n, m)});
                }
            }
        }
        return cells;
    };
    const std::vector<Cell> cells_b = significant_cells(pb);
    const std::vector<Cell> cells_e = significant_cells(pe);
    if (cells_b.empty() || cells_e.empty()) return 0.0;

    // Receiver-side component matrix: row per receiver cell, column per node.
    const auto rows_b = static_cast<Eigen::Index>(cells_b.size());
    Eigen::MatrixXd mb(rows_b, n_nodes);
    Eigen::VectorXd pb_sig(rows_b);
    for (Eigen::Index r = 0; r < rows_b; ++r) {
        const Cell& cell = cells_b[static_cast<std::size_t>(r)];
        pb_sig(r) = cell.p;
        for (Eigen::Index j = 0; j < n_nodes; ++j) {
            const Eigen::Index k = nodes[static_cast<std::size_t>(j)];
            mb(r, j) = tb.p1(k, cell.n) * tb.p2(k, cell.m);
        }
    }
    const Eigen::VectorXd lpb_sig = masked_log2(pb_sig);

    const Eigen::Index chunk = 16;
    const auto n_cells_e = static_cast<Eigen::Index>(cells_e.size());
    const Eigen::Index n_chunks = (n_cells_e + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(n_chunks), 0.0);

    parallel_chunks(n_chunks, [&](std::int64_t c) {
        Eigen::VectorXd v(n_nodes);
        Eigen::VectorXd joint(rows_b);
        double acc = 0.0;
        const Eigen::Index lo = c * chunk;
        const Eigen::Index hi = std::min(lo + chunk, n_cells_e);
        for (Eigen::Index i = lo; i < hi; ++i) {
            const Cell& cell = cells_e[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < n_nodes; ++j) {
                const Eigen::Index k = nodes[static_cast<std::size_t>(j)];
                v(j) = half.w[static_cast<std::size_t>(k)] * te.p1(k, cell.n) *
                       te.p2(k, cell.m);
            }
            joint.noalias() = mb * v;
            const double log_pe = std::log2(cell.p);
            for (Eigen::Index r = 0; r < rows_b; ++r) {
                const double pj = joint(r);
                if (pj > 0.0) {
                    acc += pj * (std::log2(pj) - lpb_sig(r) - log_pe);
                }
            }
        }
        partial[static_cast<std::size_t>(c)] = acc;
    });

    double info = 0.0;
    for (double p : partial) info += p;
    return info;
}

double beta_threshold(double sigma2, double tol, int grid_order,
                      const TruncationPolicy& policy) {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("beta_threshold: sigma2 must be > 0");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("beta_threshold: tol must be > 0");
    }
    const double hd = hd_mutual_info_ab(sigma2, 1.0);
    auto excess = [&](double beta) {
        ProtocolParams p;
        p.sigma2 = sigma2;
        p.beta = beta;
        p.eta = 1.0;
        return pnr_mutual_info(p, grid_order, policy) - hd;
    };

    double lo = 0.25;
    double f_lo = excess(lo);
    while (f_lo >= 0.0 && lo > 1.0 / 64.0) {
        lo *= 0.5;
        f_lo = excess(lo);
    }
    if (f_lo >= 0.0) {
        throw std::runtime_error("beta_threshold: no sign change found (lower end)");
    }
    double hi = 2.0 * lo;
    double f_hi = excess(hi);
    while (f_hi < 0.0) {
        hi *= 2.0;
        if (hi > 64.0) {
            throw std::runtime_error("beta_threshold: no sign change found up to beta = 64");
        }
        f_hi = excess(hi);
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace cvqkd
