#include "cvqkd/eve_states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cvqkd/parallel.hpp"
#include "cvqkd/poisson.hpp"
#include "detail/node_tables.hpp"

namespace cvqkd {

namespace {

// Cells below this marginal mass are skipped in the conditional-entropy
// average; the skipped total is accounted into the reported error bound.
constexpr double kCellFloor = 1e-13;
// Relative posterior weight below which a component cannot move a cell
// state at the quoted tolerances.
constexpr double kComponentFloorRel = 1e-16;

double eve_cov_diag(const ProtocolParams& params) {
    return 1.0 + 4.0 * (1.0 - params.eta) * params.sigma2;
}

struct CellJob {
    int n;
    int m;
    double p;
};

std::vector<CellJob> significant_cells(const Eigen::MatrixXd& marginal,
                                       double floor) {
    std::vector<CellJob> cells;
    for (Eigen::Index n = 0; n < marginal.rows(); ++n) {
        for (Eigen::Index m = 0; m < marginal.cols(); ++m) {
            if (marginal(n, m) >= floor) {
                cells.push_back(
                    {static_cast<int>(n), static_cast<int>(m), marginal(n, m)});
            }
        }
    }
    return cells;
}

// Scaled copy of the component columns belonging to one count cell:
// column pair k gets the posterior factor sqrt(p1 p2 / p). Returns the
// number of active column pairs.
Eigen::Index scaled_cell_columns(const Eigen::MatrixXd& components,
                                 const detail::CountTables& tables,
                                 const detail::HalfGrid& half, int n, int m,
                                 double cell_mass, Eigen::MatrixXd& out) {
    const auto k_nodes = static_cast<Eigen::Index>(half.size());
    double max_weight = 0.0;
    std::vector<double> weight(static_cast<std::size_t>(k_nodes));
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        const double f = half.w[static_cast<std::size_t>(k)] * tables.p1(k, n) *
                         tables.p2(k, m);
        weight[static_cast<std::size_t>(k)] = f;
        max_weight = std::max(max_weight, f);
    }
    const double floor = max_weight * kComponentFloorRel;
    Eigen::Index cols = 0;
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        const double f = weight[static_cast<std::size_t>(k)];
        if (f <= floor) continue;
        const double scale =
            std::sqrt(tables.p1(k, n) * tables.p2(k, m) / cell_mass);
        out.col(2 * cols) = scale * components.col(2 * k);
        out.col(2 * cols + 1) = scale * components.col(2 * k + 1);
        ++cols;
    }
    return 2 * cols;
}

} // namespace

UnconditionalEveState rho_e_unconditional(const ProtocolParams& params,
                                          const QuadratureGrid& grid, int cutoff) {
    params.validate();
    if (cutoff < 1) {
        throw std::invalid_argument("rho_e_unconditional: cutoff must be >= 1");
    }
    const detail::HalfGrid half = detail::fold_grid(grid);
    const Eigen::MatrixXd components =
        detail::tapped_component_matrix(params, half, cutoff);

    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(cutoff, cutoff);
    rho.selfadjointView<Eigen::Lower>().rankUpdate(components, 1.0);
    rho.triangularView<Eigen::StrictlyUpper>() =
        rho.triangularView<Eigen::StrictlyLower>().transpose();

    UnconditionalEveState state;
    state.fock.entries = rho.cast<std::complex<double>>();
    state.discarded_mass = state.fock.renormalize();
    state.gaussian.mean.setZero();
    state.gaussian.cov = eve_cov_diag(params) * Eigen::Matrix2d::Identity();
    return state;
}

double holevo_ae_hd(const ProtocolParams& params) {
    params.validate();
    const double d = eve_cov_diag(params);
    const double nu_cond = std::sqrt(d);
    return g_function(0.5 * (d - 1.0)) - g_function(0.5 * (nu_cond - 1.0));
}

double holevo_ae_pnr(const ProtocolParams& params) {
    params.validate();
    return g_function(2.0 * (1.0 - params.eta) * params.sigma2);
}

double holevo_eb_hd(const ProtocolParams& params) {
    params.validate();
    const double s = params.sigma2;
    const double eta = params.eta;
    const double sigma2_post = s / (1.0 + 4.0 * eta * s);
    const double dx = 1.0 + 4.0 * (1.0 - eta) * sigma2_post;
    const double dy = 1.0 + 4.0 * (1.0 - eta) * s;
    const double nu_cond = std::sqrt(dx * dy);
    return g_function(2.0 * (1.0 - eta) * s) - g_function(0.5 * (nu_cond - 1.0));
}

FockDensityMatrix conditional_eve_state_pnr(int n, int m,
                                            const ProtocolParams& params,
                                            const QuadratureGrid& grid,
                                            int cutoff) {
    params.validate();
    if (n < 0 || m < 0) {
        throw std::invalid_argument("conditional_eve_state_pnr: counts must be >= 0");
    }
    ProtocolParams canonical = params;
    canonical.phi = 0.0;
    const detail::HalfGrid half = detail::fold_grid(grid);
    const auto k_nodes = static_cast<Eigen::Index>(half.size());

    std::vector<double> f1(static_cast<std::size_t>(k_nodes));
    std::vector<double> f2(static_cast<std::size_t>(k_nodes));
    double cell_mass = 0.0;
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        const PhotocountMeans mu =
            photocount_means(half.x[static_cast<std::size_t>(k)],
                             half.y[static_cast<std::size_t>(k)], canonical);
        f1[static_cast<std::size_t>(k)] = poisson_pmf(n, mu.mu1);
        f2[static_cast<std::size_t>(k)] = poisson_pmf(m, mu.mu2);
        cell_mass += half.w[static_cast<std::size_t>(k)] *
                     f1[static_cast<std::size_t>(k)] * f2[static_cast<std::size_t>(k)];
    }
    if (cell_mass < 1e-300) {
        throw std::runtime_error(
            "conditional_eve_state_pnr: outcome probability is negligible");
    }

    const Eigen::MatrixXd components =
        detail::tapped_component_matrix(canonical, half, cutoff);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(cutoff, cutoff);
    Eigen::MatrixXd scaled(cutoff, 2 * k_nodes);
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        const double scale = std::sqrt(f1[static_cast<std::size_t>(k)] *
                                       f2[static_cast<std::size_t>(k)] / cell_mass);
        scaled.col(2 * k) = scale * components.col(2 * k);
        scaled.col(2 * k + 1) = scale * components.col(2 * k + 1);
    }
    rho.selfadjointView<Eigen::Lower>().rankUpdate(scaled, 1.0);
    rho.triangularView<Eigen::StrictlyUpper>() =
        rho.triangularView<Eigen::StrictlyLower>().transpose();

    FockDensityMatrix state;
    state.entries = rho.cast<std::complex<double>>();
    state.renormalize();
    return state;
}

CutoffResult eve_state_cutoff(const ProtocolParams& params,
                              const QuadratureGrid& grid,
                              const TruncationPolicy& policy) {
    params.validate();
    policy.validate();
    const detail::HalfGrid half = detail::fold_grid(grid);
    std::vector<double> intensity(half.size());
    const double tap = 1.0 - params.eta;
    for (std::size_t k = 0; k < half.size(); ++k) {
        intensity[k] = tap * (half.x[k] * half.x[k] + half.y[k] * half.y[k]);
    }
    const int hard_stop =
        static_cast<int>(std::ceil(policy.max_cutoff / policy.safety_factor)) + 1;
    const int needed = detail::weighted_poisson_tail_index(
        intensity, half.w, policy.tail_mass, hard_stop);

    CutoffResult result;
    if (needed < 0) {
        result.value = policy.max_cutoff;
        result.saturated = true;
        return result;
    }
    int value = static_cast<int>(std::ceil(needed * policy.safety_factor));
    if (value < 8) value = 8;
    if (value >= policy.max_cutoff) {
        result.value = policy.max_cutoff;
        result.saturated = true;
    } else {
        result.value = value;
    }
    return result;
}

HolevoEbResult holevo_eb_pnr(const ProtocolParams& params,
                             const QuadratureGrid& grid,
                             const CountSupport& support, int cutoff) {
    params.validate();
    if (!(params.sigma2 > 0.0)) {
        throw std::invalid_argument("holevo_eb_pnr: sigma2 must be > 0");
    }
    ProtocolParams canonical = params;
    canonical.phi = 0.0;

    const detail::HalfGrid half = detail::fold_grid(grid);
    const detail::CountTables tables =
        detail::build_count_tables(canonical, half, support.n_max, support.m_max);

    Eigen::MatrixXd marginal =
        Eigen::MatrixXd::Zero(support.n_max + 1, support.m_max + 1);
    for (Eigen::Index k = 0; k < tables.p1.rows(); ++k) {
        marginal.noalias() += half.w[static_cast<std::size_t>(k)] *
                              (tables.p1.row(k).transpose() * tables.p2.row(k));
    }

    const std::vector<CellJob> cells = significant_cells(marginal, kCellFloor);
    const Eigen::MatrixXd components =
        detail::tapped_component_matrix(canonical, half, cutoff);

    const auto n_cells = static_cast<Eigen::Index>(cells.size());
    std::vector<double> entropy(static_cast<std::size_t>(n_cells), 0.0);

    const Eigen::Index chunk = 8;
    const Eigen::Index n_chunks = (n_cells + chunk - 1) / chunk;
    parallel_chunks(n_chunks, [&](std::int64_t c) {
        Eigen::MatrixXd scaled(cutoff, components.cols());
        Eigen::MatrixXd rho(cutoff, cutoff);
        const Eigen::Index lo = c * chunk;
        const Eigen::Index hi = std::min(lo + chunk, n_cells);
        for (Eigen::Index i = lo; i < hi; ++i) {
            const CellJob& cell = cells[static_cast<std::size_t>(i)];
            const Eigen::Index cols = scaled_cell_columns(
                components, tables, half, cell.n, cell.m, cell.p, scaled);
            rho.setZero();
            rho.selfadjointView<Eigen::Lower>().rankUpdate(scaled.leftCols(cols), 1.0);
            const double trace = rho.trace();
            if (!(trace > 0.0)) continue;
            rho /= trace;
            entropy[static_cast<std::size_t>(i)] = detail::entropy_real_symmetric(rho);
        }
    });

    double conditional = 0.0;
    double processed_mass = 0.0;
    for (Eigen::Index i = 0; i < n_cells; ++i) {
        conditional += cells[static_cast<std::size_t>(i)].p *
                       entropy[static_cast<std::size_t>(i)];
        processed_mass += cells[static_cast<std::size_t>(i)].p;
    }

    HolevoEbResult result;
    result.discarded_mass = std::max(0.0, 1.0 - processed_mass);
    result.error_bound_bits =
        result.discarded_mass * std::log2(static_cast<double>(std::max(2, cutoff)));
    result.saturated = support.saturated;
    result.bits = holevo_ae_pnr(params) - conditional;
    return result;
}

FockDensityMatrix reconstruct_rho_e_from_conditionals(
    const ProtocolParams& params, const QuadratureGrid& grid,
    const CountSupport& support, int cutoff, double cell_floor) {
    params.validate();
    ProtocolParams canonical = params;
    canonical.phi = 0.0;

    const detail::HalfGrid half = detail::fold_grid(grid);
    const detail::CountTables tables =
        detail::build_count_tables(canonical, half, support.n_max, support.m_max);

    Eigen::MatrixXd marginal =
        Eigen::MatrixXd::Zero(support.n_max + 1, support.m_max + 1);
    for (Eigen::Index k = 0; k < tables.p1.rows(); ++k) {
        marginal.noalias() += half.w[static_cast<std::size_t>(k)] *
                              (tables.p1.row(k).transpose() * tables.p2.row(k));
    }
    const std::vector<CellJob> cells = significant_cells(marginal, cell_floor);
    const Eigen::MatrixXd components =
        detail::tapped_component_matrix(canonical, half, cutoff);

    const auto n_cells = static_cast<Eigen::Index>(cells.size());
    const Eigen::Index chunk = 64;
    const Eigen::Index n_chunks = (n_cells + chunk - 1) / chunk;
    std::vector<Eigen::MatrixXd> slabs(static_cast<std::size_t>(n_chunks));

    parallel_chunks(n_chunks, [&](std::int64_t c) {
        Eigen::MatrixXd scaled(cutoff, components.cols());
        Eigen::MatrixXd rho(cutoff, cutoff);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(cutoff, cutoff);
        const Eigen::Index lo = c * chunk;
        const Eigen::Index hi = std::min(lo + chunk, n_cells);
        for (Eigen::Index i = lo; i < hi; ++i) {
            const CellJob& cell = cells[static_cast<std::size_t>(i)];
            const Eigen::Index cols = scaled_cell_columns(
                components, tables, half, cell.n, cell.m, cell.p, scaled);
            rho.setZero();
            rho.selfadjointView<Eigen::Lower>().rankUpdate(scaled.leftCols(cols), 1.0);
            const double trace = rho.trace();
            if (!(trace > 0.0)) continue;
            // cell.p * renormalized conditional state
            acc += (cell.p / trace) * rho;
        }
        slabs[static_cast<std::size_t>(c)] = acc;
    });

    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (const auto& slab : slabs) {
        if (slab.size() > 0) total += slab;
    }
    total.triangularView<Eigen::StrictlyUpper>() =
        total.triangularView<Eigen::StrictlyLower>().transpose();

    FockDensityMatrix state;
    state.entries = total.cast<std::complex<double>>();
    return state;
}

} // namespace cvqkd
