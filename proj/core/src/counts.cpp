#include "cvqkd/counts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cvqkd/poisson.hpp"
#include "detail/node_tables.hpp"

namespace cvqkd {

namespace {

double joint_captured_mass(const std::vector<double>& mu1,
                           const std::vector<double>& mu2,
                           const std::vector<double>& w, int n_max, int m_max) {
    double captured = 0.0;
    for (std::size_t k = 0; k < mu1.size(); ++k) {
        captured += w[k] * poisson_cdf(n_max, mu1[k]) * poisson_cdf(m_max, mu2[k]);
    }
    return captured;
}

int pad_and_clamp(int n_needed, const TruncationPolicy& policy, bool& saturated) {
    int value = static_cast<int>(std::ceil(n_needed * policy.safety_factor));
    if (value < 8) value = 8;
    if (value >= policy.max_cutoff) {
        saturated = true;
        value = policy.max_cutoff;
    }
    return value;
}

} // namespace

CountSupport count_support(const ProtocolParams& params,
                           const TruncationPolicy& policy,
                           const QuadratureGrid& grid) {
    params.validate();
    policy.validate();

    ProtocolParams canonical = params;
    canonical.phi = 0.0;
    const detail::HalfGrid half = detail::fold_grid(grid);

    const std::size_t k_nodes = half.size();
    std::vector<double> mu1(k_nodes), mu2(k_nodes);
    for (std::size_t k = 0; k < k_nodes; ++k) {
        const PhotocountMeans mu = photocount_means(half.x[k], half.y[k], canonical);
        mu1[k] = mu.mu1;
        mu2[k] = mu.mu2;
    }

    const int hard_stop =
        static_cast<int>(std::ceil(policy.max_cutoff / policy.safety_factor)) + 1;
    const double target = 0.5 * policy.tail_mass;

    CountSupport support;
    const int need_n = detail::weighted_poisson_tail_index(mu1, half.w, target, hard_stop);
    const int need_m = detail::weighted_poisson_tail_index(mu2, half.w, target, hard_stop);
    support.n_max = need_n < 0 ? policy.max_cutoff
                               : pad_and_clamp(need_n, policy, support.saturated);
    support.m_max = need_m < 0 ? policy.max_cutoff
                               : pad_and_clamp(need_m, policy, support.saturated);
    if (need_n < 0 || need_m < 0) support.saturated = true;

    support.captured_mass =
        joint_captured_mass(mu1, mu2, half.w, support.n_max, support.m_max);
    while (!support.saturated && support.captured_mass < 1.0 - policy.tail_mass) {
        const int grow_n = std::max(4, support.n_max / 8);
        const int grow_m = std::max(4, support.m_max / 8);
        support.n_max = std::min(support.n_max + grow_n, policy.max_cutoff);
        support.m_max = std::min(support.m_max + grow_m, policy.max_cutoff);
        if (support.n_max == policy.max_cutoff && support.m_max == policy.max_cutoff) {
            support.saturated = true;
        }
        support.captured_mass =
            joint_captured_mass(mu1, mu2, half.w, support.n_max, support.m_max);
    }
    return support;
}

JointCountTable pnr_count_marginal(const ProtocolParams& params,
                                   const QuadratureGrid& grid,
                                   const CountSupport& support) {
    params.validate();
    ProtocolParams canonical = params;
    canonical.phi = 0.0;
    const detail::HalfGrid half = detail::fold_grid(grid);
    const detail::CountTables tables =
        detail::build_count_tables(canonical, half, support.n_max, support.m_max);

    JointCountTable table;
    table.p = Eigen::MatrixXd::Zero(support.n_max + 1, support.m_max + 1);
    const auto k_nodes = static_cast<Eigen::Index>(half.size());
    for (Eigen::Index k = 0; k < k_nodes; ++k) {
        table.p.noalias() +=
            half.w[static_cast<std::size_t>(k)] *
            (tables.p1.row(k).transpose() * tables.p2.row(k));
    }
    if ((table.p.array() < 0.0).any()) {
        throw std::runtime_error("pnr_count_marginal: negative probability entry");
    }
    table.total = table.p.sum();
    return table;
}

} // namespace cvqkd
