#include "cvqkd/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqkd/counts.hpp"
#include "cvqkd/eve_states.hpp"
#include "cvqkd/mutual_info.hpp"
#include "cvqkd/quadrature.hpp"

namespace cvqkd {

std::string to_string(Scheme s) {
    return s == Scheme::HD ? "hd" : "pnr";
}

std::string to_string(Attack a) {
    return a == Attack::Individual ? "individual" : "collective";
}

std::string to_string(Direction d) {
    return d == Direction::Direct ? "dr" : "rr";
}

namespace {

int scaled_cutoff(const CutoffResult& base, const NumericsConfig& numerics,
                  bool& saturated) {
    saturated = saturated || base.saturated;
    const double scaled = base.value * numerics.cutoff_scale;
    int value = static_cast<int>(std::ceil(scaled));
    if (value < 8) value = 8;
    if (value >= numerics.policy.max_cutoff) {
        value = numerics.policy.max_cutoff;
        saturated = true;
    }
    return value;
}

KgrPoint make_point(const RateQuery& query, double first, double second) {
    KgrPoint point;
    point.eta = query.params.eta;
    point.info_first = first;
    point.info_second = second;
    point.delta_i = first - second;
    return point;
}

} // namespace

KgrPoint kgr_individual(const RateQuery& query) {
    if (query.attack != Attack::Individual) {
        throw std::invalid_argument("kgr_individual: query.attack must be individual");
    }
    const ProtocolParams& p = query.params;
    p.validate();

    if (query.scheme == Scheme::HD) {
        const double first = hd_mutual_info_ab(p.sigma2, p.eta);
        const double second = query.direction == Direction::Direct
                                  ? hd_mutual_info_ae(p.sigma2, p.eta)
                                  : hd_mutual_info_eb(p.sigma2, p.eta);
        return make_point(query, first, second);
    }

    const QuadratureGrid grid = build_grid(p.sigma2, query.numerics.grid_order);
    const CountSupport support_b = count_support(p, query.numerics.policy, grid);
    const double first = pnr_mutual_info(p, grid, support_b);

    const ProtocolParams eve = p.complement();
    const CountSupport support_e = count_support(eve, query.numerics.policy, grid);

    double second = 0.0;
    if (query.direction == Direction::Direct) {
        second = pnr_mutual_info(eve, grid, support_e);
    } else {
        second = pnr_mutual_info_eb(p, grid, support_b, support_e);
    }
    KgrPoint point = make_point(query, first, second);
    point.truncation_saturated = support_b.saturated || support_e.saturated;
    return point;
}

KgrPoint kgr_collective(const RateQuery& query) {
    if (query.attack != Attack::Collective) {
        throw std::invalid_argument("kgr_collective: query.attack must be collective");
    }
    const ProtocolParams& p = query.params;
    p.validate();

    if (query.scheme == Scheme::HD) {
        const double first = hd_mutual_info_ab(p.sigma2, p.eta);
        const double second = query.direction == Direction::Direct
                                  ? holevo_ae_hd(p)
                                  : holevo_eb_hd(p);
        return make_point(query, first, second);
    }

    const QuadratureGrid grid = build_grid(p.sigma2, query.numerics.grid_order);
    const CountSupport support = count_support(p, query.numerics.policy, grid);
    const double first = pnr_mutual_info(p, grid, support);

    if (query.direction == Direction::Direct) {
        KgrPoint point = make_point(query, first, holevo_ae_pnr(p));
        point.truncation_saturated = support.saturated;
        return point;
    }

    bool saturated = support.saturated;
    const int cutoff =
        scaled_cutoff(eve_state_cutoff(p, grid, query.numerics.policy),
                      query.numerics, saturated);
    const HolevoEbResult chi = holevo_eb_pnr(p, grid, support, cutoff);
    KgrPoint point = make_point(query, first, chi.bits);
    point.second_error_bound = chi.error_bound_bits;
    point.truncation_saturated = saturated || chi.saturated;
    return point;
}

KgrPoint kgr_point(const RateQuery& query) {
    return query.attack == Attack::Individual ? kgr_individual(query)
                                              : kgr_collective(query);
}

} // namespace cvqkd
