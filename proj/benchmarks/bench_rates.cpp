#include <benchmark/benchmark.h>

#include "cvqkd/counts.hpp"
#include "cvqkd/eve_states.hpp"
#include "cvqkd/mutual_info.hpp"

namespace {

cvqkd::ProtocolParams headline_params(double eta) {
    cvqkd::ProtocolParams p;
    p.sigma2 = 2.0;
    p.beta = 2.0;
    p.eta = eta;
    return p;
}

void BM_PnrMutualInfo(benchmark::State& state) {
    const auto p = headline_params(1.0);
    const cvqkd::TruncationPolicy policy;
    const auto grid = cvqkd::build_grid(p.sigma2, static_cast<int>(state.range(0)));
    const auto support = cvqkd::count_support(p, policy, grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::pnr_mutual_info(p, grid, support));
    }
}
BENCHMARK(BM_PnrMutualInfo)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PnrMutualInfoEb(benchmark::State& state) {
    const auto p = headline_params(0.7);
    const cvqkd::TruncationPolicy policy;
    const auto grid = cvqkd::build_grid(p.sigma2, static_cast<int>(state.range(0)));
    const auto support_b = cvqkd::count_support(p, policy, grid);
    const auto support_e = cvqkd::count_support(p.complement(), policy, grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cvqkd::pnr_mutual_info_eb(p, grid, support_b, support_e));
    }
}
BENCHMARK(BM_PnrMutualInfoEb)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HolevoEbPnr(benchmark::State& state) {
    const auto p = headline_params(0.5);
    const cvqkd::TruncationPolicy policy;
    const auto grid = cvqkd::build_grid(p.sigma2, static_cast<int>(state.range(0)));
    const auto support = cvqkd::count_support(p, policy, grid);
    const int cutoff = cvqkd::eve_state_cutoff(p, grid, policy).value;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::holevo_eb_pnr(p, grid, support, cutoff));
    }
}
BENCHMARK(BM_HolevoEbPnr)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace
