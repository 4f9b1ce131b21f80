#include <benchmark/benchmark.h>

#include "cvqkd/coherent.hpp"
#include "cvqkd/fock.hpp"
#include "cvqkd/poisson.hpp"
#include "cvqkd/quadrature.hpp"

namespace {

void BM_PoissonPmfFill(benchmark::State& state) {
    std::vector<double> out;
    for (auto _ : state) {
        cvqkd::fill_poisson_pmf(12.5, static_cast<int>(state.range(0)), out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_PoissonPmfFill)->Arg(64)->Arg(256);

void BM_CoherentAmplitudes(benchmark::State& state) {
    const cvqkd::Amplitude alpha{1.3, -0.7};
    for (auto _ : state) {
        auto c = cvqkd::coherent_fock_amplitudes(alpha, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_CoherentAmplitudes)->Arg(64)->Arg(128);

void BM_FockEntropy(benchmark::State& state) {
    const int cutoff = static_cast<int>(state.range(0));
    cvqkd::FockDensityMatrix rho = cvqkd::FockDensityMatrix::zero(cutoff);
    for (int i = 0; i < 24; ++i) {
        cvqkd::accumulate_coherent_projector(
            rho, cvqkd::Amplitude{0.15 * i, -0.1 * i}, 1.0 / 24);
    }
    rho.renormalize();
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::fock_entropy(rho));
    }
}
BENCHMARK(BM_FockEntropy)->Arg(64)->Arg(128);

void BM_BuildGrid(benchmark::State& state) {
    for (auto _ : state) {
        auto grid = cvqkd::build_grid(2.0, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(grid.nodes.data());
    }
}
BENCHMARK(BM_BuildGrid)->Arg(64)->Arg(128);

} // namespace
