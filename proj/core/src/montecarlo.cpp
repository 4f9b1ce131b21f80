#include "cvqkd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cvqkd/fock.hpp"
#include "cvqkd/parallel.hpp"
#include "cvqkd/poisson.hpp"
#include "cvqkd/truncation.hpp"

namespace cvqkd {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace

SampleStream SampleStream::at(std::uint64_t seed, std::uint64_t index) {
    SampleStream stream;
    stream.state_ = seed ^ (index * kGolden + 0xD1B54A32D192ED03ULL);
    // Burn-in to decorrelate nearby (seed, index) keys.
    stream.next_u64();
    stream.next_u64();
    return stream;
}

std::uint64_t SampleStream::next_u64() {
    return splitmix64(state_);
}

double SampleStream::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

void SampleStream::normal_pair(double& g1, double& g2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    g1 = r * std::cos(theta);
    g2 = r * std::sin(theta);
}

int SampleStream::poisson(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("SampleStream::poisson: mu must be finite and >= 0");
    }
    if (mu == 0.0) return 0;
    if (mu < 10.0) {
        // Inversion by multiplication of uniforms.
        const double limit = std::exp(-mu);
        int k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k - 1;
    }
    // Transformed rejection with squeeze (PTRS).
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    while (true) {
        double u = uniform() - 0.5;
        double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<int>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const int k = static_cast<int>(kf);
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = k * log_mu - mu - log_factorial(k);
        if (lhs <= rhs) return k;
    }
}

SampleRound sample_round(const ProtocolParams& params, SampleStream& stream) {
    params.validate();
    if (!(params.sigma2 > 0.0)) {
        throw std::invalid_argument("sample_round: sigma2 must be > 0");
    }
    const double sigma = std::sqrt(params.sigma2);
    double g1 = 0.0, g2 = 0.0;
    stream.normal_pair(g1, g2);
    SampleRound round;
    round.x = sigma * g1;
    round.y = sigma * g2;
    const PhotocountMeans mu = photocount_means(round.x, round.y, params);
    round.n = stream.poisson(mu.mu1);
    round.m = stream.poisson(mu.mu2);
    return round;
}

namespace {

constexpr int kBatches = 16;
constexpr long kMaxHistogramCells = 1000000;

using Histogram = std::unordered_map<std::uint64_t, long>;

std::uint64_t pack_counts(int n, int m) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
           static_cast<std::uint32_t>(m);
}

// Plugin entropy of a histogram with Miller-Madow bias correction, bits.
double histogram_entropy_mm(const Histogram& hist, long total) {
    double entropy = 0.0;
    long cells = 0;
    for (const auto& [key, count] : hist) {
        (void)key;
        if (count <= 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(total);
        entropy -= p * std::log2(p);
        ++cells;
    }
    if (cells > 0) {
        entropy += static_cast<double>(cells - 1) /
                   (2.0 * static_cast<double>(total) * kLn2);
    }
    return entropy;
}

} // namespace

McEstimate mc_mutual_info(const ProtocolParams& params, long num_samples,
                          std::uint64_t seed) {
    params.validate();
    if (num_samples < 10000) {
        throw std::invalid_argument("mc_mutual_info: num_samples must be >= 10^4");
    }
    if (!(params.sigma2 > 0.0)) {
        throw std::invalid_argument("mc_mutual_info: sigma2 must be > 0");
    }

    // Index-contiguous batches; chunks never straddle a batch boundary, so
    // the reduction is identical for any worker count.
    const long batch_size = (num_samples + kBatches - 1) / kBatches;
    const long chunk_size = 65536;

    struct ChunkTask {
        int batch;
        long begin;
        long end;
    };
    std::vector<ChunkTask> tasks;
    for (int b = 0; b < kBatches; ++b) {
        const long lo = b * batch_size;
        const long hi = std::min<long>(num_samples, lo + batch_size);
        for (long s = lo; s < hi; s += chunk_size) {
            tasks.push_back({b, s, std::min(hi, s + chunk_size)});
        }
    }

    struct ChunkResult {
        Histogram hist;
        double cond_sum = 0.0;
        long count = 0;
    };
    std::vector<ChunkResult> results(tasks.size());

    parallel_chunks(static_cast<std::int64_t>(tasks.size()), [&](std::int64_t t) {
        const ChunkTask& task = tasks[static_cast<std::size_t>(t)];
        ChunkResult& out = results[static_cast<std::size_t>(t)];
        for (long i = task.begin; i < task.end; ++i) {
            SampleStream stream =
                SampleStream::at(seed, static_cast<std::uint64_t>(i));
            const double sigma = std::sqrt(params.sigma2);
            double g1 = 0.0, g2 = 0.0;
            stream.normal_pair(g1, g2);
            const double x = sigma * g1;
            const double y = sigma * g2;
            const PhotocountMeans mu = photocount_means(x, y, params);
            const int n = stream.poisson(mu.mu1);
            const int m = stream.poisson(mu.mu2);
            ++out.hist[pack_counts(n, m)];
            out.cond_sum += poisson_entropy_bits(mu.mu1) + poisson_entropy_bits(mu.mu2);
            ++out.count;
        }
    });

    Histogram total_hist;
    std::vector<Histogram> batch_hist(kBatches);
    std::vector<double> batch_cond(kBatches, 0.0);
    std::vector<long> batch_count(kBatches, 0);
    double cond_total = 0.0;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const int b = tasks[t].batch;
        for (const auto& [key, count] : results[t].hist) {
            total_hist[key] += count;
            batch_hist[static_cast<std::size_t>(b)][key] += count;
        }
        batch_cond[static_cast<std::size_t>(b)] += results[t].cond_sum;
        batch_count[static_cast<std::size_t>(b)] += results[t].count;
        cond_total += results[t].cond_sum;
        if (static_cast<long>(total_hist.size()) > kMaxHistogramCells) {
            throw std::runtime_error("mc_mutual_info: histogram support exceeds 10^6 cells");
        }
    }

    McEstimate estimate;
    estimate.num_samples = num_samples;
    estimate.seed = seed;
    estimate.value = histogram_entropy_mm(total_hist, num_samples) -
                     cond_total / static_cast<double>(num_samples);

    std::vector<double> batch_values;
    batch_values.reserve(kBatches);
    for (int b = 0; b < kBatches; ++b) {
        if (batch_count[static_cast<std::size_t>(b)] == 0) continue;
        const long nb = batch_count[static_cast<std::size_t>(b)];
        const double ib =
            histogram_entropy_mm(batch_hist[static_cast<std::size_t>(b)], nb) -
            batch_cond[static_cast<std::size_t>(b)] / static_cast<double>(nb);
        batch_values.push_back(ib);
    }
    const auto nb = static_cast<double>(batch_values.size());
    if (nb > 1) {
        double mean = 0.0;
        for (double v : batch_values) mean += v;
        mean /= nb;
        double var = 0.0;
        for (double v : batch_values) var += (v - mean) * (v - mean);
        var /= (nb - 1.0);
        estimate.stderr_bits = std::sqrt(var / nb);
    }
    return estimate;
}

double mc_fock_entropy_check(const EnsembleSpec& ensemble, long num_components,
                             int cutoff, std::uint64_t seed) {
    if (num_components < 1) {
        throw std::invalid_argument("mc_fock_entropy_check: need >= 1 component");
    }
    if (cutoff < 1) {
        throw std::invalid_argument("mc_fock_entropy_check: cutoff must be >= 1");
    }

    auto component_alpha = [&](std::uint64_t i) -> Amplitude {
        SampleStream stream = SampleStream::at(seed, i);
        double g1 = 0.0, g2 = 0.0;
        stream.normal_pair(g1, g2);
        if (const auto* gauss = std::get_if<CoherentGaussianEnsemble>(&ensemble)) {
            return gauss->center + Amplitude{std::sqrt(gauss->var_re) * g1,
                                             std::sqrt(gauss->var_im) * g2};
        }
        const auto& post = std::get<PosteriorWeightedEnsemble>(ensemble);
        const double sigma = std::sqrt(post.sigma2);
        return eve_tap_amplitude(sigma * g1, sigma * g2, post.eta);
    };
    auto component_log_weight = [&](std::uint64_t i) -> double {
        if (std::holds_alternative<CoherentGaussianEnsemble>(ensemble)) return 0.0;
        const auto& post = std::get<PosteriorWeightedEnsemble>(ensemble);
        SampleStream stream = SampleStream::at(seed, i);
        double g1 = 0.0, g2 = 0.0;
        stream.normal_pair(g1, g2);
        const double x = std::sqrt(post.sigma2) * g1;
        // Homodyne outcome likelihood: N(outcome; 2 sqrt(eta) x, 1).
        const double resid = post.outcome - 2.0 * std::sqrt(post.eta) * x;
        return -0.5 * resid * resid;
    };

    // Pass 1: normalize the importance weights.
    double weight_sum = 0.0;
    for (long i = 0; i < num_components; ++i) {
        weight_sum += std::exp(component_log_weight(static_cast<std::uint64_t>(i)));
    }

    // Pass 2: accumulate the weighted projectors in blocks.
    const long block = 4096;
    const long n_blocks = (num_components + block - 1) / block;
    std::vector<Eigen::MatrixXcd> slabs(static_cast<std::size_t>(n_blocks));
    parallel_chunks(n_blocks, [&](std::int64_t bi) {
        const long lo = bi * block;
        const long hi = std::min(num_components, lo + block);
        Eigen::MatrixXcd cols(cutoff, hi - lo);
        for (long i = lo; i < hi; ++i) {
            const auto idx = static_cast<std::uint64_t>(i);
            const double w = std::exp(component_log_weight(idx)) / weight_sum;
            cols.col(i - lo) =
                std::sqrt(w) * coherent_fock_amplitudes(component_alpha(idx), cutoff);
        }
        slabs[static_cast<std::size_t>(bi)] = cols * cols.adjoint();
    });

    FockDensityMatrix rho = FockDensityMatrix::zero(cutoff);
    for (const auto& slab : slabs) rho.entries += slab;
    rho.renormalize();
    return fock_entropy(rho);
}

} // namespace cvqkd
