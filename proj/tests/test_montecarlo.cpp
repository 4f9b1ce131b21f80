#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "cvqkd/gaussian.hpp"
#include "cvqkd/montecarlo.hpp"
#include "cvqkd/mutual_info.hpp"
#include "cvqkd/poisson.hpp"

using namespace cvqkd;

namespace {
ProtocolParams headline(double eta, double beta = 2.0, double sigma2 = 2.0) {
    ProtocolParams p;
    p.sigma2 = sigma2;
    p.beta = beta;
    p.eta = eta;
    return p;
}
} // namespace

TEST_CASE("sampled rounds reproduce the analytic moments") {
    const long samples = 1000000;

    // dead channel: counts are Poisson(beta^2/2) = Poisson(2)
    {
        const ProtocolParams p = headline(0.0);
        double sum_n = 0.0;
        for (long i = 0; i < samples; ++i) {
            SampleStream s = SampleStream::at(1, static_cast<std::uint64_t>(i));
            sum_n += sample_round(p, s).n;
        }
        const double mean_n = sum_n / samples;
        const double tol = 3.0 * std::sqrt(2.0 / samples);
        CHECK(std::abs(mean_n - 2.0) <= tol);
    }

    // modulation variance
    {
        const ProtocolParams p = headline(0.6);
        double sum_x = 0.0, sum_x2 = 0.0, sum_nm = 0.0;
        for (long i = 0; i < samples; ++i) {
            SampleStream s = SampleStream::at(2, static_cast<std::uint64_t>(i));
            const SampleRound r = sample_round(p, s);
            sum_x += r.x;
            sum_x2 += r.x * r.x;
            sum_nm += r.n + r.m;
        }
        const double var_x = sum_x2 / samples - std::pow(sum_x / samples, 2);
        CHECK(std::abs(var_x - 2.0) <= 3.0 * 2.0 * std::sqrt(2.0 / samples));

        // E[n + m] = eta 2 sigma2 + beta^2
        const double expected = 0.6 * 4.0 + 4.0;
        const double mean_nm = sum_nm / samples;
        // total variance is dominated by the eta^2 Var(x^2+y^2) term; a
        // generous five-sigma band keeps the fixed-seed check stable
        CHECK(std::abs(mean_nm - expected) <= 0.05);
    }
}

TEST_CASE("poisson sampler is unbiased in the rejection regime") {
    // means above 10 use transformed rejection rather than inversion
    for (double mu : {18.5, 55.0}) {
        const long n = 400000;
        double s = 0.0, s2 = 0.0;
        for (long i = 0; i < n; ++i) {
            SampleStream st =
                SampleStream::at(5150, static_cast<std::uint64_t>(i));
            const double k = st.poisson(mu);
            s += k;
            s2 += k * k;
        }
        const double mean = s / n;
        const double var = s2 / n - mean * mean;
        CHECK(std::abs(mean - mu) <= 3.0 * std::sqrt(mu / n));
        CHECK(var / mu == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("dead-channel counts pass a chi-square goodness-of-fit test") {
    const ProtocolParams p = headline(0.0);
    const long samples = 200000;
    const int k_bins = 12; // counts 0..10 plus pooled tail
    std::vector<long> observed(k_bins, 0);
    for (long i = 0; i < samples; ++i) {
        SampleStream s = SampleStream::at(3, static_cast<std::uint64_t>(i));
        const int n = sample_round(p, s).n;
        observed[static_cast<std::size_t>(std::min(n, k_bins - 1))] += 1;
    }
    double chi2 = 0.0;
    double tail = 1.0;
    for (int b = 0; b < k_bins - 1; ++b) {
        const double prob = poisson_pmf(b, 2.0);
        tail -= prob;
        const double expected = prob * samples;
        chi2 += std::pow(observed[static_cast<std::size_t>(b)] - expected, 2) / expected;
    }
    chi2 += std::pow(observed[k_bins - 1] - tail * samples, 2) / (tail * samples);
    const boost::math::chi_squared dist(k_bins - 1);
    const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    CHECK(p_value > 0.01);
}

TEST_CASE("mutual-information estimator basics") {
    const ProtocolParams dead = headline(0.0);
    const McEstimate zero = mc_mutual_info(dead, 200000, 5);
    CHECK(std::abs(zero.value) <= std::max(3.0 * zero.stderr_bits, 2e-3));
    CHECK(zero.num_samples == 200000);
    CHECK(zero.stderr_bits >= 0.0);

    CHECK_THROWS_AS(mc_mutual_info(dead, 100, 5), std::invalid_argument);
}

TEST_CASE("estimator is reproducible for any worker count") {
    const ProtocolParams p = headline(0.7);
    setenv("CVQKD_THREADS", "1", 1);
    const McEstimate a = mc_mutual_info(p, 150000, 11);
    setenv("CVQKD_THREADS", "3", 1);
    const McEstimate b = mc_mutual_info(p, 150000, 11);
    unsetenv("CVQKD_THREADS");
    CHECK(a.value == b.value);
    CHECK(a.stderr_bits == b.stderr_bits);

    // different seed moves the estimate
    const McEstimate c = mc_mutual_info(p, 150000, 12);
    CHECK(c.value != a.value);
}

TEST_CASE("batch standard error shrinks like one over root N") {
    const ProtocolParams p = headline(1.0);
    const McEstimate small = mc_mutual_info(p, 200000, 21);
    const McEstimate large = mc_mutual_info(p, 800000, 21);
    REQUIRE(small.stderr_bits > 0.0);
    const double ratio = small.stderr_bits / large.stderr_bits;
    CHECK(ratio > 1.2);
    CHECK(ratio < 3.5);
}

TEST_CASE("estimator agrees with the quadrature value") {
    const TruncationPolicy policy;
    const ProtocolParams points[3] = {headline(1.0), headline(0.5),
                                      headline(0.7, 1.5, 1.0)};
    for (const auto& p : points) {
        const McEstimate mc = mc_mutual_info(p, 1000000, 31);
        const double quad = pnr_mutual_info(p, 64, policy);
        CHECK(std::abs(mc.value - quad) <=
              std::max(3.0 * mc.stderr_bits, 1e-2));
    }
}

TEST_CASE("oscillator phase does not move the mutual information") {
    // the sampler honors phi directly while the quadrature route works in
    // the rotated frame, so agreement here exercises the rotation argument
    const TruncationPolicy policy;
    ProtocolParams p = headline(0.75, 1.8, 1.5);
    p.phi = 0.9;
    const McEstimate mc = mc_mutual_info(p, 1000000, 77);
    const double quad = pnr_mutual_info(p, 64, policy);
    CHECK(std::abs(mc.value - quad) <= std::max(3.0 * mc.stderr_bits, 1e-2));
    ProtocolParams p0 = p;
    p0.phi = 0.0;
    CHECK(pnr_mutual_info(p0, 64, policy) == quad);
}

TEST_CASE("coverage across random parameter tuples") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> beta_dist(0.5, 3.0);
    std::uniform_real_distribution<double> sigma_dist(0.5, 3.0);
    std::uniform_real_distribution<double> eta_dist(0.1, 1.0);
    const TruncationPolicy policy;

    int contained = 0;
    const int tuples = 20;
    for (int i = 0; i < tuples; ++i) {
        const ProtocolParams p =
            headline(eta_dist(rng), beta_dist(rng), sigma_dist(rng));
        const McEstimate mc =
            mc_mutual_info(p, 200000, 1000 + static_cast<std::uint64_t>(i));
        const double quad = pnr_mutual_info(p, 64, policy);
        if (std::abs(mc.value - quad) <= 3.0 * mc.stderr_bits) ++contained;
    }
    CHECK(contained >= 18);
}

TEST_CASE("sampled ensemble entropies") {
    // a single repeated component is pure
    const double point =
        mc_fock_entropy_check(CoherentGaussianEnsemble{{0.0, 0.0}, 0.0, 0.0},
                              1000, 16, 7);
    CHECK(point == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

    // isotropic tapped ensemble: variance (1-eta) sigma2 = 1 per component
    const double iso = mc_fock_entropy_check(
        CoherentGaussianEnsemble{{0.0, 0.0}, 1.0, 1.0}, 100000, 96, 7);
    CHECK(std::abs(iso - g_function(2.0)) <= 5e-3);

    // one-quadrature ensemble at fixed x reproduces the conditional state
    GaussianState cond;
    cond.cov << 1.0, 0.0, 0.0, 5.0;
    const double fixed_x = mc_fock_entropy_check(
        CoherentGaussianEnsemble{{0.9, 0.0}, 0.0, 1.0}, 100000, 72, 7);
    CHECK(std::abs(fixed_x - gaussian_entropy(cond)) <= 5e-3);

    // posterior-weighted ensemble matches the conditioning closed form
    GaussianState post;
    post.cov << 1.0 + 2.0 * 0.4, 0.0, 0.0, 5.0;
    const double weighted = mc_fock_entropy_check(
        PosteriorWeightedEnsemble{2.0, 0.5, 0.8}, 200000, 96, 7);
    CHECK(std::abs(weighted - gaussian_entropy(post)) <= 5e-3);

    CHECK_THROWS_AS(
        mc_fock_entropy_check(CoherentGaussianEnsemble{}, 0, 16, 7),
        std::invalid_argument);
}
