#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cvqkd/counts.hpp"
#include "cvqkd/montecarlo.hpp"
#include "cvqkd/mutual_info.hpp"
#include "cvqkd/poisson.hpp"
#include "cvqkd/quadrature.hpp"

using namespace cvqkd;

namespace {
ProtocolParams headline(double eta, double beta = 2.0, double sigma2 = 2.0) {
    ProtocolParams p;
    p.sigma2 = sigma2;
    p.beta = beta;
    p.eta = eta;
    return p;
}
const double kHdLossless2 = 1.5849625007211561; // half log2(9)
} // namespace

TEST_CASE("quadrature grid moments") {
    for (double sigma2 : {0.7, 2.0}) {
        const QuadratureGrid grid = build_grid(sigma2, 32);
        double w_sum = 0.0, x2 = 0.0, y2 = 0.0, x4 = 0.0;
        for (const auto& node : grid.nodes) {
            w_sum += node.w;
            x2 += node.w * node.x * node.x;
            y2 += node.w * node.y * node.y;
            x4 += node.w * node.x * node.x * node.x * node.x;
        }
        CHECK(w_sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(x2 == doctest::Approx(sigma2).epsilon(1e-12));
        CHECK(y2 == doctest::Approx(sigma2).epsilon(1e-12));
        CHECK(x4 == doctest::Approx(3.0 * sigma2 * sigma2).epsilon(1e-10));
    }
    CHECK_THROWS_AS(build_grid(2.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(2.0, 33), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0.0, 32), std::invalid_argument);
}

TEST_CASE("grid is symmetric under sign flip") {
    const QuadratureGrid grid = build_grid(1.3, 16);
    for (const auto& node : grid.nodes) {
        bool found = false;
        for (const auto& other : grid.nodes) {
            if (other.x == -node.x && other.y == -node.y && other.w == node.w) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("count support sizing") {
    const TruncationPolicy policy;
    const QuadratureGrid grid = build_grid(2.0, 64);

    // dead channel: only the LO Poisson(2) tail matters
    const CountSupport dead = count_support(headline(0.0), policy, grid);
    CHECK(dead.n_max == dead.m_max);
    CHECK(dead.n_max <= 32);
    CHECK(dead.captured_mass >= 1.0 - policy.tail_mass);
    CHECK_FALSE(dead.saturated);

    // headline point
    const CountSupport full = count_support(headline(1.0), policy, grid);
    CHECK(full.captured_mass >= 1.0 - 1e-9);
    CHECK_FALSE(full.saturated);
    CHECK(full.contains(0, 0));
    CHECK(full.size() == static_cast<long>(full.n_max + 1) * (full.m_max + 1));

    // no LO, weak modulation: floor-size support dominated by (0,0)
    const QuadratureGrid small_grid = build_grid(1e-4, 64);
    const CountSupport tiny =
        count_support(headline(1.0, 0.0, 1e-4), policy, small_grid);
    CHECK(tiny.n_max == 8);
    const JointCountTable table =
        pnr_count_marginal(headline(1.0, 0.0, 1e-4), small_grid, tiny);
    CHECK(table.p(0, 0) > 0.999);
}

TEST_CASE("count marginal: dead channel factorizes exactly") {
    const TruncationPolicy policy;
    const QuadratureGrid grid = build_grid(2.0, 64);
    const ProtocolParams p = headline(0.0);
    const CountSupport support = count_support(p, policy, grid);
    const JointCountTable table = pnr_count_marginal(p, grid, support);
    for (int n = 0; n <= support.n_max; ++n) {
        for (int m = 0; m <= support.m_max; ++m) {
            const double expected = poisson_pmf(n, 2.0) * poisson_pmf(m, 2.0);
            CHECK(table.p(n, m) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(table.total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("count marginal is symmetric between the detectors") {
    const TruncationPolicy policy;
    const QuadratureGrid grid = build_grid(2.0, 64);
    const ProtocolParams p = headline(0.7);
    const CountSupport support = count_support(p, policy, grid);
    const JointCountTable table = pnr_count_marginal(p, grid, support);
    REQUIRE(support.n_max == support.m_max);
    for (int n = 0; n <= support.n_max; ++n) {
        for (int m = 0; m < n; ++m) {
            CHECK(table.p(n, m) ==
                  doctest::Approx(table.p(m, n)).epsilon(1e-11).scale(1.0));
        }
    }
}

TEST_CASE("count marginal agrees with a sampled histogram") {
    const TruncationPolicy policy;
    const QuadratureGrid grid = build_grid(2.0, 64);
    const ProtocolParams p = headline(1.0);
    const CountSupport support = count_support(p, policy, grid);
    const JointCountTable table = pnr_count_marginal(p, grid, support);

    const long samples = 10000000;
    std::vector<long> hist(static_cast<std::size_t>(support.size()), 0);
    for (long i = 0; i < samples; ++i) {
        SampleStream stream = SampleStream::at(99, static_cast<std::uint64_t>(i));
        const SampleRound round = sample_round(p, stream);
        if (support.contains(round.n, round.m)) {
            ++hist[static_cast<std::size_t>(round.n) * (support.m_max + 1) + round.m];
        }
    }
    long checked = 0;
    for (int n = 0; n <= support.n_max; ++n) {
        for (int m = 0; m <= support.m_max; ++m) {
            const double prob = table.p(n, m);
            if (prob * samples < 25.0) continue;
            const double freq =
                static_cast<double>(
                    hist[static_cast<std::size_t>(n) * (support.m_max + 1) + m]) /
                samples;
            const double stderr_cell = std::sqrt(prob * (1.0 - prob) / samples);
            CHECK(std::abs(freq - prob) <= 4.0 * stderr_cell);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("photocounting mutual information against the homodyne benchmark") {
    const TruncationPolicy policy;

    // dead channel carries nothing
    CHECK(std::abs(pnr_mutual_info(headline(0.0), 64, policy)) <= 1e-9);

    // above the oscillator threshold the counts beat the homodyne value
    CHECK(pnr_mutual_info(headline(1.0), 64, policy) > kHdLossless2);

    // far below threshold they fall short of it
    CHECK(pnr_mutual_info(headline(1.0, 0.1), 64, policy) < kHdLossless2);

    CHECK_THROWS_AS(pnr_mutual_info(headline(1.0, 2.0, 0.0), 64, policy),
                    std::invalid_argument);
}

TEST_CASE("mutual information is non-negative and vanishes with the signal") {
    const TruncationPolicy policy;
    for (double eta : {0.0, 0.4, 1.0}) {
        CHECK(pnr_mutual_info(headline(eta), 64, policy) >= 0.0);
    }
    // weak-modulation limit: the rate collapses like the homodyne value
    const double weak = pnr_mutual_info(headline(1.0, 2.0, 1e-6), 64, policy);
    CHECK(weak >= 0.0);
    CHECK(weak <= 5e-6);
}

TEST_CASE("mutual information is monotone in the transmissivity") {
    const TruncationPolicy policy;
    double prev = -1.0;
    for (int i = 1; i <= 10; ++i) {
        const double value = pnr_mutual_info(headline(0.1 * i), 64, policy);
        CHECK(value >= prev - 1e-9);
        prev = value;
    }
}

TEST_CASE("homodyne closed forms") {
    CHECK(hd_mutual_info_ab(2.0, 1.0) == doctest::Approx(kHdLossless2).epsilon(1e-15));
    CHECK(hd_mutual_info_ab(0.0, 0.7) == 0.0);
    CHECK(hd_mutual_info_ab(2.0, 0.5) ==
          doctest::Approx(1.1609640474436811).epsilon(1e-15));

    CHECK(hd_mutual_info_ae(2.0, 1.0) == 0.0);
    CHECK(hd_mutual_info_ae(2.0, 0.5) ==
          doctest::Approx(1.1609640474436811).epsilon(1e-15));
    CHECK(hd_mutual_info_ae(2.0, 0.0) == doctest::Approx(kHdLossless2).epsilon(1e-15));

    CHECK(hd_mutual_info_eb(2.0, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(hd_mutual_info_eb(2.0, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    // reverse-reconciliation identity at (sigma2=2, eta=0.7)
    const double lhs = hd_mutual_info_ab(2.0, 0.7) - hd_mutual_info_eb(2.0, 0.7);
    const double rhs = 0.5 * std::log2((1.0 + 8.0) / (1.0 + 8.0 * 0.3));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
}

TEST_CASE("homodyne closed forms match long-double evaluation") {
    const double points[5][2] = {
        {0.37, 0.21}, {1.9, 0.83}, {2.6, 0.99}, {0.05, 0.5}, {3.7, 0.08}};
    for (const auto& pt : points) {
        const double s2 = pt[0], eta = pt[1];
        const long double ab =
            0.5L * std::log2(1.0L + 4.0L * (long double)eta * (long double)s2);
        const long double ae =
            0.5L * std::log2(1.0L + 4.0L * (1.0L - (long double)eta) * (long double)s2);
        const long double eb =
            0.5L * std::log2((1.0L + 4.0L * (long double)eta * (long double)s2) *
                             (1.0L + 4.0L * (1.0L - (long double)eta) * (long double)s2) /
                             (1.0L + 4.0L * (long double)s2));
        CHECK(std::abs(hd_mutual_info_ab(s2, eta) - (double)ab) <= 1e-14);
        CHECK(std::abs(hd_mutual_info_ae(s2, eta) - (double)ae) <= 1e-14);
        CHECK(std::abs(hd_mutual_info_eb(s2, eta) - (double)eb) <= 1e-14);
    }
}

TEST_CASE("adversary-receiver count information") {
    const TruncationPolicy policy;
    const QuadratureGrid grid = build_grid(2.0, 64);

    auto eb_at = [&](double eta) {
        const ProtocolParams p = headline(eta);
        const CountSupport sb = count_support(p, policy, grid);
        const CountSupport se = count_support(p.complement(), policy, grid);
        return pnr_mutual_info_eb(p, grid, sb, se);
    };

    // lossless channel: the tap sees vacuum, the counts decouple
    CHECK(std::abs(eb_at(1.0)) <= 1e-9);

    // construction is symmetric under exchanging the two parties
    CHECK(eb_at(0.3) == doctest::Approx(eb_at(0.7)).epsilon(1e-9));

    // data processing: the tapped counts know less about the receiver's
    // counts than the full modulation does
    const ProtocolParams p = headline(0.8);
    const CountSupport sb = count_support(p, policy, grid);
    const double direct = pnr_mutual_info(p, grid, sb);
    const double through_eve = eb_at(0.8);
    CHECK(through_eve > 0.0);
    CHECK(through_eve < direct);
}

TEST_CASE("oscillator threshold: monotone and bracketed") {
    const TruncationPolicy policy;
    const double tol = 1e-3;
    const double th1 = beta_threshold(1.0, tol, 64, policy);
    const double th2 = beta_threshold(2.0, tol, 64, policy);
    const double th3 = beta_threshold(3.0, tol, 64, policy);
    CHECK(th1 > th2);
    CHECK(th2 > th3);
    CHECK(th2 < 2.0);

    // root-finder contract: the excess changes sign across the result
    auto excess = [&](double beta) {
        return pnr_mutual_info(headline(1.0, beta), 64, policy) - kHdLossless2;
    };
    CHECK(excess(th2 - 10.0 * tol) < 0.0);
    CHECK(excess(th2 + 10.0 * tol) > 0.0);

    CHECK_THROWS_AS(beta_threshold(0.0, tol, 64, policy), std::invalid_argument);
    CHECK_THROWS_AS(beta_threshold(2.0, 0.0, 64, policy), std::invalid_argument);
}

TEST_CASE("quadrature refinement leaves the information unchanged") {
    // Doubling the default order and tightening the tail budget moves the
    // value by less than the 1e-4 reporting tolerance. (From order 32 the
    // residual is still a few 1e-4 at high transmissivity, so 64 is the
    // first converged setting.)
    TruncationPolicy coarse;
    TruncationPolicy fine;
    fine.tail_mass = 1e-12;
    for (double eta : {0.3, 0.7, 1.0}) {
        const double base = pnr_mutual_info(headline(eta), 64, coarse);
        const double refined = pnr_mutual_info(headline(eta), 128, fine);
        CHECK(std::abs(base - refined) < 1e-4);
    }
}
