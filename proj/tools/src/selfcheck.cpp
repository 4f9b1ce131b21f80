#include <cmath>
#include <cstdio>
#include <string>

#include "app.hpp"
#include "checks.hpp"
#include "cvqkd/cvqkd.hpp"
#include "io.hpp"

namespace cvqkd::cli {

namespace {

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Reporter {
    bool all_passed = true;

    void report(const std::string& name, double delta, double tol) {
        const bool ok = std::abs(delta) <= tol;
        all_passed = all_passed && ok;
        std::printf("[%s] %-58s delta=%.3e tol=%.1e\n", ok ? "PASS" : "FAIL",
                    name.c_str(), delta, tol);
    }
};

} // namespace

int run_selfcheck(const SelfcheckOptions& options) {
    Reporter reporter;
    const TruncationPolicy policy;

    // Gaussian-formula entropies against number-basis constructions.
    for (double nbar : {0.5, 1.0, 2.0, 4.0}) {
        const int cutoff = choose_cutoff(8.0 * nbar + 8.0, policy).value;
        const double direct = fock_entropy(checks::thermal_state(nbar, cutoff));
        reporter.report("thermal entropy vs g(nbar), nbar=" + label(nbar),
                        direct - g_function(nbar), options.tolerance);
    }

    for (double eta : {0.3, 0.5, 0.8}) {
        const double sigma2 = 2.0;
        const double dy = 1.0 + 4.0 * (1.0 - eta) * sigma2;
        GaussianState cond;
        cond.cov << 1.0, 0.0, 0.0, dy;
        const int cutoff =
            choose_cutoff((1.0 - eta) * (2.0 + 8.0 * sigma2) + 8.0, policy).value;
        const double fock =
            checks::eve_fixed_x_entropy_fock(sigma2, eta, 1.0, 96, cutoff);
        reporter.report("fixed-x adversary state, eta=" + label(eta),
                        fock - gaussian_entropy(cond), options.tolerance);
    }

    for (double eta : {0.3, 0.5, 0.8}) {
        ProtocolParams p;
        p.sigma2 = 2.0;
        p.eta = eta;
        const QuadratureGrid grid = build_grid(p.sigma2, 64);
        const int cutoff = eve_state_cutoff(p, grid, policy).value;
        const UnconditionalEveState rho_e = rho_e_unconditional(p, grid, cutoff);
        const double closed = g_function(2.0 * (1.0 - eta) * p.sigma2);
        reporter.report("unconditional adversary state, eta=" + label(eta),
                        fock_entropy(rho_e.fock) - closed, options.tolerance);
    }

    // Posterior-conditioned adversary state against the
    // importance-weighted oracle (reverse-reconciliation construction).
    for (double eta : {0.3, 0.7}) {
        ProtocolParams p;
        p.sigma2 = 2.0;
        p.eta = eta;
        const double chi = holevo_eb_hd(p);
        const double s_uncond = g_function(2.0 * (1.0 - eta) * p.sigma2);
        const int cutoff =
            choose_cutoff((1.0 - eta) * (2.0 + 8.0 * p.sigma2) + 8.0, policy).value;
        const double oracle =
            checks::eve_posterior_entropy_fock(p.sigma2, eta, 0.9, 96, cutoff);
        reporter.report("homodyne-outcome conditioning, eta=" + label(eta),
                        (s_uncond - chi) - oracle, std::max(options.tolerance, 1e-3));
    }

    // Quadrature vs Monte Carlo mutual information.
    {
        ProtocolParams p;
        p.sigma2 = 2.0;
        p.beta = 2.0;
        p.eta = 1.0;
        const long samples = options.fast ? 1000000 : 10000000;
        const McEstimate mc = mc_mutual_info(p, samples, options.seed);
        const double quad = pnr_mutual_info(p, 64, policy);
        const double tol = std::max(3.0 * mc.stderr_bits, 1e-2);
        reporter.report("quadrature vs Monte Carlo mutual information",
                        quad - mc.value, tol);
    }

    // Mixture reconstruction of the adversary state from conditionals.
    {
        ProtocolParams p;
        p.sigma2 = 2.0;
        p.beta = 2.0;
        p.eta = 0.5;
        const QuadratureGrid grid = build_grid(p.sigma2, 64);
        const CountSupport support = count_support(p, policy, grid);
        const int cutoff = eve_state_cutoff(p, grid, policy).value;
        const UnconditionalEveState rho_e = rho_e_unconditional(p, grid, cutoff);
        const FockDensityMatrix recon =
            reconstruct_rho_e_from_conditionals(p, grid, support, cutoff);
        const double err =
            (recon.entries - rho_e.fock.entries).cwiseAbs().maxCoeff();
        reporter.report("conditional-state mixture reconstruction", err, 1e-8);
    }

    std::printf("%s\n", reporter.all_passed ? "selfcheck: all checks passed"
                                            : "selfcheck: FAILURES detected");
    return reporter.all_passed ? 0 : 1;
}

} // namespace cvqkd::cli
