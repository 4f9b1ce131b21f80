#include "checks.hpp"

#include <cmath>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/quadrature.hpp"

namespace cvqkd::checks {

FockDensityMatrix thermal_state(double nbar, int cutoff) {
    FockDensityMatrix rho = FockDensityMatrix::zero(cutoff);
    if (nbar <= 0.0) {
        rho.entries(0, 0) = 1.0;
        return rho;
    }
    const double ratio = nbar / (nbar + 1.0);
    double p = 1.0 / (nbar + 1.0);
    for (int n = 0; n < cutoff; ++n) {
        rho.entries(n, n) = p;
        p *= ratio;
    }
    return rho;
}

double thermal_entropy_direct(double nbar, int cutoff) {
    if (nbar <= 0.0) return 0.0;
    const double ratio = nbar / (nbar + 1.0);
    double p = 1.0 / (nbar + 1.0);
    double bits = 0.0;
    for (int n = 0; n < cutoff; ++n) {
        if (p > 0.0) bits -= p * std::log2(p);
        p *= ratio;
    }
    return bits;
}

Eigen::Vector2d two_coherent_mixture_eigenvalues(Amplitude alpha) {
    const double overlap = std::exp(-2.0 * std::norm(alpha));
    return {0.5 * (1.0 + overlap), 0.5 * (1.0 - overlap)};
}

double eve_fixed_x_entropy_fock(double sigma2, double eta, double x_fixed,
                                int order, int cutoff) {
    std::vector<double> t, w;
    gauss_hermite(order, t, w);
    const double scale = std::sqrt(2.0 * sigma2);
    FockDensityMatrix rho = FockDensityMatrix::zero(cutoff);
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double y = scale * t[j];
        accumulate_coherent_projector(rho, eve_tap_amplitude(x_fixed, y, eta), w[j]);
    }
    rho.renormalize();
    return fock_entropy(rho);
}

double eve_posterior_entropy_fock(double sigma2, double eta, double outcome,
                                  int order, int cutoff) {
    std::vector<double> t, w;
    gauss_hermite(order, t, w);
    const double scale = std::sqrt(2.0 * sigma2);

    std::vector<double> likelihood(t.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = scale * t[i];
        const double resid = outcome - 2.0 * std::sqrt(eta) * x;
        likelihood[i] = std::exp(-0.5 * resid * resid);
        norm += w[i] * likelihood[i];
    }

    FockDensityMatrix rho = FockDensityMatrix::zero(cutoff);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = scale * t[i];
        const double wx = w[i] * likelihood[i] / norm;
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double y = scale * t[j];
            accumulate_coherent_projector(rho, eve_tap_amplitude(x, y, eta),
                                          wx * w[j]);
        }
    }
    rho.renormalize();
    return fock_entropy(rho);
}

double eve_unconditional_entropy_fock(double sigma2, double eta, int order,
                                      int cutoff) {
    std::vector<double> t, w;
    gauss_hermite(order, t, w);
    const double scale = std::sqrt(2.0 * sigma2);
    FockDensityMatrix rho = FockDensityMatrix::zero(cutoff);
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < t.size(); ++j) {
            accumulate_coherent_projector(
                rho, eve_tap_amplitude(scale * t[i], scale * t[j], eta),
                w[i] * w[j]);
        }
    }
    rho.renormalize();
    return fock_entropy(rho);
}

} // namespace cvqkd::checks
