#include "cvqkd/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvqkd/poisson.hpp"

namespace cvqkd {

void ProtocolParams::validate() const {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("ProtocolParams: sigma2 must be finite and >= 0");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("ProtocolParams: beta must be finite and >= 0");
    }
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("ProtocolParams: phi must be finite");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("ProtocolParams: eta must be in [0, 1]");
    }
}

ProtocolParams ProtocolParams::complement() const {
    ProtocolParams out = *this;
    out.eta = 1.0 - eta;
    return out;
}

double gaussian_modulation_pdf(double z, double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument(
            "gaussian_modulation_pdf: sigma2 must be > 0 (degenerate distribution)");
    }
    const double inv = 1.0 / (2.0 * sigma2);
    return std::exp(-z * z * inv) / std::sqrt(2.0 * std::numbers::pi * sigma2);
}

std::pair<Amplitude, Amplitude> bs_output_amplitudes(Amplitude alpha, double beta,
                                                     double phi) {
    const Amplitude lo = std::polar(beta, phi);
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    return {(alpha + lo) * inv_sqrt2, (lo - alpha) * inv_sqrt2};
}

PhotocountMeans photocount_means(double x, double y, const ProtocolParams& params) {
    params.validate();
    const double common = 0.5 * (params.eta * (x * x + y * y) + params.beta * params.beta);
    const double shift = std::sqrt(params.eta) * params.beta *
                         (x * std::cos(params.phi) + y * std::sin(params.phi));
    double mu1 = common + shift;
    double mu2 = common - shift;
    // |.|^2 form guarantees non-negativity; clip roundoff at the destructive port.
    if (mu1 < 0.0) mu1 = 0.0;
    if (mu2 < 0.0) mu2 = 0.0;
    return {mu1, mu2};
}

double joint_density(double x, double y, int n, int m, const ProtocolParams& params) {
    if (n < 0 || m < 0) {
        throw std::invalid_argument("joint_density: counts must be >= 0");
    }
    const PhotocountMeans mu = photocount_means(x, y, params);
    return gaussian_modulation_pdf(x, params.sigma2) *
           gaussian_modulation_pdf(y, params.sigma2) * poisson_pmf(n, mu.mu1) *
           poisson_pmf(m, mu.mu2);
}

Amplitude eve_tap_amplitude(double x, double y, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eve_tap_amplitude: eta must be in [0, 1]");
    }
    const double r = std::sqrt(1.0 - eta);
    return Amplitude{r * x, r * y};
}

} // namespace cvqkd
