#include "cvqkd/coherent.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqkd/truncation.hpp"

namespace cvqkd {

Eigen::VectorXcd coherent_fock_amplitudes(Amplitude alpha, int cutoff) {
    if (cutoff < 1) {
        throw std::invalid_argument("coherent_fock_amplitudes: cutoff must be >= 1");
    }
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cutoff);
    const double a2 = std::norm(alpha);
    if (a2 == 0.0) {
        c(0) = 1.0;
        return c;
    }
    const double log_abs = 0.5 * std::log(a2);
    const double phase = std::arg(alpha);
    for (int n = 0; n < cutoff; ++n) {
        const double log_mag = -0.5 * a2 + n * log_abs - 0.5 * log_factorial(n);
        const double mag = std::exp(log_mag);
        c(n) = std::polar(mag, n * phase);
    }
    return c;
}

} // namespace cvqkd
