#include "cvqkd/poisson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvqkd/truncation.hpp"

namespace cvqkd {

namespace {
constexpr double kLn2 = 0.6931471805599453;
// Above this mean exp(-mu) underflows a double and recurrences must start
// from a log-space seed.
constexpr double kLogSpaceMu = 700.0;

void check_args(int n, double mu) {
    if (n < 0) {
        throw std::invalid_argument("poisson: n must be >= 0");
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("poisson: mu must be finite and >= 0");
    }
}
} // namespace

double poisson_log_pmf(int n, double mu) {
    check_args(n, mu);
    if (mu == 0.0) {
        return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return -mu + n * std::log(mu) - log_factorial(n);
}

double poisson_pmf(int n, double mu) {
    check_args(n, mu);
    if (mu == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(poisson_log_pmf(n, mu));
}

double poisson_cdf(int n, double mu) {
    check_args(n, mu);
    if (mu == 0.0) return 1.0;
    double sum = 0.0;
    if (mu < kLogSpaceMu) {
        double pmf = std::exp(-mu);
        sum = pmf;
        for (int k = 1; k <= n; ++k) {
            pmf *= mu / k;
            sum += pmf;
        }
    } else {
        for (int k = 0; k <= n; ++k) {
            sum += std::exp(poisson_log_pmf(k, mu));
        }
    }
    return sum < 1.0 ? sum : 1.0;
}

void fill_poisson_pmf(double mu, int n_max, std::vector<double>& out) {
    check_args(n_max, mu);
    out.resize(static_cast<std::size_t>(n_max) + 1);
    if (mu == 0.0) {
        out.assign(out.size(), 0.0);
        out[0] = 1.0;
        return;
    }
    if (mu < kLogSpaceMu) {
        double pmf = std::exp(-mu);
        out[0] = pmf;
        for (int n = 1; n <= n_max; ++n) {
            pmf *= mu / n;
            out[static_cast<std::size_t>(n)] = pmf;
        }
    } else {
        const double log_mu = std::log(mu);
        for (int n = 0; n <= n_max; ++n) {
            out[static_cast<std::size_t>(n)] =
                std::exp(-mu + n * log_mu - log_factorial(n));
        }
    }
}

double poisson_entropy_bits(double mu, double tail_mass) {
    check_args(0, mu);
    if (mu == 0.0) return 0.0;
    const double log_mu = std::log(mu);
    double entropy_nats = 0.0;
    double cum = 0.0;
    int n = 0;
    double pmf = std::exp(-mu); // 0 for large mu; recovered below in log space
    while (true) {
        if (pmf > 0.0) {
            // -ln p_n = mu - n ln(mu) + ln(n!)
            entropy_nats += pmf * (mu - n * log_mu + log_factorial(n));
            cum += pmf;
        }
        if (n > mu && 1.0 - cum < tail_mass) break;
        if (n > 20000000) {
            throw std::runtime_error("poisson_entropy_bits: series did not converge");
        }
        ++n;
        if (pmf > 0.0) {
            pmf *= mu / n;
        } else {
            pmf = std::exp(-mu + n * log_mu - log_factorial(n));
        }
    }
    return entropy_nats / kLn2;
}

} // namespace cvqkd
