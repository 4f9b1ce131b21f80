#include "cvqkd/truncation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cvqkd {

namespace {

constexpr int kLogFactorialTableSize = 4097;

const std::vector<double>& log_factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kLogFactorialTableSize);
        t[0] = 0.0;
        for (int n = 1; n < kLogFactorialTableSize; ++n) {
            t[n] = t[n - 1] + std::log(static_cast<double>(n));
        }
        return t;
    }();
    return table;
}

} // namespace

double log_factorial(int n) {
    if (n < 0) {
        throw std::invalid_argument("log_factorial: negative argument");
    }
    const auto& table = log_factorial_table();
    if (n < kLogFactorialTableSize) {
        return table[static_cast<std::size_t>(n)];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

void TruncationPolicy::validate() const {
    if (!(tail_mass > 0.0) || !(tail_mass < 1.0)) {
        throw std::invalid_argument("TruncationPolicy: tail_mass must be in (0,1)");
    }
    if (max_cutoff < 8) {
        throw std::invalid_argument("TruncationPolicy: max_cutoff must be >= 8");
    }
    if (!(safety_factor >= 1.0)) {
        throw std::invalid_argument("TruncationPolicy: safety_factor must be >= 1");
    }
}

CutoffResult choose_cutoff(double mu_max, const TruncationPolicy& policy) {
    policy.validate();
    if (!(mu_max >= 0.0) || !std::isfinite(mu_max)) {
        throw std::invalid_argument("choose_cutoff: mu_max must be finite and >= 0");
    }

    // Largest index that could still map below the cap after padding.
    const int n_stop =
        static_cast<int>(std::ceil(policy.max_cutoff / policy.safety_factor)) + 1;

    int n_needed = -1;
    if (mu_max == 0.0) {
        n_needed = 0;
    } else {
        // Walk the pmf upward until the survival mass drops below tail_mass.
        double log_pmf0 = -mu_max;
        double pmf = std::exp(log_pmf0);
        double cdf = pmf;
        const double target = 1.0 - policy.tail_mass;
        if (cdf >= target) {
            n_needed = 0;
        } else {
            for (int n = 1; n <= n_stop; ++n) {
                if (pmf > 0.0) {
                    pmf *= mu_max / n;
                } else {
                    // exp(-mu) underflowed; evaluate this term in log space.
                    double lp = -mu_max + n * std::log(mu_max) - log_factorial(n);
                    pmf = std::exp(lp);
                }
                cdf += pmf;
                if (cdf >= target) {
                    n_needed = n;
                    break;
                }
            }
        }
    }

    CutoffResult result;
    if (n_needed < 0) {
        result.value = policy.max_cutoff;
        result.saturated = true;
        return result;
    }
    double padded = std::ceil(n_needed * policy.safety_factor);
    int value = static_cast<int>(padded);
    if (value < 8) value = 8;
    if (value >= policy.max_cutoff) {
        result.value = policy.max_cutoff;
        result.saturated = true;
    } else {
        result.value = value;
    }
    return result;
}

} // namespace cvqkd
