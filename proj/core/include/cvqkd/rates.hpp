#pragma once

#include <string>

#include "cvqkd/channel.hpp"
#include "cvqkd/truncation.hpp"

namespace cvqkd {

enum class Scheme { HD, PNR };
enum class Attack { Individual, Collective };
enum class Direction { Direct, Reverse };

std::string to_string(Scheme s);
std::string to_string(Attack a);
std::string to_string(Direction d);

/// Numerical settings shared by the rate computations.
struct NumericsConfig {
    int grid_order = 64;
    TruncationPolicy policy{};
    /// Multiplier on every derived Fock/support cutoff (convergence runs).
    double cutoff_scale = 1.0;
};

struct RateQuery {
    Scheme scheme = Scheme::HD;
    Attack attack = Attack::Individual;
    Direction direction = Direction::Direct;
    ProtocolParams params{};
    NumericsConfig numerics{};
};

/// One point of a key-rate curve: delta_i = info_first - info_second,
/// in bits per channel use (negative values mean no secure key).
struct KgrPoint {
    double eta = 0.0;
    double delta_i = 0.0;
    double info_first = 0.0;
    double info_second = 0.0;
    /// One-sided truncation error bound on info_second (photocounting
    /// reverse-reconciliation Holevo term only; 0 elsewhere).
    double second_error_bound = 0.0;
    bool truncation_saturated = false;
};

/// Key rate against individual attacks: the legitimate mutual information
/// minus the adversary's (sender- or receiver-side, per direction).
KgrPoint kgr_individual(const RateQuery& query);

/// Key rate against collective attacks: mutual information minus the
/// corresponding Holevo bound.
KgrPoint kgr_collective(const RateQuery& query);

/// Dispatches on query.attack.
KgrPoint kgr_point(const RateQuery& query);

} // namespace cvqkd
