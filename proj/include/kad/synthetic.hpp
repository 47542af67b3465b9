#pragma once

#include <cstdint>

#include "kad/instance.hpp"
#include "kad/rng.hpp"

namespace kad {

struct SyntheticConfig {
    std::size_t vocab_size = 16;
    double concentration = 1.0; // symmetric Dirichlet parameter
    double correlation = 0.5;   // convex weight of p when synthesizing q* and p*
};

/// Symmetric Dirichlet draw: vocab_size Gamma(concentration, 1) variates,
/// normalized.
ProbVector dirichlet_draw(Rng& rng, std::size_t vocab_size, double concentration);

/// One synthetic stream position. p, q and P are independent Dirichlet
/// draws; q* and p* mix a fresh draw with p at the correlation weight, which
/// models base/aligned top-prediction agreement. Deterministic per seed.
InstanceRecord generate_instance(std::uint64_t seed, const SyntheticConfig& cfg);

} // namespace kad
