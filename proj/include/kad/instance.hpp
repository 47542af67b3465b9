#pragma once

#include <optional>

#include "kad/prob_vector.hpp"

namespace kad {

/// One stream position. p is the large base model, q_star the small aligned
/// guide; the optional vectors serve baselines and analyses.
struct InstanceRecord {
    int step = 0;
    ProbVector p;
    ProbVector q_star;
    std::optional<ProbVector> q;            // small base, for implicit reward
    std::optional<ProbVector> p_star;       // large aligned, for entropy analysis
    std::optional<ProbVector> ground_truth; // synthetic P
    std::optional<TokenId> gold;            // 0-based internally, 1-based on the wire
};

} // namespace kad
