#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kad/rng.hpp"

namespace kad {

/// 0-based token index. Interchange formats (JSONL "gold") are 1-based and
/// converted at the serialization boundary.
using TokenId = std::size_t;

class DeferralDecision;

/// Validated categorical distribution over a vocabulary of size >= 2.
/// Construction renormalizes; a pre-normalization sum further than 1e-6
/// from 1 is surfaced via normalization_warning().
class ProbVector {
public:
    explicit ProbVector(std::vector<double> raw);

    std::size_t size() const { return probs_.size(); }
    double operator[](TokenId v) const { return probs_[v]; }
    const std::vector<double>& values() const { return probs_; }

    /// Deviation |sum - 1| of the raw input before renormalization.
    double raw_sum_deviation() const { return raw_sum_deviation_; }
    bool normalization_warning() const { return raw_sum_deviation_ > 1e-6; }

    double max_prob() const;

private:
    std::vector<double> probs_;
    double raw_sum_deviation_ = 0.0;
};

ProbVector make_prob_vector(std::vector<double> raw);

/// (1/2) sum_v |a_v - b_v|.
double tv_distance(const ProbVector& a, const ProbVector& b);

/// Shannon entropy in nats, with 0 log 0 := 0.
double entropy(const ProbVector& p);

/// p restricted to the deferred set of d and renormalized:
/// p_v d_v / sum_w p_w d_w.
ProbVector conditional_restricted(const ProbVector& p, const DeferralDecision& d);

/// Inverse-CDF sampling over the stored order; CDF boundary ties resolve to
/// the lower index.
TokenId sample(const ProbVector& p, Rng& rng);

/// All indices attaining max_w p_w, ties included.
std::vector<TokenId> argmax_set(const ProbVector& p);

} // namespace kad
