#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kad/deferral.hpp"
#include "kad/instance.hpp"
#include "kad/prob_vector.hpp"
#include "kad/rule.hpp"

namespace kad {

struct SpeculativeConfig {
    int gamma = 5;             // draft window size
    std::uint64_t seed = 0;
    std::size_t num_positions = 1;
};

struct SpecRunStats {
    std::size_t proposed = 0; // drafted tokens put through verification
    std::size_t accepted = 0; // drafted tokens accepted
    double acceptance_rate = 0.0;
    std::vector<double> per_position_acceptance; // analytic 1 - TV(pi, q*)
    std::vector<TokenId> emitted;                // output token sequence
    std::size_t zero_draft_accepts = 0;          // drafted tokens with q*_x = 0
};

/// Per-token acceptance chance of speculative verification:
/// a(pi, q*) = 1 - TV(pi, q*).
double acceptance_probability(const ProbVector& target, const ProbVector& draft);

/// Normalized positive part of (target - draft), sampled on rejection.
ProbVector residual_distribution(const ProbVector& target, const ProbVector& draft);

/// One draft-and-verify step at a single position: draw x from the draft,
/// accept with probability min(1, target_x / draft_x), otherwise emit a
/// residual sample. The emitted token is distributed exactly as the target.
struct VerifyStep {
    TokenId token = 0;
    bool accepted = false;
    bool zero_draft_prob = false;
};
VerifyStep verify_step(const ProbVector& target, const ProbVector& draft, Rng& rng);

/// Window-based speculative sampling over a replayed stream: draft gamma
/// tokens from q*, verify left-to-right against the per-position target pi
/// built by the rule, replace the first rejection with a residual sample and
/// append a bonus target sample on full acceptance.
SpecRunStats speculative_run(std::span<const InstanceRecord> stream,
                             const RuleSpec& rule, const SpeculativeConfig& cfg);

/// Verification of the acceptance-rate bound on a single (p, q*, lambda)
/// instance.
/// First bound: TV(pi^{<lambda}, q*) <= TV(phi, q*) + alpha (1 - beta),
/// always evaluated. Second bound: TV(pi^{<lambda}, q*) <= TV(phi, q*),
/// evaluated only when both stated conditions hold; the flags are returned
/// regardless.
struct TvLemmaReport {
    BoundReport first;
    bool cond_max_above_lambda = false; // max_v p_v >= lambda
    bool cond_deferred_dominated = false; // p_v < lambda => p_v <= alpha q*_v
    std::optional<BoundReport> second;
};
TvLemmaReport check_tv_lemma(const ProbVector& p, const ProbVector& q_star,
                             double lambda);

} // namespace kad
