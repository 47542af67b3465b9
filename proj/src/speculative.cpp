#include "kad/speculative.hpp"

#include <algorithm>
#include <cmath>

#include "kad/errors.hpp"
#include "kad/mixtures.hpp"

namespace kad {

double acceptance_probability(const ProbVector& target, const ProbVector& draft) {
    return 1.0 - tv_distance(target, draft);
}

ProbVector residual_distribution(const ProbVector& target, const ProbVector& draft) {
    if (target.size() != draft.size())
        throw DimensionMismatch("residual_distribution: |V| mismatch");
    std::vector<double> res(target.size());
    double total = 0.0;
    for (TokenId v = 0; v < target.size(); ++v) {
        res[v] = std::max(0.0, target[v] - draft[v]);
        total += res[v];
    }
    if (total <= 0.0)
        throw ZeroResidual("residual_distribution: target equals draft");
    return ProbVector(std::move(res));
}

VerifyStep verify_step(const ProbVector& target, const ProbVector& draft, Rng& rng) {
    if (target.size() != draft.size())
        throw DimensionMismatch("verify_step: |V| mismatch");
    VerifyStep step;
    const TokenId x = sample(draft, rng);
    const double u = rng.uniform();
    bool accept;
    if (draft[x] <= 0.0) {
        // Cannot happen when drafting from q* itself, only with replayed
        // truncated logs: treat the unbounded ratio as accept.
        step.zero_draft_prob = true;
        accept = target[x] > 0.0;
    } else {
        accept = u < std::min(1.0, target[x] / draft[x]);
    }
    if (accept) {
        step.token = x;
        step.accepted = true;
    } else {
        step.token = sample(residual_distribution(target, draft), rng);
        step.accepted = false;
    }
    return step;
}

SpecRunStats speculative_run(std::span<const InstanceRecord> stream,
                             const RuleSpec& rule, const SpeculativeConfig& cfg) {
    if (cfg.gamma < 1)
        throw ParameterOutOfRange("speculative_run: gamma must be >= 1");
    if (cfg.num_positions < 1)
        throw ParameterOutOfRange("speculative_run: num_positions must be >= 1");

    SpecRunStats stats;
    Rng rng(cfg.seed);

    auto target_at = [&](std::size_t pos) -> ProbVector {
        if (pos >= stream.size())
            throw StreamExhausted("speculative_run: stream ended at position " +
                                  std::to_string(pos));
        return apply_rule(rule, stream[pos]).pi;
    };

    std::size_t pos = 0;
    while (stats.emitted.size() < cfg.num_positions) {
        bool window_rejected = false;
        int j = 0;
        for (; j < cfg.gamma && stats.emitted.size() < cfg.num_positions; ++j) {
            if (pos + j >= stream.size())
                throw StreamExhausted("speculative_run: stream ended at position " +
                                      std::to_string(pos + j));
            const ProbVector& draft = stream[pos + j].q_star;
            const ProbVector target = target_at(pos + j);
            stats.per_position_acceptance.push_back(acceptance_probability(target, draft));

            const VerifyStep step = verify_step(target, draft, rng);
            ++stats.proposed;
            if (step.zero_draft_prob) ++stats.zero_draft_accepts;
            stats.emitted.push_back(step.token);
            if (step.accepted) {
                ++stats.accepted;
            } else {
                window_rejected = true;
                ++j; // residual sample consumed this position
                break;
            }
        }
        if (!window_rejected && j == cfg.gamma &&
            stats.emitted.size() < cfg.num_positions) {
            // full acceptance: bonus token from the target after the window
            stats.emitted.push_back(sample(target_at(pos + cfg.gamma), rng));
            ++j;
        }
        pos += static_cast<std::size_t>(j);
    }

    stats.acceptance_rate =
        stats.proposed == 0 ? 0.0
                            : static_cast<double>(stats.accepted) /
                                  static_cast<double>(stats.proposed);
    return stats;
}

TvLemmaReport check_tv_lemma(const ProbVector& p, const ProbVector& q_star,
                             double lambda) {
    const MixtureResult mix = threshold_mixture(p, q_star, lambda);
    const ProbVector phi = nudging(p, q_star, lambda);

    TvLemmaReport report;
    const double lhs = tv_distance(mix.pi, q_star);
    const double tv_phi = tv_distance(phi, q_star);
    report.first = make_bound_report(lhs, tv_phi + mix.alpha * (1.0 - mix.beta));

    report.cond_max_above_lambda = p.max_prob() >= lambda;
    report.cond_deferred_dominated = true;
    for (TokenId v = 0; v < p.size(); ++v) {
        if (p[v] < lambda && p[v] > mix.alpha * q_star[v]) {
            report.cond_deferred_dominated = false;
            break;
        }
    }
    if (report.cond_max_above_lambda && report.cond_deferred_dominated)
        report.second = make_bound_report(lhs, tv_phi);
    return report;
}

} // namespace kad
