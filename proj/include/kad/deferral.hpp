#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kad/losses.hpp"
#include "kad/prob_vector.hpp"

namespace kad {

/// Binary deferral mask over the vocabulary. mask[v] == 1 hands token v's
/// decision to the guide; rule_tag/parameter record how the mask was built.
struct DeferralDecision {
    std::vector<std::uint8_t> mask;
    std::string rule_tag;
    double parameter = 0.0;

    std::size_t size() const { return mask.size(); }
    std::size_t deferred_count() const;
    bool all_deferred() const;
    bool none_deferred() const;
};

/// Result of the budget scan over the increasing-loss order: the token at
/// which cumulative tail weight crosses the budget. Its loss is the optimal
/// Lagrangian multiplier.
struct CriticalElement {
    TokenId token = 0;            // original token id of the critical element
    std::size_t sorted_position = 0; // 0-based position in increasing-loss order
    double multiplier = 0.0;      // loss(p, token)
    double tail_mass = 0.0;       // weight mass strictly after the critical element
    bool loss_ties = false;       // sorted order had exact loss ties
};

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
    bool holds = false; // slack >= -1e-12
};

BoundReport make_bound_report(double lhs, double rhs);

/// r(d) = sum_v P_v loss(p, v) (1 - d_v). Terms with P_v = 0 contribute 0
/// even when the loss is infinite; +infinity is a value, not an error.
double risk(const ProbVector& ground_truth, const ProbVector& p, LossFamily spec,
            const DeferralDecision& d);

/// sum_v P_v d_v, the probability mass handed to the guide.
double deferred_mass(const ProbVector& ground_truth, const DeferralDecision& d);

/// L(d, mu) = r(d) + mu (sum_v P_v d_v - b).
double lagrangian(const ProbVector& ground_truth, const ProbVector& p, LossFamily spec,
                  const DeferralDecision& d, double mu, double b);

/// Dual solution at multiplier mu: d_v = [loss(p, v) > mu], strict.
DeferralDecision dual_deferral(const ProbVector& p, LossFamily spec, double mu);

/// d_v = [p_v < lambda]; tokens with p_v exactly lambda are kept.
DeferralDecision threshold_deferral(const ProbVector& p, double lambda);

/// Scan the increasing-loss order (ties broken by ascending token id) for
/// the element where cumulative tail weight crosses b. weights is the
/// ground truth P in exact mode or p itself in plugin mode.
CriticalElement critical_element(const ProbVector& weights, const ProbVector& p,
                                 LossFamily spec, double b);

/// Plugin primal rule: d_v = [loss(p, v) > mu~] with mu~ from
/// critical_element(p, p, spec, b). Always budget-feasible under p.
DeferralDecision primal_plugin_deferral(const ProbVector& p, LossFamily spec, double b);

/// Closed-form primal rule for the 0-1 loss:
/// d_v = [max_w p_w >= 1 - b and v not in argmax].
DeferralDecision primal_zero_one_rule(const ProbVector& p, double b);

/// Exhaustive oracle over all 2^|V| masks (|V| <= 20): the feasible d
/// minimizing r(d); ties broken by fewer deferred tokens, then by
/// lexicographically smallest mask.
DeferralDecision exact_knapsack(const ProbVector& ground_truth, const ProbVector& p,
                                LossFamily spec, double b);

/// Weak duality: L(dual(mu), mu) <= r(exact optimum).
BoundReport check_dual_bound(const ProbVector& ground_truth, const ProbVector& p,
                             LossFamily spec, double mu, double b);

/// Regret bounds of the plugin approximation. First report:
/// |r(d^+) - r(d~+)| <= loss(p, u) (TV(P, p) + sum_{v=l..u} P_v) with
/// l = min(k^, k~)+1 and u = max(k^, k~) in sorted order. Second report:
/// r(d^+) - r(d^) <= loss(p, k^) P_{k^}.
std::pair<BoundReport, BoundReport> check_regret_bounds(const ProbVector& ground_truth,
                                                        const ProbVector& p,
                                                        LossFamily spec, double b);

} // namespace kad
