#include "kad/deferral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kad/errors.hpp"

namespace kad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlackTol = 1e-12;

void require_same_size(std::size_t a, std::size_t b, const char* where) {
    if (a != b) throw DimensionMismatch(std::string(where) + ": |V| mismatch");
}

std::vector<double> loss_table(const ProbVector& p, LossFamily spec) {
    std::vector<double> losses(p.size());
    for (TokenId v = 0; v < p.size(); ++v) losses[v] = loss_eval(spec, p, v);
    return losses;
}

/// Token ids sorted by (loss ascending, id ascending).
std::vector<TokenId> loss_order(const std::vector<double>& losses) {
    std::vector<TokenId> order(losses.size());
    std::iota(order.begin(), order.end(), TokenId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](TokenId a, TokenId b) { return losses[a] < losses[b]; });
    return order;
}

} // namespace

std::size_t DeferralDecision::deferred_count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

bool DeferralDecision::all_deferred() const { return deferred_count() == size(); }
bool DeferralDecision::none_deferred() const { return deferred_count() == 0; }

BoundReport make_bound_report(double lhs, double rhs) {
    BoundReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = (lhs == rhs) ? 0.0 : rhs - lhs;
    r.holds = r.slack >= -kSlackTol;
    return r;
}

double risk(const ProbVector& ground_truth, const ProbVector& p, LossFamily spec,
            const DeferralDecision& d) {
    require_same_size(ground_truth.size(), p.size(), "risk");
    require_same_size(p.size(), d.size(), "risk");
    double acc = 0.0;
    for (TokenId v = 0; v < p.size(); ++v) {
        if (d.mask[v] || ground_truth[v] == 0.0) continue;
        acc += ground_truth[v] * loss_eval(spec, p, v);
    }
    return acc;
}

double deferred_mass(const ProbVector& ground_truth, const DeferralDecision& d) {
    require_same_size(ground_truth.size(), d.size(), "deferred_mass");
    double acc = 0.0;
    for (TokenId v = 0; v < d.size(); ++v)
        if (d.mask[v]) acc += ground_truth[v];
    return acc;
}

double lagrangian(const ProbVector& ground_truth, const ProbVector& p, LossFamily spec,
                  const DeferralDecision& d, double mu, double b) {
    if (mu < 0.0) throw ParameterOutOfRange("lagrangian: mu must be >= 0");
    return risk(ground_truth, p, spec, d) + mu * (deferred_mass(ground_truth, d) - b);
}

DeferralDecision dual_deferral(const ProbVector& p, LossFamily spec, double mu) {
    if (mu < 0.0) throw ParameterOutOfRange("dual_deferral: mu must be >= 0");
    if (spec == LossFamily::ZeroOne && (mu <= 0.0 || mu >= 1.0))
        throw ParameterOutOfRange("dual_deferral: zero_one loss needs mu in (0,1)");
    DeferralDecision d;
    d.mask.resize(p.size());
    for (TokenId v = 0; v < p.size(); ++v)
        d.mask[v] = loss_eval(spec, p, v) > mu ? 1 : 0;
    d.rule_tag = "dual:" + loss_name(spec);
    d.parameter = mu;
    return d;
}

DeferralDecision threshold_deferral(const ProbVector& p, double lambda) {
    if (lambda <= 0.0 || lambda >= 1.0)
        throw ParameterOutOfRange("threshold_deferral: lambda must be in (0,1)");
    DeferralDecision d;
    d.mask.resize(p.size());
    for (TokenId v = 0; v < p.size(); ++v) d.mask[v] = p[v] < lambda ? 1 : 0;
    d.rule_tag = "threshold";
    d.parameter = lambda;
    return d;
}

CriticalElement critical_element(const ProbVector& weights, const ProbVector& p,
                                 LossFamily spec, double b) {
    require_same_size(weights.size(), p.size(), "critical_element");
    if (b <= 0.0 || b >= 1.0)
        throw ParameterOutOfRange("critical_element: b must be in (0,1)");
    const auto losses = loss_table(p, spec);
    const auto order = loss_order(losses);
    const std::size_t n = order.size();

    // tail[k] = weight mass of sorted positions k..n-1
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) tail[k] = tail[k + 1] + weights[order[k]];

    for (std::size_t k = 0; k < n; ++k) {
        if (tail[k + 1] <= b + kSlackTol) {
            CriticalElement ce;
            ce.token = order[k];
            ce.sorted_position = k;
            ce.multiplier = losses[order[k]];
            ce.tail_mass = tail[k + 1];
            for (std::size_t i = 0; i + 1 < n && !ce.loss_ties; ++i)
                ce.loss_ties = losses[order[i]] == losses[order[i + 1]];
            return ce;
        }
    }
    throw DegenerateBudget("critical_element: no index satisfies the budget scan");
}

DeferralDecision primal_plugin_deferral(const ProbVector& p, LossFamily spec, double b) {
    if (b <= 0.0 || b >= 1.0)
        throw ParameterOutOfRange("primal_plugin_deferral: b must be in (0,1)");
    const CriticalElement ce = critical_element(p, p, spec, b);
    DeferralDecision d;
    d.mask.resize(p.size());
    for (TokenId v = 0; v < p.size(); ++v)
        d.mask[v] = loss_eval(spec, p, v) > ce.multiplier ? 1 : 0;
    d.rule_tag = "primal:" + loss_name(spec);
    d.parameter = b;
    return d;
}

DeferralDecision primal_zero_one_rule(const ProbVector& p, double b) {
    if (b <= 0.0 || b >= 1.0)
        throw ParameterOutOfRange("primal_zero_one_rule: b must be in (0,1)");
    const double top = p.max_prob();
    const bool active = top >= 1.0 - b;
    DeferralDecision d;
    d.mask.resize(p.size());
    for (TokenId v = 0; v < p.size(); ++v)
        d.mask[v] = (active && p[v] != top) ? 1 : 0;
    d.rule_tag = "primal:zero_one:closed_form";
    d.parameter = b;
    return d;
}

DeferralDecision exact_knapsack(const ProbVector& ground_truth, const ProbVector& p,
                                LossFamily spec, double b) {
    require_same_size(ground_truth.size(), p.size(), "exact_knapsack");
    if (b < 0.0 || b > 1.0)
        throw ParameterOutOfRange("exact_knapsack: b must be in [0,1]");
    const std::size_t n = p.size();
    if (n > 20)
        throw VocabularyTooLarge("exact_knapsack: |V| > 20 (got " + std::to_string(n) + ")");

    const auto losses = loss_table(p, spec);
    double best_risk = kInf;
    std::size_t best_count = n + 1;
    std::uint32_t best_bits = 0;
    bool found = false;

    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        double mass = 0.0, r = 0.0;
        std::size_t count = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (bits & (1u << v)) {
                mass += ground_truth[v];
                ++count;
            } else if (ground_truth[v] > 0.0) {
                r += ground_truth[v] * losses[v];
            }
        }
        if (mass > b + kSlackTol) continue;
        bool better;
        if (!found || r < best_risk) {
            better = true;
        } else if (r == best_risk) {
            if (count != best_count) {
                better = count < best_count;
            } else {
                // lexicographic over token order, token 0 most significant
                better = false;
                for (std::size_t v = 0; v < n; ++v) {
                    const bool a = bits & (1u << v), bb = best_bits & (1u << v);
                    if (a != bb) { better = !a; break; }
                }
            }
        } else {
            better = false;
        }
        if (better) {
            best_risk = r;
            best_count = count;
            best_bits = bits;
            found = true;
        }
    }

    DeferralDecision d;
    d.mask.resize(n);
    for (std::size_t v = 0; v < n; ++v) d.mask[v] = (best_bits >> v) & 1u;
    d.rule_tag = "exact";
    d.parameter = b;
    return d;
}

BoundReport check_dual_bound(const ProbVector& ground_truth, const ProbVector& p,
                             LossFamily spec, double mu, double b) {
    const DeferralDecision dual = dual_deferral(p, spec, mu);
    const double lhs = lagrangian(ground_truth, p, spec, dual, mu, b);
    const DeferralDecision opt = exact_knapsack(ground_truth, p, spec, b);
    const double rhs = risk(ground_truth, p, spec, opt);
    return make_bound_report(lhs, rhs);
}

std::pair<BoundReport, BoundReport> check_regret_bounds(const ProbVector& ground_truth,
                                                        const ProbVector& p,
                                                        LossFamily spec, double b) {
    const auto losses = loss_table(p, spec);
    const auto order = loss_order(losses);

    const CriticalElement exact_ce = critical_element(ground_truth, p, spec, b);
    const CriticalElement plugin_ce = critical_element(p, p, spec, b);

    auto mask_above = [&](double mu, const char* tag) {
        DeferralDecision d;
        d.mask.resize(p.size());
        for (TokenId v = 0; v < p.size(); ++v) d.mask[v] = losses[v] > mu ? 1 : 0;
        d.rule_tag = tag;
        d.parameter = b;
        return d;
    };
    const DeferralDecision d_exact_primal = mask_above(exact_ce.multiplier, "primal:exact_weights");
    const DeferralDecision d_plugin = mask_above(plugin_ce.multiplier, "primal:plugin");

    const double r_exact_primal = risk(ground_truth, p, spec, d_exact_primal);
    const double r_plugin = risk(ground_truth, p, spec, d_plugin);

    const std::size_t lo = std::min(exact_ce.sorted_position, plugin_ce.sorted_position);
    const std::size_t hi = std::max(exact_ce.sorted_position, plugin_ce.sorted_position);
    double window_mass = 0.0;
    for (std::size_t k = lo + 1; k <= hi; ++k) window_mass += ground_truth[order[k]];

    const double lhs1 =
        (r_exact_primal == r_plugin) ? 0.0 : std::abs(r_exact_primal - r_plugin);
    const double factor = tv_distance(ground_truth, p) + window_mass;
    const double rhs1 = factor == 0.0 ? 0.0 : losses[order[hi]] * factor;
    const BoundReport first = make_bound_report(lhs1, rhs1);

    const DeferralDecision opt = exact_knapsack(ground_truth, p, spec, b);
    const double lhs2 = r_exact_primal - risk(ground_truth, p, spec, opt);
    const double rhs2 = exact_ce.multiplier * ground_truth[exact_ce.token];
    const BoundReport second = make_bound_report(lhs2, rhs2);

    return {first, second};
}

} // namespace kad
