#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kad {

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_slack = 0.0; // most negative slack observed
    double seconds = 0.0;
    std::string detail;

    bool passed() const { return checked > 0 && violations == 0; }
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    std::size_t oracle_instances = 1000;
    std::size_t feasibility_instances = 10000;
    std::size_t equivalence_instances = 10000;
    std::size_t regret_instances = 1000;
    std::size_t tv_instances = 10000;
    std::size_t tv_condition_hits = 100;
    std::size_t histogram_samples = 1000000;
    std::size_t acceptance_positions = 100000;
};

/// Exhaustive-oracle optimality: the knapsack optimum never loses to the
/// exact-weights primal rule or to any budget-feasible dual rule.
SuiteResult verify_oracle_optimality(const VerifyOptions& opt);

/// Weak duality: L(dual(mu), mu) <= optimal risk on a mu grid that includes
/// every loss breakpoint.
SuiteResult verify_weak_duality(const VerifyOptions& opt);

/// Plugin primal rule stays within budget under its own weights, all losses.
SuiteResult verify_primal_feasibility(const VerifyOptions& opt);

/// Order-inverting losses give bit-identical primal masks; the 0-1 closed
/// form matches the generic plugin path.
SuiteResult verify_loss_equivalence(const VerifyOptions& opt);

/// Both plugin regret bounds hold with independently drawn ground truth.
SuiteResult verify_regret_bounds(const VerifyOptions& opt);

/// Acceptance-rate lemma: unconditional bound everywhere, conditional bound
/// on rejection-sampled condition-satisfying instances, and the worked
/// three-token example lands on 0.4 = 0.4.
SuiteResult verify_tv_lemma(const VerifyOptions& opt);

/// Speculative sampling emits the target distribution and the empirical
/// acceptance rate matches 1 - TV for each draft window size.
SuiteResult verify_speculative_exactness(const VerifyOptions& opt);

/// Mixture bookkeeping: validity, alpha/beta accounting, mass conservation
/// and bit-exact extreme masks.
SuiteResult verify_mixture_identities(const VerifyOptions& opt);

std::vector<SuiteResult> verify_all(const VerifyOptions& opt);

} // namespace kad
