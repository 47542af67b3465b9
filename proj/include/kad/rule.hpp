#pragma once

#include <optional>
#include <string>

#include "kad/deferral.hpp"
#include "kad/instance.hpp"
#include "kad/mixtures.hpp"

namespace kad {

/// Parsed deferral-rule configuration, e.g. "dual:logistic:0.1",
/// "threshold:0.4", "primal:logistic:0.9", "nudging:0.4", "implicit_reward".
struct RuleSpec {
    enum class Kind { Dual, Threshold, Primal, Nudging, ImplicitReward };

    Kind kind = Kind::Threshold;
    LossFamily loss = LossFamily::Logistic; // Dual and Primal only
    double param = 0.0;                     // mu, lambda or b

    static RuleSpec parse(const std::string& text);
    std::string tag() const;
};

/// Output distribution of a rule applied to one stream position, with the
/// deferral bookkeeping when the rule has a mask (implicit reward has none).
struct RuleOutcome {
    ProbVector pi;
    std::optional<DeferralDecision> decision;
    std::optional<double> alpha;
    std::optional<double> beta;
};

RuleOutcome apply_rule(const RuleSpec& rule, const InstanceRecord& rec);

} // namespace kad
