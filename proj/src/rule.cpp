#include "kad/rule.hpp"

#include <vector>

#include "kad/errors.hpp"

namespace kad {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_real(const std::string& s) {
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ParameterOutOfRange("rule: cannot parse number '" + s + "'");
    }
}

} // namespace

RuleSpec RuleSpec::parse(const std::string& text) {
    const auto parts = split(text, ':');
    RuleSpec r;
    if (parts[0] == "dual" || parts[0] == "primal") {
        if (parts.size() != 3)
            throw ParameterOutOfRange("rule: expected " + parts[0] + ":<loss>:<value>");
        r.kind = parts[0] == "dual" ? Kind::Dual : Kind::Primal;
        r.loss = parse_loss(parts[1]);
        r.param = parse_real(parts[2]);
    } else if (parts[0] == "threshold" || parts[0] == "nudging") {
        if (parts.size() != 2)
            throw ParameterOutOfRange("rule: expected " + parts[0] + ":<lambda>");
        r.kind = parts[0] == "threshold" ? Kind::Threshold : Kind::Nudging;
        r.param = parse_real(parts[1]);
    } else if (parts[0] == "implicit_reward") {
        if (parts.size() != 1)
            throw ParameterOutOfRange("rule: implicit_reward takes no parameter");
        r.kind = Kind::ImplicitReward;
    } else {
        throw ParameterOutOfRange("unknown rule: " + text);
    }
    return r;
}

std::string RuleSpec::tag() const {
    switch (kind) {
        case Kind::Dual: return "dual:" + loss_name(loss);
        case Kind::Threshold: return "threshold";
        case Kind::Primal: return "primal:" + loss_name(loss);
        case Kind::Nudging: return "nudging";
        case Kind::ImplicitReward: return "implicit_reward";
    }
    return "?";
}

RuleOutcome apply_rule(const RuleSpec& rule, const InstanceRecord& rec) {
    switch (rule.kind) {
        case RuleSpec::Kind::Dual:
        case RuleSpec::Kind::Threshold:
        case RuleSpec::Kind::Primal: {
            DeferralDecision d;
            if (rule.kind == RuleSpec::Kind::Dual)
                d = dual_deferral(rec.p, rule.loss, rule.param);
            else if (rule.kind == RuleSpec::Kind::Threshold)
                d = threshold_deferral(rec.p, rule.param);
            else
                d = primal_plugin_deferral(rec.p, rule.loss, rule.param);
            MixtureResult m = mixture(rec.p, rec.q_star, d);
            return RuleOutcome{std::move(m.pi), std::move(d), m.alpha, m.beta};
        }
        case RuleSpec::Kind::Nudging: {
            // Chow's rule as a whole-distribution mask, so alpha and beta
            // bookkeeping comes out of the same mixture path.
            if (rule.param <= 0.0 || rule.param >= 1.0)
                throw ParameterOutOfRange("nudging: lambda must be in (0,1)");
            const bool defer_all = rec.p.max_prob() < rule.param;
            DeferralDecision d;
            d.mask.assign(rec.p.size(), defer_all ? 1 : 0);
            d.rule_tag = "nudging";
            d.parameter = rule.param;
            MixtureResult m = mixture(rec.p, rec.q_star, d);
            return RuleOutcome{std::move(m.pi), std::move(d), m.alpha, m.beta};
        }
        case RuleSpec::Kind::ImplicitReward: {
            if (!rec.q)
                throw SchemaError("implicit_reward rule needs the q field");
            return RuleOutcome{implicit_reward(rec.p, *rec.q, rec.q_star),
                               std::nullopt, std::nullopt, std::nullopt};
        }
    }
    throw ParameterOutOfRange("unreachable rule kind");
}

} // namespace kad
