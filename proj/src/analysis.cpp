#include "kad/analysis.hpp"

#include "kad/errors.hpp"

namespace kad {

SelectionHistogram p_selection_stats(const std::vector<InstanceRecord>& instances,
                                     const RuleSpec& rule) {
    SelectionHistogram hist;
    std::array<std::size_t, 5> counts{};
    for (const auto& rec : instances) {
        const RuleOutcome out = apply_rule(rule, rec);
        if (!out.decision)
            throw ParameterOutOfRange("p_selection_stats needs a rule with a mask");
        const std::size_t kept = rec.p.size() - out.decision->deferred_count();
        ++counts[std::min<std::size_t>(kept, 4)];
        ++hist.total;
    }
    if (hist.total == 0)
        throw NoEligibleInstances("p_selection_stats: empty instance set");
    for (std::size_t i = 0; i < counts.size(); ++i)
        hist.proportions[i] =
            static_cast<double>(counts[i]) / static_cast<double>(hist.total);
    return hist;
}

std::vector<EntropyDiffRow> entropy_diff_analysis(
    const std::vector<InstanceRecord>& instances,
    const std::vector<double>& lambda_grid) {
    bool any_eligible = false;
    for (const auto& rec : instances)
        if (rec.p_star) any_eligible = true;
    if (!any_eligible)
        throw NoEligibleInstances("entropy_diff_analysis: no instance carries p_star");

    std::vector<EntropyDiffRow> rows;
    rows.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        EntropyDiffRow row;
        row.lambda = lambda;
        double acc = 0.0;
        for (const auto& rec : instances) {
            if (!rec.p_star) continue;
            const DeferralDecision d = threshold_deferral(rec.p, lambda);
            double mass_p = 0.0, mass_p_star = 0.0;
            for (TokenId v = 0; v < rec.p.size(); ++v) {
                if (d.mask[v]) {
                    mass_p += rec.p[v];
                    mass_p_star += (*rec.p_star)[v];
                }
            }
            if (mass_p <= 0.0 || mass_p_star <= 0.0) {
                ++row.skipped;
                continue;
            }
            acc += entropy(conditional_restricted(rec.p, d)) -
                   entropy(conditional_restricted(*rec.p_star, d));
            ++row.used;
        }
        row.mean_diff = row.used > 0 ? acc / static_cast<double>(row.used) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace kad
