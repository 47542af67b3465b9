#pragma once

#include <array>
#include <vector>

#include "kad/instance.hpp"
#include "kad/rule.hpp"

namespace kad {

/// Distribution of the number of non-deferred tokens, bucketed as
/// 0, 1, 2, 3 and >= 4 kept.
struct SelectionHistogram {
    std::array<double, 5> proportions{}; // kept = 0,1,2,3,>=4
    std::size_t total = 0;
};
SelectionHistogram p_selection_stats(const std::vector<InstanceRecord>& instances,
                                     const RuleSpec& rule);

/// Per-lambda mean of H[p | deferred set] - H[p* | deferred set] under the
/// threshold mask; positions with an empty deferred set are skipped and
/// counted.
struct EntropyDiffRow {
    double lambda = 0.0;
    double mean_diff = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
};
std::vector<EntropyDiffRow> entropy_diff_analysis(
    const std::vector<InstanceRecord>& instances,
    const std::vector<double>& lambda_grid);

} // namespace kad
