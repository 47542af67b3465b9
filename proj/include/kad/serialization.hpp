#pragma once

#include <json.hpp>

#include "kad/deferral.hpp"
#include "kad/instance.hpp"
#include "kad/mixtures.hpp"
#include "kad/speculative.hpp"

namespace kad {

nlohmann::json to_json(const DeferralDecision& d);
nlohmann::json to_json(const MixtureResult& m);

/// JSONL record schema, one object per line. Vectors are full dense
/// distributions; "gold" is 1-based on the wire.
nlohmann::json to_json(const InstanceRecord& rec);
InstanceRecord instance_from_json(const nlohmann::json& j, int default_step);

std::string spec_stats_csv(const SpecRunStats& stats, int gamma);

} // namespace kad
