#include "kad/serialization.hpp"

#include <cstdio>
#include <numeric>

#include "kad/errors.hpp"

namespace kad {

using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

ProbVector vector_field(const json& j, const char* field) {
    const auto& arr = j.at(field);
    if (!arr.is_array())
        throw SchemaError(std::string("field '") + field + "' must be an array");
    std::vector<double> raw;
    raw.reserve(arr.size());
    for (const auto& x : arr) {
        if (!x.is_number())
            throw SchemaError(std::string("field '") + field + "' has a non-numeric entry");
        raw.push_back(x.get<double>());
    }
    try {
        return ProbVector(std::move(raw));
    } catch (const Error& e) {
        throw SchemaError(std::string("field '") + field + "': " + e.what());
    }
}

} // namespace

json to_json(const DeferralDecision& d) {
    json mask = json::array();
    for (auto m : d.mask) mask.push_back(static_cast<int>(m));
    return json{{"mask", mask}, {"rule", d.rule_tag}, {"param", d.parameter}};
}

json to_json(const MixtureResult& m) {
    return json{{"pi", m.pi.values()},
                {"alpha", m.alpha},
                {"beta", m.beta},
                {"kept_mass", m.kept_mass},
                {"guided_mass", m.guided_mass}};
}

json to_json(const InstanceRecord& rec) {
    json j{{"step", rec.step},
           {"p", rec.p.values()},
           {"q_star", rec.q_star.values()}};
    if (rec.q) j["q"] = rec.q->values();
    if (rec.p_star) j["p_star"] = rec.p_star->values();
    if (rec.ground_truth) j["P"] = rec.ground_truth->values();
    if (rec.gold) j["gold"] = static_cast<long long>(*rec.gold) + 1;
    return j;
}

InstanceRecord instance_from_json(const json& j, int default_step) {
    if (!j.is_object()) throw SchemaError("record must be a JSON object");
    if (!j.contains("p")) throw SchemaError("missing required field 'p'");
    if (!j.contains("q_star")) throw SchemaError("missing required field 'q_star'");

    InstanceRecord rec{j.value("step", default_step),
                       vector_field(j, "p"),
                       vector_field(j, "q_star")};
    if (j.contains("q")) rec.q = vector_field(j, "q");
    if (j.contains("p_star")) rec.p_star = vector_field(j, "p_star");
    if (j.contains("P")) rec.ground_truth = vector_field(j, "P");
    if (j.contains("gold")) {
        const long long g = j.at("gold").get<long long>();
        if (g < 1 || static_cast<std::size_t>(g) > rec.p.size())
            throw SchemaError("field 'gold' out of vocabulary bounds");
        rec.gold = static_cast<TokenId>(g - 1);
    }

    const std::size_t n = rec.p.size();
    auto check = [&](const std::optional<ProbVector>& v, const char* name) {
        if (v && v->size() != n)
            throw SchemaError(std::string("field '") + name + "' has mismatched |V|");
    };
    if (rec.q_star.size() != n) throw SchemaError("field 'q_star' has mismatched |V|");
    check(rec.q, "q");
    check(rec.p_star, "p_star");
    check(rec.ground_truth, "P");
    return rec;
}

std::string spec_stats_csv(const SpecRunStats& stats, int gamma) {
    const double mean_analytic =
        stats.per_position_acceptance.empty()
            ? 0.0
            : std::accumulate(stats.per_position_acceptance.begin(),
                              stats.per_position_acceptance.end(), 0.0) /
                  static_cast<double>(stats.per_position_acceptance.size());
    std::string out = "gamma,positions,proposed,accepted,empirical_rate,mean_analytic_rate\n";
    out += std::to_string(gamma) + "," + std::to_string(stats.emitted.size()) + "," +
           std::to_string(stats.proposed) + "," + std::to_string(stats.accepted) + "," +
           fmt(stats.acceptance_rate) + "," + fmt(mean_analytic) + "\n";
    return out;
}

} // namespace kad
