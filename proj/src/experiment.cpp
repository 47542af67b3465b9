#include "kad/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <thread>

#include "kad/errors.hpp"
#include "kad/replay.hpp"
#include "kad/serialization.hpp"
#include "kad/speculative.hpp"
#include "kad/synthetic.hpp"

namespace kad {

DefaultGrids default_grids() { return DefaultGrids{}; }

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

LossFamily risk_loss(const RuleSpec& rule) {
    switch (rule.kind) {
        case RuleSpec::Kind::Dual:
        case RuleSpec::Kind::Primal:
            return rule.loss;
        case RuleSpec::Kind::Threshold:
            return LossFamily::Logistic; // threshold is the logistic dual rule
        case RuleSpec::Kind::Nudging:
            return LossFamily::MinEntropy;
        case RuleSpec::Kind::ImplicitReward:
            break;
    }
    return LossFamily::Logistic;
}

struct Row {
    std::string text;
    double alpha = 0.0, beta = 0.0, tv = 0.0, acceptance = 0.0;
    bool has_mask = false;
};

Row make_row(const RuleSpec& rule, const std::string& rule_tag, double rule_param,
             const InstanceRecord& rec) {
    const RuleOutcome out = apply_rule(rule, rec);
    Row row;
    row.tv = tv_distance(out.pi, rec.q_star);
    row.acceptance = 1.0 - row.tv;

    std::string n_deferred, alpha, beta, risk_field;
    if (out.decision) {
        row.has_mask = true;
        row.alpha = *out.alpha;
        row.beta = *out.beta;
        n_deferred = std::to_string(out.decision->deferred_count());
        alpha = fmt(row.alpha);
        beta = fmt(row.beta);
        if (rec.ground_truth)
            risk_field = fmt(risk(*rec.ground_truth, rec.p, risk_loss(rule), *out.decision));
    }
    row.text = std::to_string(rec.step) + "," + rule_tag + "," + fmt(rule_param) + "," +
               n_deferred + "," + alpha + "," + beta + "," + risk_field + "," +
               fmt(row.tv) + "," + fmt(row.acceptance);
    return row;
}

} // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("KAD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<InstanceRecord> make_stream(const ExperimentConfig& cfg) {
    if (cfg.source == "synthetic") {
        SyntheticConfig syn{cfg.vocab_size, cfg.concentration, cfg.correlation};
        std::vector<InstanceRecord> stream;
        stream.reserve(cfg.num_instances);
        for (std::size_t i = 0; i < cfg.num_instances; ++i) {
            InstanceRecord rec = generate_instance(derive_seed(cfg.seed, i), syn);
            rec.step = static_cast<int>(i);
            stream.push_back(std::move(rec));
        }
        return stream;
    }
    if (cfg.source.rfind("replay:", 0) == 0) {
        auto stream = load_replay(cfg.source.substr(7));
        if (cfg.num_instances > 0 && stream.size() > cfg.num_instances)
            stream.erase(stream.begin() + static_cast<std::ptrdiff_t>(cfg.num_instances),
                         stream.end());
        return stream;
    }
    throw ParameterOutOfRange("unknown source: " + cfg.source);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const RuleSpec rule = RuleSpec::parse(cfg.rule_text);
    const std::vector<InstanceRecord> stream = make_stream(cfg);

    std::vector<Row> rows(stream.size());
    const int n_threads = resolve_threads(cfg.threads);
    const std::string rule_tag = rule.tag();
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            rows[i] = make_row(rule, rule_tag, rule.param, stream[i]);
    };
    if (n_threads <= 1 || stream.size() < 2) {
        worker(0, stream.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (stream.size() + n_threads - 1) / n_threads;
        for (std::size_t begin = 0; begin < stream.size(); begin += chunk)
            pool.emplace_back(worker, begin, std::min(begin + chunk, stream.size()));
        for (auto& t : pool) t.join();
    }

    ExperimentReport report;
    report.csv = "step,rule,param,n_deferred,alpha,beta,risk,tv_q_star,acceptance_prob\n";
    for (const auto& row : rows) report.csv += row.text + "\n";

    double mean_tv = 0.0, mean_acc = 0.0, mean_alpha = 0.0, mean_beta = 0.0;
    std::size_t masked = 0;
    for (const auto& row : rows) {
        mean_tv += row.tv;
        mean_acc += row.acceptance;
        if (row.has_mask) {
            mean_alpha += row.alpha;
            mean_beta += row.beta;
            ++masked;
        }
    }
    const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
    report.summary = nlohmann::json{
        {"rule", cfg.rule_text},
        {"gamma", cfg.gamma},
        {"seed", cfg.seed},
        {"num_instances", stream.size()},
        {"mean_tv_q_star", mean_tv / n},
        {"mean_acceptance_prob", mean_acc / n},
    };
    if (masked > 0) {
        report.summary["mean_alpha"] = mean_alpha / static_cast<double>(masked);
        report.summary["mean_beta"] = mean_beta / static_cast<double>(masked);
    }

    // Speculative pass over the same stream; windows need headroom at the end.
    if (stream.size() > static_cast<std::size_t>(cfg.gamma) + 1) {
        SpeculativeConfig spec_cfg{cfg.gamma, derive_seed(~cfg.seed, 0x51ecULL),
                                   stream.size() - cfg.gamma - 1};
        const SpecRunStats stats = speculative_run(stream, rule, spec_cfg);
        report.summary["speculative"] = nlohmann::json{
            {"gamma", cfg.gamma},
            {"proposed", stats.proposed},
            {"accepted", stats.accepted},
            {"empirical_rate", stats.acceptance_rate},
            {"zero_draft_accepts", stats.zero_draft_accepts},
        };
    }
    return report;
}

void run_experiment_to_dir(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const ExperimentReport report = run_experiment(cfg);
    std::ofstream csv(out_dir / "instances.csv", std::ios::binary);
    csv << report.csv;
    std::ofstream summary(out_dir / "summary.json", std::ios::binary);
    summary << report.summary.dump(2) << "\n";
}

} // namespace kad
