#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kad/analysis.hpp"
#include "kad/errors.hpp"
#include "kad/experiment.hpp"
#include "kad/replay.hpp"
#include "kad/serialization.hpp"
#include "kad/verify.hpp"

namespace {

using nlohmann::json;

kad::InstanceRecord load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kad::ParseError("cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw kad::ParseError(path + ": " + e.what());
    }
    return kad::instance_from_json(j, 0);
}

/// JSON config file supplies defaults; flags given on the command line win.
void apply_config_file(CLI::App* cmd, const std::string& path,
                       kad::ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw kad::ParseError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw kad::ParseError(path + ": " + e.what());
    }
    auto absent = [&](const char* flag) {
        const CLI::Option* o = cmd->get_option_no_throw(flag);
        return o == nullptr || o->count() == 0;
    };
    if (j.contains("rule") && absent("--rule")) cfg.rule_text = j["rule"];
    if (j.contains("gamma") && absent("--gamma")) cfg.gamma = j["gamma"];
    if (j.contains("seed") && absent("--seed")) cfg.seed = j["seed"];
    if (j.contains("instances") && absent("--instances"))
        cfg.num_instances = j["instances"];
    if (j.contains("vocab") && absent("--vocab")) cfg.vocab_size = j["vocab"];
    if (j.contains("concentration") && absent("--concentration"))
        cfg.concentration = j["concentration"];
    if (j.contains("correlation") && absent("--correlation"))
        cfg.correlation = j["correlation"];
    if (j.contains("threads") && absent("--threads")) cfg.threads = j["threads"];
}

std::vector<double> parse_lambda_grid(const std::string& text) {
    // "start:stop:step" inclusive grid, or a single value
    const auto a = text.find(':');
    if (a == std::string::npos) return {std::stod(text)};
    const auto b = text.find(':', a + 1);
    if (b == std::string::npos)
        throw kad::ParameterOutOfRange("expected start:stop:step, got " + text);
    const double start = std::stod(text.substr(0, a));
    const double stop = std::stod(text.substr(a + 1, b - a - 1));
    const double step = std::stod(text.substr(b + 1));
    if (step <= 0.0) throw kad::ParameterOutOfRange("grid step must be > 0");
    std::vector<double> grid;
    for (double x = start; x <= stop + 1e-12; x += step) grid.push_back(x);
    return grid;
}

int run(int argc, char** argv) {
    CLI::App app{"knapsack-approximation deferral toolkit"};
    app.require_subcommand(1);

    std::string input_path, rule_text = "threshold:0.4", out_dir = ".";
    std::string config_path, replay_path, suite = "all", what = "p-selection";
    std::string lambdas = "0.1:0.9:0.1";
    kad::ExperimentConfig cfg;

    auto* defer = app.add_subcommand("defer", "print the deferral decision for one instance");
    defer->add_option("--input", input_path, "instance JSON file")->required();
    defer->add_option("--rule", rule_text, "deferral rule, e.g. primal:logistic:0.9");

    auto* mix = app.add_subcommand("mix", "print the mixture for one instance");
    mix->add_option("--input", input_path, "instance JSON file")->required();
    mix->add_option("--rule", rule_text, "deferral rule, e.g. threshold:0.4");

    auto* simulate = app.add_subcommand("simulate", "synthetic experiment run");
    simulate->add_option("--rule", cfg.rule_text, "deferral rule");
    simulate->add_option("--vocab", cfg.vocab_size, "vocabulary size");
    simulate->add_option("--instances", cfg.num_instances, "number of stream positions");
    simulate->add_option("--gamma", cfg.gamma, "speculative window size");
    simulate->add_option("--seed", cfg.seed, "master seed");
    simulate->add_option("--concentration", cfg.concentration, "Dirichlet concentration");
    simulate->add_option("--correlation", cfg.correlation, "p/q* correlation weight");
    simulate->add_option("--threads", cfg.threads, "worker threads (0: KAD_THREADS env)");
    simulate->add_option("--config", config_path, "JSON config file; flags win");
    simulate->add_option("--out", out_dir, "output directory");

    auto* replay = app.add_subcommand("replay", "run a rule over a JSONL stream");
    replay->add_option("--file", replay_path, "JSONL replay file")->required();
    replay->add_option("--rule", cfg.rule_text, "deferral rule");
    replay->add_option("--gamma", cfg.gamma, "speculative window size");
    replay->add_option("--seed", cfg.seed, "master seed");
    replay->add_option("--threads", cfg.threads, "worker threads");
    replay->add_option("--config", config_path, "JSON config file; flags win");
    replay->add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run the bound and oracle suites");
    std::size_t verify_instances = 1000;
    std::uint64_t verify_seed = 7;
    verify->add_option("--suite", suite,
                       "all|oracle|duality|feasibility|equivalence|regret|tv|speculative|mixture");
    verify->add_option("--instances", verify_instances, "base instance count");
    verify->add_option("--seed", verify_seed, "master seed");

    auto* analyze = app.add_subcommand("analyze", "stream analyses");
    analyze->add_option("--file", replay_path, "JSONL replay file")->required();
    analyze->add_option("--what", what, "p-selection|entropy-diff");
    analyze->add_option("--rule", rule_text, "rule for p-selection");
    analyze->add_option("--lambdas", lambdas, "lambda grid start:stop:step");

    CLI11_PARSE(app, argc, argv);

    if (*defer || *mix) {
        const kad::InstanceRecord rec = load_instance(input_path);
        const kad::RuleSpec rule = kad::RuleSpec::parse(rule_text);
        const kad::RuleOutcome out = kad::apply_rule(rule, rec);
        if (*defer) {
            if (!out.decision)
                throw kad::ParameterOutOfRange("rule '" + rule_text +
                                               "' produces no deferral mask");
            std::cout << kad::to_json(*out.decision).dump(2) << "\n";
        } else if (out.decision) {
            std::cout << kad::to_json(kad::mixture(rec.p, rec.q_star, *out.decision))
                             .dump(2)
                      << "\n";
        } else {
            // implicit reward has no mask, only an output distribution
            std::cout << json{{"pi", out.pi.values()}}.dump(2) << "\n";
        }
        return 0;
    }

    if (*simulate || *replay) {
        CLI::App* cmd = *simulate ? simulate : replay;
        if (!config_path.empty()) apply_config_file(cmd, config_path, cfg);
        if (*replay) cfg.source = "replay:" + replay_path;
        kad::run_experiment_to_dir(cfg, out_dir);
        std::cout << "wrote " << out_dir << "/instances.csv and summary.json\n";
        return 0;
    }

    if (*verify) {
        kad::VerifyOptions opt;
        opt.seed = verify_seed;
        opt.oracle_instances = verify_instances;
        opt.regret_instances = verify_instances;
        opt.feasibility_instances = verify_instances * 10;
        opt.equivalence_instances = verify_instances * 10;
        opt.tv_instances = verify_instances * 10;

        std::vector<kad::SuiteResult> results;
        if (suite == "all") {
            results = kad::verify_all(opt);
        } else if (suite == "oracle") {
            results = {kad::verify_oracle_optimality(opt)};
        } else if (suite == "duality") {
            results = {kad::verify_weak_duality(opt)};
        } else if (suite == "feasibility") {
            results = {kad::verify_primal_feasibility(opt)};
        } else if (suite == "equivalence") {
            results = {kad::verify_loss_equivalence(opt)};
        } else if (suite == "regret") {
            results = {kad::verify_regret_bounds(opt)};
        } else if (suite == "tv") {
            results = {kad::verify_tv_lemma(opt)};
        } else if (suite == "speculative") {
            results = {kad::verify_speculative_exactness(opt)};
        } else if (suite == "mixture") {
            results = {kad::verify_mixture_identities(opt)};
        } else {
            throw kad::ParameterOutOfRange("unknown suite: " + suite);
        }

        bool all_ok = true;
        for (const auto& r : results) {
            all_ok = all_ok && r.passed();
            std::printf("[%s] %-24s checked=%zu violations=%zu worst_slack=%.3e (%.2fs)%s%s\n",
                        r.passed() ? "PASS" : "FAIL", r.name.c_str(), r.checked,
                        r.violations, r.worst_slack, r.seconds,
                        r.detail.empty() ? "" : " -- ", r.detail.c_str());
        }
        return all_ok ? 0 : 1;
    }

    if (*analyze) {
        const auto records = kad::load_replay(replay_path);
        if (what == "p-selection") {
            const auto hist = kad::p_selection_stats(records, kad::RuleSpec::parse(rule_text));
            std::cout << "kept,proportion\n";
            const char* labels[] = {"0", "1", "2", "3", ">=4"};
            for (std::size_t i = 0; i < hist.proportions.size(); ++i)
                std::printf("%s,%.6f\n", labels[i], hist.proportions[i]);
        } else if (what == "entropy-diff") {
            const auto rows =
                kad::entropy_diff_analysis(records, parse_lambda_grid(lambdas));
            std::cout << "lambda,mean_entropy_diff,used,skipped\n";
            for (const auto& row : rows)
                std::printf("%.6g,%.9g,%zu,%zu\n", row.lambda, row.mean_diff, row.used,
                            row.skipped);
        } else {
            throw kad::ParameterOutOfRange("unknown analysis: " + what);
        }
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const kad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
