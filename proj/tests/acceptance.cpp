// Release gate: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <vector>

#include "kad/experiment.hpp"
#include "kad/verify.hpp"

using namespace kad;

namespace {

int failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %02d %s%s%s\n", ok ? "PASS" : "FAIL", index, name,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++failures;
}

std::string suite_detail(const SuiteResult& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "checked=%zu violations=%zu worst_slack=%.3g (%.1fs)",
                  s.checked, s.violations, s.worst_slack, s.seconds);
    return buf;
}

void run_suite(int index, const char* name, const SuiteResult& s,
               double time_limit_s = 0.0) {
    bool ok = s.passed();
    std::string detail = suite_detail(s);
    if (time_limit_s > 0.0 && s.seconds >= time_limit_s) {
        ok = false;
        detail += " exceeded " + std::to_string(static_cast<int>(time_limit_s)) + "s";
    }
    if (!s.detail.empty()) detail += " " + s.detail;
    report(index, name, ok, detail);
}

void check_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.rule_text = "threshold:0.4";
    cfg.seed = 2718;
    cfg.num_instances = 512;
    cfg.vocab_size = 16;
    cfg.threads = 1;
    const ExperimentReport first = run_experiment(cfg);
    const ExperimentReport rerun = run_experiment(cfg);
    cfg.threads = 8;
    const ExperimentReport wide = run_experiment(cfg);
    const bool ok = first.csv == rerun.csv && first.csv == wide.csv &&
                    first.summary.dump() == rerun.summary.dump() &&
                    first.summary.dump() == wide.summary.dump();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[96];
    std::snprintf(buf, sizeof buf, "3 runs x %zu instances, threads 1/1/8 (%.1fs)",
                  cfg.num_instances, secs);
    report(9, "byte-identical simulation output", ok, buf);
}

void check_default_grids() {
    const DefaultGrids g = default_grids();
    const bool ok = g.lambdas == std::vector<double>{0.3, 0.4} &&
                    g.budgets == std::vector<double>{0.6, 0.9} &&
                    g.mus == std::vector<double>{0.05, 0.1} &&
                    g.gammas == std::vector<int>{3, 5, 7};
    report(10, "default hyperparameter grids", ok,
           "lambda {0.3,0.4}, b {0.6,0.9}, mu {0.05,0.1}, gamma {3,5,7}");
}

} // namespace

int main() {
    VerifyOptions opt; // release-gate sample sizes are the defaults

    run_suite(1, "knapsack oracle optimality", verify_oracle_optimality(opt), 60.0);
    run_suite(2, "weak duality", verify_weak_duality(opt));
    run_suite(3, "primal budget feasibility", verify_primal_feasibility(opt));
    run_suite(4, "loss-family mask equivalence", verify_loss_equivalence(opt));
    run_suite(5, "plugin regret bounds", verify_regret_bounds(opt));
    run_suite(6, "acceptance-rate bound", verify_tv_lemma(opt));
    run_suite(7, "speculative sampling exactness", verify_speculative_exactness(opt),
              120.0);
    run_suite(8, "mixture identities", verify_mixture_identities(opt));
    check_determinism();
    check_default_grids();

    if (failures > 0) {
        std::printf("%d of 10 criteria failed\n", failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
