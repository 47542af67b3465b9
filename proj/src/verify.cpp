#include "kad/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "kad/deferral.hpp"
#include "kad/mixtures.hpp"
#include "kad/speculative.hpp"
#include "kad/synthetic.hpp"

namespace kad {

namespace {

constexpr double kTol = 1e-12;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void record_slack(SuiteResult& res, double slack) {
    ++res.checked;
    res.worst_slack = std::min(res.worst_slack, slack);
    if (slack < -kTol) ++res.violations;
}

void record_flag(SuiteResult& res, bool ok) {
    ++res.checked;
    if (!ok) ++res.violations;
}

InstanceRecord small_instance(std::uint64_t seed, std::size_t index,
                              std::size_t min_vocab = 4, std::size_t span = 9) {
    SyntheticConfig cfg;
    cfg.vocab_size = min_vocab + index % span;
    cfg.concentration = 1.0;
    return generate_instance(derive_seed(seed, index), cfg);
}

/// Largest finite loss value, for building mu grids.
double max_finite_loss(const ProbVector& p, LossFamily spec) {
    double m = 0.0;
    for (TokenId v = 0; v < p.size(); ++v) {
        const double l = loss_eval(spec, p, v);
        if (std::isfinite(l)) m = std::max(m, l);
    }
    return m;
}

DeferralDecision exact_weights_primal(const ProbVector& ground_truth,
                                      const ProbVector& p, LossFamily spec, double b) {
    const CriticalElement ce = critical_element(ground_truth, p, spec, b);
    DeferralDecision d;
    d.mask.resize(p.size());
    for (TokenId v = 0; v < p.size(); ++v)
        d.mask[v] = loss_eval(spec, p, v) > ce.multiplier ? 1 : 0;
    d.rule_tag = "primal:exact_weights";
    d.parameter = b;
    return d;
}

} // namespace

SuiteResult verify_oracle_optimality(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "oracle_optimality";
    const LossFamily spec = LossFamily::Logistic;
    for (std::size_t i = 0; i < opt.oracle_instances; ++i) {
        const InstanceRecord rec = small_instance(opt.seed, i);
        const ProbVector& P = *rec.ground_truth;
        const double b = 0.2 + 0.1 * static_cast<double>(i % 8);

        const double optimal = risk(P, rec.p, spec, exact_knapsack(P, rec.p, spec, b));

        record_slack(res, risk(P, rec.p, spec, exact_weights_primal(P, rec.p, spec, b)) -
                              optimal);

        const double mu_max = max_finite_loss(rec.p, spec) * 1.05;
        for (int g = 0; g < 20; ++g) {
            const double mu = mu_max * static_cast<double>(g) / 19.0;
            const DeferralDecision dual = dual_deferral(rec.p, spec, mu);
            if (deferred_mass(P, dual) <= b + kTol)
                record_slack(res, risk(P, rec.p, spec, dual) - optimal);
        }
    }
    res.seconds = sw.seconds();
    return res;
}

SuiteResult verify_weak_duality(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "weak_duality";
    const LossFamily spec = LossFamily::Logistic;
    for (std::size_t i = 0; i < opt.oracle_instances; ++i) {
        const InstanceRecord rec = small_instance(opt.seed ^ 0xd0a1, i);
        const ProbVector& P = *rec.ground_truth;
        const double b = 0.2 + 0.1 * static_cast<double>(i % 8);
        const double optimal = risk(P, rec.p, spec, exact_knapsack(P, rec.p, spec, b));

        std::vector<double> grid;
        const double mu_max = max_finite_loss(rec.p, spec) * 1.05;
        for (int g = 0; g < 20; ++g)
            grid.push_back(mu_max * static_cast<double>(g) / 19.0);
        for (TokenId v = 0; v < rec.p.size(); ++v) {
            const double l = loss_eval(spec, rec.p, v);
            if (std::isfinite(l)) grid.push_back(l); // every breakpoint
        }
        for (double mu : grid) {
            const double lhs =
                lagrangian(P, rec.p, spec, dual_deferral(rec.p, spec, mu), mu, b);
            record_slack(res, optimal - lhs);
        }
    }
    res.seconds = sw.seconds();
    return res;
}

SuiteResult verify_primal_feasibility(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "primal_feasibility";
    const LossFamily families[] = {LossFamily::Logistic, LossFamily::Squared,
                                   LossFamily::Perceptron, LossFamily::ZeroOne,
                                   LossFamily::MinEntropy};
    Rng budget_rng(derive_seed(opt.seed, 0xfea5));
    for (std::size_t i = 0; i < opt.feasibility_instances; ++i) {
        const InstanceRecord rec = small_instance(opt.seed ^ 0xfea5, i);
        const double b = 0.01 + 0.98 * budget_rng.uniform();
        const LossFamily spec = families[i % 5];
        const DeferralDecision d = primal_plugin_deferral(rec.p, spec, b);
        record_slack(res, b - deferred_mass(rec.p, d));
    }
    res.seconds = sw.seconds();
    return res;
}

SuiteResult verify_loss_equivalence(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "loss_equivalence";
    Rng budget_rng(derive_seed(opt.seed, 0xe901));
    for (std::size_t i = 0; i < opt.equivalence_instances; ++i) {
        const InstanceRecord rec = small_instance(opt.seed ^ 0xe901, i);
        const double b = 0.05 + 0.9 * budget_rng.uniform();

        auto values = rec.p.values();
        std::sort(values.begin(), values.end());
        const bool distinct = std::adjacent_find(values.begin(), values.end()) ==
                              values.end();
        if (distinct) {
            const auto d_log = primal_plugin_deferral(rec.p, LossFamily::Logistic, b);
            const auto d_sq = primal_plugin_deferral(rec.p, LossFamily::Squared, b);
            const auto d_pe = primal_plugin_deferral(rec.p, LossFamily::Perceptron, b);
            record_flag(res, d_log.mask == d_sq.mask && d_log.mask == d_pe.mask);
        }

        if (argmax_set(rec.p).size() == 1) {
            const auto d_zo = primal_plugin_deferral(rec.p, LossFamily::ZeroOne, b);
            const auto d_cf = primal_zero_one_rule(rec.p, b);
            record_flag(res, d_zo.mask == d_cf.mask);
        }
    }
    res.seconds = sw.seconds();
    return res;
}

SuiteResult verify_regret_bounds(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "regret_bounds";
    Rng budget_rng(derive_seed(opt.seed, 0xbe9));
    for (std::size_t i = 0; i < opt.regret_instances; ++i) {
        const InstanceRecord rec = small_instance(opt.seed ^ 0xbe9, i);
        const double b = 0.05 + 0.9 * budget_rng.uniform();
        const auto [first, second] =
            check_regret_bounds(*rec.ground_truth, rec.p, LossFamily::Logistic, b);
        record_slack(res, first.slack);
        record_slack(res, second.slack);
    }
    res.seconds = sw.seconds();
    return res;
}

namespace {

/// Instances aimed at the conditional part of the acceptance lemma: either
/// nothing falls below lambda (the conditions hold vacuously), or the
/// deferred coordinates of p are built as alpha-scaled copies of q*.
InstanceRecord tv_condition_candidate(Rng& rng, double lambda) {
    if (rng.uniform() < 0.5) {
        // flat small-vocab draw; reject later unless min p >= lambda
        std::vector<double> p(2), q(2);
        p[0] = 0.35 + 0.3 * rng.uniform();
        p[1] = 1.0 - p[0];
        q[0] = rng.uniform();
        q[1] = 1.0 - q[0];
        return InstanceRecord{0, ProbVector(std::move(p)), ProbVector(std::move(q))};
    }
    // tight construction: q* supported on the deferred set only
    const double a = 0.05 + 0.15 * rng.uniform();
    std::vector<double> q(5, 0.0);
    double qs = 0.0;
    for (std::size_t v = 2; v < 5; ++v) {
        q[v] = 0.1 + rng.uniform();
        qs += q[v];
    }
    for (std::size_t v = 2; v < 5; ++v) q[v] /= qs;
    ProbVector q_star(std::move(q));

    std::vector<double> p(5, 0.0);
    double deferred = 0.0;
    for (std::size_t v = 2; v < 5; ++v) {
        p[v] = a * q_star[v];
        deferred += p[v];
    }
    const double rest = 1.0 - deferred;
    p[0] = 0.55 * rest;
    p[1] = 0.45 * rest;
    return InstanceRecord{0, ProbVector(std::move(p)), std::move(q_star)};
}

} // namespace

SuiteResult verify_tv_lemma(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "tv_lemma";

    // worked example: lhs and rhs both land on 0.4
    {
        const ProbVector p({0.5, 0.3, 0.2}), q_star({0.2, 0.5, 0.3});
        const TvLemmaReport rep = check_tv_lemma(p, q_star, 0.4);
        record_flag(res, std::abs(rep.first.lhs - 0.4) <= kTol &&
                             std::abs(rep.first.rhs - 0.4) <= kTol);
    }

    for (std::size_t i = 0; i < opt.tv_instances; ++i) {
        const InstanceRecord rec = small_instance(opt.seed ^ 0x7f1e, i, 4, 9);
        const double lambda = (i % 2 == 0) ? 0.3 : 0.4;
        const TvLemmaReport rep = check_tv_lemma(rec.p, rec.q_star, lambda);
        record_slack(res, rep.first.slack);
        if (rep.second) record_slack(res, rep.second->slack);
    }

    // rejection-sample instances satisfying both lemma conditions
    Rng rng(derive_seed(opt.seed, 0x7f1e));
    std::size_t hits = 0, attempts = 0;
    const std::size_t max_attempts = opt.tv_condition_hits * 1000;
    while (hits < opt.tv_condition_hits && attempts < max_attempts) {
        ++attempts;
        const double lambda = (attempts % 2 == 0) ? 0.3 : 0.4;
        const InstanceRecord cand = tv_condition_candidate(rng, lambda);
        const TvLemmaReport rep = check_tv_lemma(cand.p, cand.q_star, lambda);
        if (!rep.second) continue; // conditions not met, rejected
        ++hits;
        record_slack(res, rep.second->slack);
    }
    if (hits < opt.tv_condition_hits) {
        ++res.violations;
        res.detail = "only " + std::to_string(hits) + " condition-satisfying instances";
    } else {
        res.detail = std::to_string(hits) + " condition hits in " +
                     std::to_string(attempts) + " attempts";
    }
    res.seconds = sw.seconds();
    return res;
}

SuiteResult verify_speculative_exactness(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "speculative_exactness";

    const ProbVector p({0.5, 0.3, 0.2}), q_star({0.2, 0.5, 0.3});
    const ProbVector target = threshold_mixture(p, q_star, 0.4).pi; // [0.6,0.25,0.15]

    // emitted-token histogram against the analytic target
    {
        Rng rng(derive_seed(opt.seed, 0x4157));
        std::vector<double> counts(target.size(), 0.0);
        for (std::size_t i = 0; i < opt.histogram_samples; ++i)
            counts[verify_step(target, q_star, rng).token] += 1.0;
        const ProbVector hist(std::move(counts));
        record_flag(res, tv_distance(hist, target) <= 5e-3);
    }

    // empirical acceptance vs analytic 1 - TV for each window size
    const double analytic = acceptance_probability(target, q_star);
    InstanceRecord base{0, p, q_star};
    const RuleSpec rule = RuleSpec::parse("threshold:0.4");
    for (int gamma : {3, 5, 7}) {
        const std::size_t positions = opt.acceptance_positions;
        const std::vector<InstanceRecord> stream(
            positions + static_cast<std::size_t>(gamma) + 2, base);
        SpeculativeConfig cfg{gamma, derive_seed(opt.seed, 0x4157 + gamma), positions};
        const SpecRunStats stats = speculative_run(stream, rule, cfg);
        const double sigma = std::sqrt(analytic * (1.0 - analytic) /
                                       static_cast<double>(stats.proposed));
        record_flag(res, std::abs(stats.acceptance_rate - analytic) <= 3.0 * sigma);
    }
    res.seconds = sw.seconds();
    return res;
}

SuiteResult verify_mixture_identities(const VerifyOptions& opt) {
    Stopwatch sw;
    SuiteResult res;
    res.name = "mixture_identities";
    Rng rng(derive_seed(opt.seed, 0x319));
    for (std::size_t i = 0; i < 500; ++i) {
        const InstanceRecord rec = small_instance(opt.seed ^ 0x319, i);
        const std::size_t n = rec.p.size();

        std::vector<DeferralDecision> masks;
        DeferralDecision random_mask;
        random_mask.mask.resize(n);
        for (auto& m : random_mask.mask) m = rng.uniform() < 0.5 ? 1 : 0;
        masks.push_back(random_mask);
        DeferralDecision zeros, ones;
        zeros.mask.assign(n, 0);
        ones.mask.assign(n, 1);
        masks.push_back(zeros);
        masks.push_back(ones);

        for (const auto& d : masks) {
            const MixtureResult m = mixture(rec.p, rec.q_star, d);
            double alpha_direct = 0.0, kept_sum = 0.0, guided_sum = 0.0;
            bool split_ok = true;
            for (TokenId v = 0; v < n; ++v) {
                if (d.mask[v]) alpha_direct += rec.p[v];
                kept_sum += m.kept_mass[v];
                guided_sum += m.guided_mass[v];
                if (d.mask[v] && m.kept_mass[v] != 0.0) split_ok = false;
                if (m.pi[v] < 0.0) split_ok = false;
            }
            const double alpha_expected = d.all_deferred() ? 1.0 : alpha_direct;
            record_flag(res, split_ok &&
                                 std::abs(m.alpha - alpha_expected) <= kTol &&
                                 std::abs(kept_sum - (1.0 - m.alpha)) <= kTol &&
                                 std::abs(guided_sum - m.alpha) <= kTol);
            double pi_sum = 0.0;
            for (TokenId v = 0; v < n; ++v) pi_sum += m.pi[v];
            record_flag(res, std::abs(pi_sum - 1.0) <= 1e-9);
        }

        record_flag(res, mixture(rec.p, rec.q_star, zeros).pi.values() ==
                             rec.p.values());
        record_flag(res, mixture(rec.p, rec.q_star, ones).pi.values() ==
                             rec.q_star.values());
    }
    res.seconds = sw.seconds();
    return res;
}

std::vector<SuiteResult> verify_all(const VerifyOptions& opt) {
    return {verify_oracle_optimality(opt), verify_weak_duality(opt),
            verify_primal_feasibility(opt), verify_loss_equivalence(opt),
            verify_regret_bounds(opt),      verify_tv_lemma(opt),
            verify_speculative_exactness(opt), verify_mixture_identities(opt)};
}

} // namespace kad
