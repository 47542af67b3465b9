#include <doctest.h>

#include <cmath>
#include <vector>

#include "kad/errors.hpp"
#include "kad/speculative.hpp"
#include "kad/synthetic.hpp"

using namespace kad;

namespace {

const ProbVector kP({0.5, 0.3, 0.2});
const ProbVector kQStar({0.2, 0.5, 0.3});

std::vector<InstanceRecord> repeated_stream(std::size_t n) {
    std::vector<InstanceRecord> stream;
    stream.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        stream.push_back(InstanceRecord{static_cast<int>(i) + 1, kP, kQStar,
                                        std::nullopt, std::nullopt, std::nullopt,
                                        std::nullopt});
    return stream;
}

} // namespace

TEST_CASE("acceptance probability") {
    CHECK(acceptance_probability(kQStar, kQStar) == 1.0);
    CHECK(acceptance_probability(ProbVector({1.0, 0.0}), ProbVector({0.0, 1.0})) ==
          0.0);
    const ProbVector pi({0.6, 0.25, 0.15});
    CHECK(acceptance_probability(pi, kQStar) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(acceptance_probability(kP, kQStar) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("residual distribution") {
    const ProbVector pi({0.6, 0.25, 0.15});
    const ProbVector res = residual_distribution(pi, kQStar);
    // positive part (0.4, 0, 0) normalizes to a point mass on token 0
    CHECK(res[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res[1] == 0.0);
    CHECK(res[2] == 0.0);

    const ProbVector res2 = residual_distribution(kP, kQStar);
    CHECK(res2[0] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(residual_distribution(kQStar, kQStar), ZeroResidual);
}

TEST_CASE("verify_step output matches the target distribution") {
    const ProbVector pi({0.6, 0.25, 0.15});
    Rng rng(303);
    const std::size_t n = 200000;
    std::vector<std::size_t> counts(3, 0);
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const VerifyStep step = verify_step(pi, kQStar, rng);
        ++counts[step.token];
        if (step.accepted) ++accepted;
        CHECK_FALSE(step.zero_draft_prob);
    }
    // 3 sigma bands, sigma = sqrt(p(1-p)/n) ~ 1.1e-3
    for (std::size_t v = 0; v < 3; ++v) {
        const double freq = static_cast<double>(counts[v]) / static_cast<double>(n);
        const double expect = pi[v];
        const double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(n));
        CHECK(std::abs(freq - expect) <= 3.0 * sigma);
    }
    const double rate = static_cast<double>(accepted) / static_cast<double>(n);
    const double sigma = std::sqrt(0.6 * 0.4 / static_cast<double>(n));
    CHECK(std::abs(rate - 0.6) <= 3.0 * sigma);
}

TEST_CASE("speculative run accepts everything when the target is the draft") {
    // threshold 0.9 defers the whole support, so pi == q* bitwise
    const auto stream = repeated_stream(64);
    SpeculativeConfig cfg;
    cfg.gamma = 5;
    cfg.seed = 12;
    cfg.num_positions = 30;
    const SpecRunStats stats =
        speculative_run(stream, RuleSpec::parse("threshold:0.9"), cfg);
    CHECK(stats.accepted == stats.proposed);
    CHECK(stats.acceptance_rate == 1.0);
    CHECK(stats.emitted.size() >= cfg.num_positions);
    for (double a : stats.per_position_acceptance) CHECK(a == 1.0);
    CHECK(stats.zero_draft_accepts == 0);
}

TEST_CASE("speculative run empirical rate tracks the analytic rate") {
    const auto stream = repeated_stream(40000);
    SpeculativeConfig cfg;
    cfg.gamma = 5;
    cfg.seed = 99;
    cfg.num_positions = 30000;
    const SpecRunStats stats =
        speculative_run(stream, RuleSpec::parse("threshold:0.4"), cfg);
    for (double a : stats.per_position_acceptance)
        CHECK(a == doctest::Approx(0.6).epsilon(1e-12));
    const double n = static_cast<double>(stats.proposed);
    const double sigma = std::sqrt(0.6 * 0.4 / n);
    CHECK(std::abs(stats.acceptance_rate - 0.6) <= 3.0 * sigma);
}

TEST_CASE("speculative run raises on a short stream") {
    const auto stream = repeated_stream(4);
    SpeculativeConfig cfg;
    cfg.gamma = 5;
    cfg.seed = 1;
    cfg.num_positions = 10;
    CHECK_THROWS_AS(speculative_run(stream, RuleSpec::parse("threshold:0.4"), cfg),
                    StreamExhausted);
}

TEST_CASE("tv lemma on the worked example") {
    const TvLemmaReport rep = check_tv_lemma(kP, kQStar, 0.4);
    CHECK(rep.first.lhs == doctest::Approx(0.4).epsilon(1e-12));
    // phi = p since max p = 0.5 >= 0.4; rhs = 0.3 + 0.5 * 0.2 = 0.4
    CHECK(rep.first.rhs == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(rep.first.holds);
    CHECK(rep.cond_max_above_lambda);
    // p_1 = 0.3 > alpha q*_1 = 0.25, so the domination condition fails
    CHECK_FALSE(rep.cond_deferred_dominated);
    CHECK_FALSE(rep.second.has_value());
}

TEST_CASE("tv lemma first bound holds on random instances") {
    Rng rng(61);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 2 + i % 9;
        const ProbVector p = dirichlet_draw(rng, n, 0.7);
        const ProbVector q = dirichlet_draw(rng, n, 0.7);
        const double lambda = 0.05 + 0.9 * rng.uniform();
        const TvLemmaReport rep = check_tv_lemma(p, q, lambda);
        CHECK(rep.first.holds);
        if (rep.second) CHECK(rep.second->holds);
    }
}
