#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kad/errors.hpp"
#include "kad/mixtures.hpp"
#include "kad/synthetic.hpp"

using namespace kad;

namespace {

DeferralDecision mask_of(std::vector<std::uint8_t> bits) {
    DeferralDecision d;
    d.mask = std::move(bits);
    return d;
}

DeferralDecision random_mask(Rng& rng, std::size_t n) {
    DeferralDecision d;
    d.mask.resize(n);
    for (auto& bit : d.mask) bit = rng.uniform() < 0.5 ? 1 : 0;
    return d;
}

const ProbVector kP({0.5, 0.3, 0.2});
const ProbVector kQStar({0.2, 0.5, 0.3});

} // namespace

TEST_CASE("mixture on the worked example") {
    const MixtureResult m = mixture(kP, kQStar, mask_of({0, 1, 1}));
    CHECK(m.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.beta == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m.pi[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(m.pi[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.pi[2] == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(tv_distance(m.pi, kQStar) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(m.kept_mass[0] == 0.5);
    CHECK(m.kept_mass[1] == 0.0);
    CHECK(m.guided_mass[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("mixture extremes are bitwise exact") {
    const MixtureResult none = mixture(kP, kQStar, mask_of({0, 0, 0}));
    CHECK(none.alpha == 0.0);
    CHECK(none.pi.values() == kP.values());

    const MixtureResult all = mixture(kP, kQStar, mask_of({1, 1, 1}));
    CHECK(all.alpha == 1.0);
    CHECK(all.pi.values() == kQStar.values());
}

TEST_CASE("mixture conserves mass and splits consistently") {
    Rng rng(53);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = 2 + i % 9;
        const ProbVector p = dirichlet_draw(rng, n, 0.7);
        const ProbVector q = dirichlet_draw(rng, n, 0.7);
        const DeferralDecision d = random_mask(rng, n);
        const MixtureResult m = mixture(p, q, d);
        double total = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            CHECK(std::abs(m.kept_mass[v] + m.guided_mass[v] - m.pi[v]) <= 1e-12);
            if (d.mask[v]) CHECK(m.kept_mass[v] == 0.0);
            total += m.pi[v];
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
        double alpha = 0.0, beta = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (d.mask[v]) {
                alpha += p[v];
                beta += q[v];
            }
        if (!d.all_deferred()) CHECK(std::abs(m.alpha - alpha) <= 1e-12);
        CHECK(std::abs(m.beta - beta) <= 1e-12);
    }
}

TEST_CASE("threshold mixture matches mask composition") {
    const MixtureResult m = threshold_mixture(kP, kQStar, 0.4);
    CHECK(m.pi.values() == mixture(kP, kQStar, mask_of({0, 1, 1})).pi.values());
    CHECK_THROWS_AS(threshold_mixture(kP, kQStar, 1.5), ParameterOutOfRange);
}

TEST_CASE("nudging switches whole distributions") {
    CHECK(nudging(kP, kQStar, 0.4).values() == kP.values());
    CHECK(nudging(kP, kQStar, 0.6).values() == kQStar.values());
    // boundary: max p equal to lambda keeps p
    CHECK(nudging(kP, kQStar, 0.5).values() == kP.values());
}

TEST_CASE("implicit reward") {
    const ProbVector q({0.4, 0.4, 0.2});
    const ProbVector out = implicit_reward(kP, q, kQStar);
    // weights p_v q*_v / q_v = {0.25, 0.375, 0.3}, sum 0.925
    CHECK(out[0] == doctest::Approx(0.25 / 0.925).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(0.375 / 0.925).epsilon(1e-12));
    CHECK(out[2] == doctest::Approx(0.3 / 0.925).epsilon(1e-12));
    CHECK(out[0] == doctest::Approx(0.27027).epsilon(1e-5));
    CHECK(out[1] == doctest::Approx(0.405405).epsilon(1e-5));
    CHECK(out[2] == doctest::Approx(0.324324).epsilon(1e-5));

    CHECK_THROWS_AS(implicit_reward(ProbVector({1.0, 0.0}), ProbVector({0.5, 0.5}),
                                    ProbVector({0.0, 1.0})),
                    DegenerateNumerator);
}
