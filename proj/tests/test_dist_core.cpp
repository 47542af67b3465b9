#include <doctest.h>

#include <cmath>

#include "kad/deferral.hpp"
#include "kad/errors.hpp"
#include "kad/prob_vector.hpp"
#include "kad/synthetic.hpp"

using namespace kad;

namespace {

DeferralDecision mask_of(std::vector<std::uint8_t> bits) {
    DeferralDecision d;
    d.mask = std::move(bits);
    return d;
}

// independent route for the TV metric: 1 - sum of pointwise minima
double tv_via_min(const ProbVector& a, const ProbVector& b) {
    double s = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) s += std::min(a[v], b[v]);
    return 1.0 - s;
}

} // namespace

TEST_CASE("construction validates and normalizes") {
    const ProbVector already({0.5, 0.3, 0.2});
    CHECK(already[0] == 0.5);
    CHECK(already[1] == 0.3);
    CHECK(already.raw_sum_deviation() <= 1e-9);

    const ProbVector scaled({2.0, 1.0, 1.0});
    CHECK(scaled[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(scaled[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(scaled.normalization_warning());

    CHECK_THROWS_AS(ProbVector({1.0, -0.1}), NegativeEntry);
    CHECK_THROWS_AS(ProbVector({0.0, 0.0}), AllZero);
    CHECK_THROWS_AS(ProbVector({1.0}), TooShort);
}

TEST_CASE("tv_distance basics") {
    const ProbVector a({0.5, 0.3, 0.2}), b({0.2, 0.5, 0.3});
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(ProbVector({1.0, 0.0}), ProbVector({0.0, 1.0})) == 1.0);
    CHECK(tv_distance(a, b) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(tv_distance(a, ProbVector({0.5, 0.5})), DimensionMismatch);
}

TEST_CASE("tv_distance is a metric and matches the min form") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + i % 7;
        const ProbVector a = dirichlet_draw(rng, n, 0.7);
        const ProbVector b = dirichlet_draw(rng, n, 0.7);
        const ProbVector c = dirichlet_draw(rng, n, 0.7);
        const double ab = tv_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ab == tv_distance(b, a));
        CHECK(tv_distance(a, c) <= ab + tv_distance(b, c) + 1e-12);
        CHECK(std::abs(ab - tv_via_min(a, b)) <= 1e-12);
        CHECK(tv_distance(a, a) <= 1e-12);
    }
}

TEST_CASE("entropy") {
    CHECK(entropy(ProbVector({1.0, 0.0, 0.0})) == 0.0);
    CHECK(entropy(ProbVector({0.25, 0.25, 0.25, 0.25})) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(entropy(ProbVector({0.5, 0.5, 0.0})) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + i % 9;
        const ProbVector p = dirichlet_draw(rng, n, 0.5);
        const double h = entropy(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("conditional_restricted") {
    const ProbVector p({0.5, 0.3, 0.2});
    const ProbVector cond = conditional_restricted(p, mask_of({0, 1, 1}));
    CHECK(cond[0] == 0.0);
    CHECK(cond[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(cond[2] == doctest::Approx(0.4).epsilon(1e-12));

    CHECK(conditional_restricted(p, mask_of({1, 1, 1})).values() == p.values());
    CHECK_THROWS_AS(conditional_restricted(p, mask_of({0, 0, 0})),
                    EmptyConditioningSet);
}

TEST_CASE("sampling is deterministic and unbiased") {
    {
        Rng rng(123);
        for (int i = 0; i < 50; ++i)
            CHECK(sample(ProbVector({1.0, 0.0}), rng) == 0);
    }
    {
        Rng a(99), b(99);
        const ProbVector p({0.3, 0.3, 0.4});
        for (int i = 0; i < 1000; ++i) CHECK(sample(p, a) == sample(p, b));
    }
    {
        // 3 sigma binomial band around 0.5 for 1e6 draws
        Rng rng(2024);
        const ProbVector p({0.5, 0.5});
        std::size_t first = 0;
        const std::size_t n = 1000000;
        for (std::size_t i = 0; i < n; ++i)
            if (sample(p, rng) == 0) ++first;
        const double freq = static_cast<double>(first) / static_cast<double>(n);
        CHECK(freq >= 0.4985);
        CHECK(freq <= 0.5015);
    }
}

TEST_CASE("argmax_set") {
    CHECK(argmax_set(ProbVector({0.5, 0.3, 0.2})) == std::vector<TokenId>{0});
    CHECK(argmax_set(ProbVector({0.4, 0.4, 0.2})) == std::vector<TokenId>{0, 1});
    const double third = 1.0 / 3.0;
    CHECK(argmax_set(ProbVector({third, third, third})) ==
          std::vector<TokenId>{0, 1, 2});
}
