#include "kad/mixtures.hpp"

#include <cmath>

#include "kad/errors.hpp"

namespace kad {

MixtureResult mixture(const ProbVector& p, const ProbVector& q_star,
                      const DeferralDecision& d) {
    if (p.size() != q_star.size() || p.size() != d.size())
        throw DimensionMismatch("mixture: |V| mismatch");

    double alpha = 0.0, beta = 0.0;
    for (TokenId v = 0; v < p.size(); ++v) {
        if (d.mask[v]) {
            alpha += p[v];
            beta += q_star[v];
        }
    }
    // Full deferral means alpha is the whole mass of p; pin it to 1 so the
    // mixture reproduces q* exactly.
    if (d.all_deferred()) alpha = 1.0;

    std::vector<double> kept(p.size()), guided(p.size()), pi(p.size());
    for (TokenId v = 0; v < p.size(); ++v) {
        kept[v] = d.mask[v] ? 0.0 : p[v];
        guided[v] = q_star[v] * alpha;
        pi[v] = kept[v] + guided[v];
    }
    return MixtureResult{ProbVector(std::move(pi)), alpha, beta,
                         std::move(kept), std::move(guided)};
}

MixtureResult threshold_mixture(const ProbVector& p, const ProbVector& q_star,
                                double lambda) {
    return mixture(p, q_star, threshold_deferral(p, lambda));
}

ProbVector nudging(const ProbVector& p, const ProbVector& q_star, double lambda) {
    if (p.size() != q_star.size())
        throw DimensionMismatch("nudging: |V| mismatch");
    if (lambda <= 0.0 || lambda >= 1.0)
        throw ParameterOutOfRange("nudging: lambda must be in (0,1)");
    return p.max_prob() < lambda ? q_star : p;
}

ProbVector implicit_reward(const ProbVector& p, const ProbVector& q,
                           const ProbVector& q_star, double epsilon) {
    if (p.size() != q.size() || p.size() != q_star.size())
        throw DimensionMismatch("implicit_reward: |V| mismatch");
    if (epsilon < 0.0)
        throw ParameterOutOfRange("implicit_reward: epsilon must be >= 0");
    std::vector<double> w(p.size());
    double total = 0.0;
    for (TokenId v = 0; v < p.size(); ++v) {
        w[v] = p[v] * q_star[v] / std::max(q[v], epsilon);
        total += w[v];
    }
    if (total <= 0.0)
        throw DegenerateNumerator("implicit_reward: all numerators are zero");
    return ProbVector(std::move(w));
}

} // namespace kad
