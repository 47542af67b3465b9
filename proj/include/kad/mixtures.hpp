#pragma once

#include <vector>

#include "kad/deferral.hpp"
#include "kad/prob_vector.hpp"

namespace kad {

/// Mixture of the base p and the guide q* under a deferral mask, with the
/// per-token mass split retained for reporting.
struct MixtureResult {
    ProbVector pi;
    double alpha = 0.0; // deferred p-mass, the mixture normalizer
    double beta = 0.0;  // sum_v d_v q*_v
    std::vector<double> kept_mass;   // p_v on kept tokens, 0 on deferred
    std::vector<double> guided_mass; // q*_v * alpha
};

/// pi_v = p_v (1 - d_v) + q*_v alpha with alpha = sum_w p_w d_w.
MixtureResult mixture(const ProbVector& p, const ProbVector& q_star,
                      const DeferralDecision& d);

/// mixture under the mask [p_v < lambda].
MixtureResult threshold_mixture(const ProbVector& p, const ProbVector& q_star,
                                double lambda);

/// Whole-distribution switch (Chow's rule): q* if max_w p_w < lambda, else p.
ProbVector nudging(const ProbVector& p, const ProbVector& q_star, double lambda);

/// Baseline mixture proportional to p_v q*_v / max(q_v, epsilon).
ProbVector implicit_reward(const ProbVector& p, const ProbVector& q,
                           const ProbVector& q_star, double epsilon = 1e-12);

} // namespace kad
