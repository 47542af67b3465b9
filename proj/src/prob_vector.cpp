#include "kad/prob_vector.hpp"

#include <algorithm>
#include <cmath>

#include "kad/deferral.hpp"
#include "kad/errors.hpp"

namespace kad {

ProbVector::ProbVector(std::vector<double> raw) : probs_(std::move(raw)) {
    if (probs_.size() < 2)
        throw TooShort("distribution needs at least 2 entries, got " +
                       std::to_string(probs_.size()));
    double sum = 0.0;
    for (double x : probs_) {
        if (x < 0.0 || std::isnan(x))
            throw NegativeEntry("negative or NaN probability entry");
        sum += x;
    }
    if (sum <= 0.0) throw AllZero("all probability entries are zero");
    raw_sum_deviation_ = std::abs(sum - 1.0);
    // Inputs already summing to 1 within tolerance are kept bit-identical.
    if (raw_sum_deviation_ > 1e-9)
        for (double& x : probs_) x /= sum;
}

double ProbVector::max_prob() const {
    return *std::max_element(probs_.begin(), probs_.end());
}

ProbVector make_prob_vector(std::vector<double> raw) {
    return ProbVector(std::move(raw));
}

double tv_distance(const ProbVector& a, const ProbVector& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("tv_distance: |V| mismatch");
    double acc = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) acc += std::abs(a[v] - b[v]);
    return 0.5 * acc;
}

double entropy(const ProbVector& p) {
    double h = 0.0;
    for (double x : p.values())
        if (x > 0.0) h -= x * std::log(x);
    return h;
}

ProbVector conditional_restricted(const ProbVector& p, const DeferralDecision& d) {
    if (p.size() != d.size())
        throw DimensionMismatch("conditional_restricted: |V| mismatch");
    double mass = 0.0;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (d.mask[v]) mass += p[v];
    if (mass <= 0.0)
        throw EmptyConditioningSet("deferred set carries no probability mass");
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t v = 0; v < p.size(); ++v)
        if (d.mask[v]) out[v] = p[v] / mass;
    return ProbVector(std::move(out));
}

TokenId sample(const ProbVector& p, Rng& rng) {
    const double u = rng.uniform();
    double cum = 0.0;
    TokenId last_positive = 0;
    for (std::size_t v = 0; v < p.size(); ++v) {
        if (p[v] <= 0.0) continue;
        cum += p[v];
        last_positive = v;
        if (u <= cum) return v;
    }
    return last_positive; // u landed past cumulative rounding
}

std::vector<TokenId> argmax_set(const ProbVector& p) {
    const double m = p.max_prob();
    std::vector<TokenId> out;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (p[v] == m) out.push_back(v);
    return out;
}

} // namespace kad
