#include "kad/losses.hpp"

#include <cmath>
#include <limits>

#include "kad/errors.hpp"

namespace kad {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double neg_log(double x) { return x > 0.0 ? -std::log(x) : kInf; }
} // namespace

std::string loss_name(LossFamily f) {
    switch (f) {
        case LossFamily::Logistic: return "logistic";
        case LossFamily::Squared: return "squared";
        case LossFamily::Perceptron: return "perceptron";
        case LossFamily::ZeroOne: return "zero_one";
        case LossFamily::MinEntropy: return "min_entropy";
    }
    return "?";
}

LossFamily parse_loss(const std::string& name) {
    if (name == "logistic") return LossFamily::Logistic;
    if (name == "squared") return LossFamily::Squared;
    if (name == "perceptron") return LossFamily::Perceptron;
    if (name == "zero_one") return LossFamily::ZeroOne;
    if (name == "min_entropy") return LossFamily::MinEntropy;
    throw ParameterOutOfRange("unknown loss family: " + name);
}

double loss_eval(LossFamily f, const ProbVector& p, TokenId v) {
    switch (f) {
        case LossFamily::Logistic:
            return neg_log(p[v]);
        case LossFamily::Squared: {
            const double m = 1.0 - p[v];
            return m * m;
        }
        case LossFamily::Perceptron:
            return p.max_prob() - p[v];
        case LossFamily::ZeroOne:
            return p[v] == p.max_prob() ? 0.0 : 1.0;
        case LossFamily::MinEntropy:
            return neg_log(p.max_prob());
    }
    return 0.0;
}

bool is_order_inverting(LossFamily f, const ProbVector& p) {
    for (TokenId v = 0; v < p.size(); ++v) {
        const double lv = loss_eval(f, p, v);
        for (TokenId w = v + 1; w < p.size(); ++w) {
            const double lw = loss_eval(f, p, w);
            if ((p[v] < p[w]) != (lw < lv)) return false;
            if ((p[w] < p[v]) != (lv < lw)) return false;
        }
    }
    return true;
}

std::optional<double> dual_probability_threshold(LossFamily f, double mu) {
    switch (f) {
        case LossFamily::Logistic:
            return std::exp(-mu);
        case LossFamily::Squared:
            return mu <= 1.0 ? 1.0 - std::sqrt(mu) : 0.0;
        default:
            return std::nullopt;
    }
}

} // namespace kad
