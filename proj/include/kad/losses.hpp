#pragma once

#include <optional>
#include <string>

#include "kad/prob_vector.hpp"

namespace kad {

/// The five loss families measuring the base model's uncertainty about
/// emitting token v. All values are >= 0; Logistic and MinEntropy may be
/// +infinity on zero-probability tokens.
enum class LossFamily { Logistic, Squared, Perceptron, ZeroOne, MinEntropy };

std::string loss_name(LossFamily f);
LossFamily parse_loss(const std::string& name);

double loss_eval(LossFamily f, const ProbVector& p, TokenId v);

/// True iff p_v < p_w <=> loss(p, w) < loss(p, v) for every token pair of
/// this particular p (ties break the equivalence).
bool is_order_inverting(LossFamily f, const ProbVector& p);

/// Closed-form probability threshold f^{-1}(mu) for losses of the form
/// loss(p, v) = f(p_v) with f continuous strictly decreasing: the deferral
/// condition loss > mu becomes p_v < f^{-1}(mu). Only Logistic and Squared
/// have a p-independent threshold; others return nullopt.
std::optional<double> dual_probability_threshold(LossFamily f, double mu);

} // namespace kad
