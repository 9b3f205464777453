#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "boostfuse/errors.hpp"

namespace boostfuse {

// First- and second-order derivatives of the loss at one prediction.
struct GradPair {
  double g = 0;
  double h = 0;

  GradPair& operator+=(const GradPair& o) {
    g += o.g;
    h += o.h;
    return *this;
  }
};

struct TrainConfig {
  int num_trees = 7;
  double learning_rate = 0.3;
  double l2_penalty = 1.0;    // mu, on squared leaf weights
  double leaf_penalty = 0.0;  // gamma, per leaf
  int max_depth = 6;
  int min_samples_leaf = 1;
  std::uint64_t seed = 0;
  bool base_score_zero = false;  // force the initial prediction to 0

  void validate() const;
};

// Squared loss l = 1/2 (y - yhat)^2: g = yhat - y, h = 1.
inline GradPair loss_grad(double y, double yhat) { return {yhat - y, 1.0}; }

// Closed-form optimal leaf output, -G / (H + mu).
inline double leaf_weight(double grad_sum, double hess_sum, double l2_penalty) {
  const double denom = hess_sum + l2_penalty;
  if (denom <= 0)
    throw ArgumentError("leaf_weight: H + mu must be positive");
  return -grad_sum / denom;
}

// Regularized objective at the optimum: -1/2 sum G^2/(H+mu) + gamma * T.
double leaf_objective(const std::vector<std::pair<double, double>>& leaf_stats,
                      double l2_penalty, double leaf_penalty);

// Objective reduction from splitting one leaf into (L, R), minus gamma.
inline double split_gain(double grad_left, double hess_left, double grad_right,
                         double hess_right, double l2_penalty,
                         double leaf_penalty) {
  const double dl = hess_left + l2_penalty;
  const double dr = hess_right + l2_penalty;
  const double dp = hess_left + hess_right + l2_penalty;
  if (dl <= 0 || dr <= 0 || dp <= 0)
    throw ArgumentError("split_gain: H + mu must be positive");
  const double parent = grad_left + grad_right;
  return 0.5 * (grad_left * grad_left / dl + grad_right * grad_right / dr -
                parent * parent / dp) -
         leaf_penalty;
}

}  // namespace boostfuse
