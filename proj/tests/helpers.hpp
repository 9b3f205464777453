#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "boostfuse/data.hpp"
#include "boostfuse/exact.hpp"
#include "boostfuse/objective.hpp"

namespace testutil {

using boostfuse::DataMatrix;
using boostfuse::GradPair;
using boostfuse::SplitCandidate;
using boostfuse::TrainConfig;

inline DataMatrix make_matrix(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& target,
                              std::vector<std::string> names = {}) {
  DataMatrix m;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  if (names.empty())
    for (std::size_t j = 0; j < cols; ++j)
      names.push_back("f" + std::to_string(j));
  m.feature_names = names;
  m.target_name = "y";
  m.n_rows = rows.size();
  for (const auto& r : rows)
    m.values.insert(m.values.end(), r.begin(), r.end());
  m.target = target;
  return m;
}

// Random regression instance for split-search oracles.
inline DataMatrix random_matrix(std::mt19937_64& rng, std::size_t n,
                                std::size_t m, int distinct_values = 0) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  std::uniform_real_distribution<double> value(-10, 10);
  std::uniform_int_distribution<int> level(0, std::max(1, distinct_values) - 1);
  for (auto& r : rows)
    for (auto& v : r)
      v = distinct_values > 0 ? static_cast<double>(level(rng)) : value(rng);
  std::vector<double> target(n);
  for (auto& y : target) y = value(rng);
  return make_matrix(rows, target);
}

inline std::vector<GradPair> random_grads(std::mt19937_64& rng,
                                          const DataMatrix& m) {
  // Squared-loss gradients at random predictions.
  std::uniform_real_distribution<double> pred(-10, 10);
  std::vector<GradPair> grads(m.n_rows);
  for (std::size_t i = 0; i < m.n_rows; ++i)
    grads[i] = boostfuse::loss_grad(m.target[i], pred(rng));
  return grads;
}

// Exhaustive split search: every (feature, midpoint-threshold) pair is
// evaluated by partitioning the rows from scratch. Independent of the
// production prefix-sum scan. runner_up, when given, receives the best gain
// among candidates that differ from the winner; distinct splits can induce
// the same row partition and thus tie mathematically, in which case the two
// summation orders may disagree about the argmax within rounding error.
inline std::optional<SplitCandidate> brute_force_split(
    const std::vector<std::size_t>& rows, const std::vector<GradPair>& grads,
    const DataMatrix& matrix, const TrainConfig& config,
    double* runner_up = nullptr) {
  std::optional<SplitCandidate> best;
  double second = -1;
  for (std::size_t f = 0; f < matrix.n_cols(); ++f) {
    std::vector<double> values;
    for (std::size_t r : rows) values.push_back(matrix.at(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double threshold = (values[i] + values[i + 1]) / 2.0;
      double gl = 0, hl = 0, gr = 0, hr = 0;
      std::size_t nl = 0, nr = 0;
      for (std::size_t r : rows) {
        if (matrix.at(r, f) <= threshold) {
          gl += grads[r].g;
          hl += grads[r].h;
          ++nl;
        } else {
          gr += grads[r].g;
          hr += grads[r].h;
          ++nr;
        }
      }
      if (nl < static_cast<std::size_t>(config.min_samples_leaf) ||
          nr < static_cast<std::size_t>(config.min_samples_leaf))
        continue;
      const double gain = boostfuse::split_gain(gl, hl, gr, hr,
                                                config.l2_penalty,
                                                config.leaf_penalty);
      // Tie rule: lower feature index, then lower threshold.
      if (gain > 0 && (!best || gain > best->gain)) {
        if (best) second = std::max(second, best->gain);
        best = SplitCandidate{static_cast<int>(f), threshold, gain};
      } else if (gain > 0) {
        second = std::max(second, gain);
      }
    }
  }
  if (runner_up) *runner_up = second;
  return best;
}

// Acceptance recipe: y = 3 x1 - 2 x2 + x3 x4 + N(0, 0.5), nine features of
// which five are noise.
inline DataMatrix synthetic_regression(std::uint64_t seed, std::size_t n = 1000,
                                       std::size_t m = 9) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(-2, 2);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) rows[i][j] = x(rng);
    target[i] = 3 * rows[i][0] - 2 * rows[i][1] + rows[i][2] * rows[i][3] +
                noise(rng);
  }
  return make_matrix(rows, target);
}

}  // namespace testutil
