#include "boostfuse/objective.hpp"

namespace boostfuse {

void TrainConfig::validate() const {
  if (num_trees < 0) throw ArgumentError("num_trees must be >= 0");
  if (!(learning_rate > 0 && learning_rate <= 1))
    throw ArgumentError("learning_rate must be in (0, 1]");
  if (l2_penalty < 0) throw ArgumentError("l2_penalty must be >= 0");
  if (leaf_penalty < 0) throw ArgumentError("leaf_penalty must be >= 0");
  if (max_depth < 1) throw ArgumentError("max_depth must be >= 1");
  if (min_samples_leaf < 1) throw ArgumentError("min_samples_leaf must be >= 1");
}

double leaf_objective(const std::vector<std::pair<double, double>>& leaf_stats,
                      double l2_penalty, double leaf_penalty) {
  double acc = 0;
  for (const auto& [g, h] : leaf_stats) {
    const double denom = h + l2_penalty;
    if (denom <= 0)
      throw ArgumentError("leaf_objective: H + mu must be positive");
    acc += g * g / denom;
  }
  return -0.5 * acc +
         leaf_penalty * static_cast<double>(leaf_stats.size());
}

}  // namespace boostfuse
