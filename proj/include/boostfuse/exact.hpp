#pragma once

#include <optional>
#include <vector>

#include "boostfuse/data.hpp"
#include "boostfuse/objective.hpp"
#include "boostfuse/tree.hpp"

namespace boostfuse {

struct SplitCandidate {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
};

namespace exact {

// Exact greedy search: per feature, every midpoint between consecutive
// distinct sorted values is a candidate. Returns the maximal-gain candidate
// with positive gain, or nothing (pre-pruning). Ties go to the lower
// feature index, then the lower threshold.
std::optional<SplitCandidate> find_best_split(
    const std::vector<std::size_t>& rows, const std::vector<GradPair>& grads,
    const DataMatrix& matrix, const TrainConfig& config);

// Recursive greedy growth, capped by max_depth, pre-pruned on gain <= 0.
RegTree build_tree(const std::vector<std::size_t>& rows,
                   const std::vector<GradPair>& grads, const DataMatrix& matrix,
                   const TrainConfig& config);

// Boosting loop: base score (target mean unless forced to 0), then
// num_trees rounds of gradients -> tree -> shrunken update.
BoostModel train(const DataMatrix& matrix, const TrainConfig& config);

}  // namespace exact

}  // namespace boostfuse
