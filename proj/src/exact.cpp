#include "boostfuse/exact.hpp"

#include <algorithm>
#include <cmath>

#include "boostfuse/kernels.hpp"
#include "boostfuse/memtrack.hpp"
#include "boostfuse/threading.hpp"

namespace boostfuse::exact {

namespace {

struct ValueGrad {
  double value;
  double g;
  double h;
};

// Best candidate within one feature; iteration ascends by threshold, so a
// strict comparison keeps the lowest threshold on gain ties.
std::optional<SplitCandidate> scan_feature(
    int feature, const std::vector<std::size_t>& rows,
    const std::vector<GradPair>& grads, const DataMatrix& matrix,
    const TrainConfig& config) {
  std::vector<ValueGrad> sorted;
  sorted.reserve(rows.size());
  memtrack::Scoped claim(rows.size() * sizeof(ValueGrad));
  for (std::size_t r : rows)
    sorted.push_back({matrix.at(r, feature), grads[r].g, grads[r].h});
  std::sort(sorted.begin(), sorted.end(),
            [](const ValueGrad& a, const ValueGrad& b) {
              return a.value < b.value;
            });

  double total_g = 0, total_h = 0;
  for (const auto& v : sorted) {
    total_g += v.g;
    total_h += v.h;
  }

  std::optional<SplitCandidate> best;
  double left_g = 0, left_h = 0;
  const std::size_t n = sorted.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    left_g += sorted[i].g;
    left_h += sorted[i].h;
    if (sorted[i].value == sorted[i + 1].value) continue;
    const std::size_t left_count = i + 1;
    const std::size_t right_count = n - left_count;
    if (left_count < static_cast<std::size_t>(config.min_samples_leaf) ||
        right_count < static_cast<std::size_t>(config.min_samples_leaf))
      continue;
    const double gain =
        split_gain(left_g, left_h, total_g - left_g, total_h - left_h,
                   config.l2_penalty, config.leaf_penalty);
    if (gain > 0 && (!best || gain > best->gain)) {
      const double threshold = (sorted[i].value + sorted[i + 1].value) / 2.0;
      best = SplitCandidate{feature, threshold, gain};
    }
  }
  return best;
}

}  // namespace

std::optional<SplitCandidate> find_best_split(
    const std::vector<std::size_t>& rows, const std::vector<GradPair>& grads,
    const DataMatrix& matrix, const TrainConfig& config) {
  if (rows.size() < 2) return std::nullopt;

  const std::size_t m = matrix.n_cols();
  std::vector<std::optional<SplitCandidate>> per_feature(m);
  parallel_for(m, [&](std::size_t f) {
    per_feature[f] =
        scan_feature(static_cast<int>(f), rows, grads, matrix, config);
  });

  // Fixed-order reduction: lower feature index wins gain ties.
  std::optional<SplitCandidate> best;
  for (const auto& cand : per_feature)
    if (cand && (!best || cand->gain > best->gain)) best = cand;
  return best;
}

namespace {

int grow(RegTree& tree, const std::vector<std::size_t>& rows,
         const std::vector<GradPair>& grads, const DataMatrix& matrix,
         const TrainConfig& config, int depth) {
  double sum_g = 0, sum_h = 0;
  for (std::size_t r : rows) {
    sum_g += grads[r].g;
    sum_h += grads[r].h;
  }

  std::optional<SplitCandidate> split;
  if (depth < config.max_depth && rows.size() >= 2)
    split = find_best_split(rows, grads, matrix, config);

  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  memtrack::add(sizeof(TreeNode));
  if (!split) {
    tree.nodes[node_id].weight =
        leaf_weight(sum_g, sum_h, config.l2_penalty);
    return node_id;
  }

  std::vector<std::size_t> left_rows, right_rows;
  for (std::size_t r : rows) {
    if (matrix.at(r, split->feature) <= split->threshold)
      left_rows.push_back(r);
    else
      right_rows.push_back(r);
  }

  tree.nodes[node_id].feature = split->feature;
  tree.nodes[node_id].threshold = split->threshold;
  const int left = grow(tree, left_rows, grads, matrix, config, depth + 1);
  tree.nodes[node_id].left = left;
  const int right = grow(tree, right_rows, grads, matrix, config, depth + 1);
  tree.nodes[node_id].right = right;
  return node_id;
}

}  // namespace

RegTree build_tree(const std::vector<std::size_t>& rows,
                   const std::vector<GradPair>& grads, const DataMatrix& matrix,
                   const TrainConfig& config) {
  if (rows.empty()) throw ArgumentError("build_tree: empty row set");
  RegTree tree;
  grow(tree, rows, grads, matrix, config, 0);
  return tree;
}

BoostModel train(const DataMatrix& matrix, const TrainConfig& config) {
  config.validate();
  if (matrix.n_rows == 0) throw ArgumentError("train: empty matrix");

  BoostModel model;
  model.feature_names = matrix.feature_names;
  model.learning_rate = config.learning_rate;
  model.base_score =
      config.base_score_zero
          ? 0.0
          : kernels::reduce_sum(matrix.target.data(), matrix.n_rows) /
                static_cast<double>(matrix.n_rows);

  std::vector<double> predictions(matrix.n_rows, model.base_score);
  std::vector<std::size_t> all_rows(matrix.n_rows);
  for (std::size_t i = 0; i < matrix.n_rows; ++i) all_rows[i] = i;

  std::vector<GradPair> grads(matrix.n_rows);
  for (int round = 0; round < config.num_trees; ++round) {
    for (std::size_t i = 0; i < matrix.n_rows; ++i)
      grads[i] = loss_grad(matrix.target[i], predictions[i]);
    RegTree tree = build_tree(all_rows, grads, matrix, config);
    for (std::size_t i = 0; i < matrix.n_rows; ++i)
      predictions[i] += config.learning_rate *
                        tree.predict(matrix.values.data() + i * matrix.n_cols());
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace boostfuse::exact
