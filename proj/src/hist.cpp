#include "boostfuse/hist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boostfuse/kernels.hpp"
#include "boostfuse/memtrack.hpp"
#include "boostfuse/threading.hpp"

namespace boostfuse {

void LeafWiseConfig::validate() const {
  TrainConfig::validate();
  if (max_leaves < 2) throw ArgumentError("max_leaves must be >= 2");
  if (bin_count < 2) throw ArgumentError("bin_count must be >= 2");
  if (bin_count > std::numeric_limits<std::uint16_t>::max() + 1)
    throw ArgumentError("bin_count exceeds 65536");
}

namespace hist {

int FeatureBins::bin_of(double value) const {
  // First boundary >= value; values beyond the last boundary clamp into
  // the top bin.
  const auto it =
      std::lower_bound(boundaries.begin(), boundaries.end(), value);
  return static_cast<int>(it - boundaries.begin());
}

BinMapper build_bins(const DataMatrix& matrix, int bin_count) {
  if (bin_count < 2) throw ArgumentError("build_bins: bin_count must be >= 2");
  if (matrix.n_rows == 0) throw ArgumentError("build_bins: empty matrix");

  BinMapper mapper;
  mapper.features.resize(matrix.n_cols());
  for (std::size_t f = 0; f < matrix.n_cols(); ++f) {
    std::vector<double> sorted = matrix.column(f);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());

    FeatureBins& fb = mapper.features[f];
    if (distinct.size() == 1) {
      fb.unsplittable = true;
      continue;
    }
    if (distinct.size() <= static_cast<std::size_t>(bin_count)) {
      // One bin per distinct value; boundaries at adjacent midpoints.
      for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
        fb.boundaries.push_back((distinct[i] + distinct[i + 1]) / 2.0);
      continue;
    }
    // Quantile cuts over the (duplicated) sorted values, deduplicated.
    const std::size_t n = sorted.size();
    for (int j = 1; j < bin_count; ++j) {
      const std::size_t pos = j * n / bin_count;
      if (pos == 0 || pos >= n) continue;
      if (sorted[pos - 1] == sorted[pos]) continue;
      const double edge = (sorted[pos - 1] + sorted[pos]) / 2.0;
      if (fb.boundaries.empty() || edge > fb.boundaries.back())
        fb.boundaries.push_back(edge);
    }
    if (fb.boundaries.empty()) {
      // Heavily duplicated feature whose quantile cuts all collapsed;
      // fall back to the midpoint of the full range.
      fb.boundaries.push_back((distinct.front() + distinct.back()) / 2.0);
    }
  }
  return mapper;
}

BinnedMatrix bin_features(const DataMatrix& matrix, const BinMapper& mapper) {
  if (matrix.n_cols() != mapper.features.size())
    throw ArgumentError("bin_features: feature count mismatch with mapper");

  BinnedMatrix out;
  out.n_rows = matrix.n_rows;
  out.n_features = matrix.n_cols();
  out.bins.resize(out.n_rows * out.n_features);
  memtrack::add(out.bins.size() * sizeof(std::uint16_t));
  for (std::size_t f = 0; f < out.n_features; ++f) {
    const FeatureBins& fb = mapper.features[f];
    for (std::size_t r = 0; r < out.n_rows; ++r)
      out.bins[f * out.n_rows + r] =
          static_cast<std::uint16_t>(fb.bin_of(matrix.at(r, f)));
  }
  return out;
}

namespace {

Histogram make_empty(const BinMapper& mapper) {
  Histogram h;
  h.offsets.resize(mapper.features.size());
  std::size_t total = 0;
  for (std::size_t f = 0; f < mapper.features.size(); ++f) {
    h.offsets[f] = total;
    total += static_cast<std::size_t>(mapper.features[f].num_bins());
  }
  h.entries.resize(total);
  memtrack::add(total * sizeof(HistEntry));
  return h;
}

}  // namespace

Histogram build_histogram(const std::vector<std::size_t>& rows,
                          const std::vector<GradPair>& grads,
                          const BinnedMatrix& binned, const BinMapper& mapper) {
  if (rows.empty()) throw ArgumentError("build_histogram: empty row set");
  Histogram h = make_empty(mapper);
  const std::size_t n_features = mapper.features.size();
  parallel_for(n_features, [&](std::size_t f) {
    const std::uint16_t* col = binned.bins.data() + f * binned.n_rows;
    HistEntry* base = h.entries.data() + h.offsets[f];
    for (std::size_t r : rows) {
      HistEntry& e = base[col[r]];
      e.sum_g += grads[r].g;
      e.sum_h += grads[r].h;
      e.count += 1;
    }
  });
  return h;
}

std::optional<SplitCandidate> best_split_from_histogram(
    const Histogram& hist, const BinMapper& mapper, double l2_penalty,
    double leaf_penalty, int min_samples_leaf) {
  std::optional<SplitCandidate> best;
  for (std::size_t f = 0; f < mapper.features.size(); ++f) {
    const FeatureBins& fb = mapper.features[f];
    if (fb.unsplittable) continue;
    const int k = fb.num_bins();

    double total_g = 0, total_h = 0;
    std::size_t total_count = 0;
    for (int b = 0; b < k; ++b) {
      const HistEntry& e = hist.at(f, b);
      total_g += e.sum_g;
      total_h += e.sum_h;
      total_count += e.count;
    }

    double left_g = 0, left_h = 0;
    std::size_t left_count = 0;
    for (int b = 0; b + 1 < k; ++b) {
      const HistEntry& e = hist.at(f, b);
      left_g += e.sum_g;
      left_h += e.sum_h;
      left_count += e.count;
      const std::size_t right_count = total_count - left_count;
      if (left_count < static_cast<std::size_t>(min_samples_leaf) ||
          right_count < static_cast<std::size_t>(min_samples_leaf))
        continue;
      const double gain =
          split_gain(left_g, left_h, total_g - left_g, total_h - left_h,
                     l2_penalty, leaf_penalty);
      if (gain > 0 && (!best || gain > best->gain))
        best = SplitCandidate{static_cast<int>(f), fb.boundaries[b], gain};
    }
  }
  return best;
}

namespace {

struct LiveLeaf {
  std::size_t serial = 0;  // creation order, breaks gain ties
  int node_id = -1;
  int depth = 0;
  std::vector<std::size_t> rows;
  Histogram histogram;
  double sum_g = 0;
  double sum_h = 0;
  std::optional<SplitCandidate> best;
};

void finish_leaf(LiveLeaf& leaf, const BinMapper& mapper,
                 const LeafWiseConfig& config) {
  leaf.best = best_split_from_histogram(leaf.histogram, mapper,
                                        config.l2_penalty, config.leaf_penalty,
                                        config.min_samples_leaf);
}

}  // namespace

RegTree grow_leaf_wise(const DataMatrix& matrix,
                       const std::vector<GradPair>& grads,
                       const BinnedMatrix& binned, const BinMapper& mapper,
                       const LeafWiseConfig& config, GrowthLog* log) {
  if (matrix.n_rows == 0) throw ArgumentError("grow_leaf_wise: empty matrix");

  RegTree tree;
  tree.nodes.emplace_back();
  memtrack::add(sizeof(TreeNode));

  std::vector<LiveLeaf> leaves;
  std::size_t next_serial = 0;
  {
    LiveLeaf root;
    root.serial = next_serial++;
    root.node_id = 0;
    root.rows.resize(matrix.n_rows);
    for (std::size_t i = 0; i < matrix.n_rows; ++i) root.rows[i] = i;
    root.histogram = build_histogram(root.rows, grads, binned, mapper);
    for (std::size_t r : root.rows) {
      root.sum_g += grads[r].g;
      root.sum_h += grads[r].h;
    }
    finish_leaf(root, mapper, config);
    leaves.push_back(std::move(root));
  }

  while (static_cast<int>(leaves.size()) < config.max_leaves) {
    // Best positive-gain leaf below the depth cap; earliest serial on ties.
    int pick = -1;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const LiveLeaf& leaf = leaves[i];
      if (!leaf.best || leaf.depth >= config.max_depth) continue;
      if (pick < 0 || leaf.best->gain > leaves[pick].best->gain ||
          (leaf.best->gain == leaves[pick].best->gain &&
           leaf.serial < leaves[pick].serial))
        pick = static_cast<int>(i);
    }
    if (pick < 0) break;

    LiveLeaf parent = std::move(leaves[pick]);
    leaves.erase(leaves.begin() + pick);

    if (log) {
      GrowthStep step;
      step.executed_leaf_serial = parent.serial;
      step.executed_gain = parent.best->gain;
      step.live_leaves.push_back({parent.serial, parent.depth, parent.rows});
      for (const auto& leaf : leaves)
        step.live_leaves.push_back({leaf.serial, leaf.depth, leaf.rows});
      log->push_back(std::move(step));
    }

    const SplitCandidate& split = *parent.best;
    const int boundary_bin = mapper.features[split.feature].bin_of(
        split.threshold);  // threshold is itself a boundary midpoint

    LiveLeaf left, right;
    left.serial = next_serial++;
    right.serial = next_serial++;
    left.depth = right.depth = parent.depth + 1;
    const std::uint16_t* col =
        binned.bins.data() + static_cast<std::size_t>(split.feature) * binned.n_rows;
    for (std::size_t r : parent.rows) {
      if (col[r] <= boundary_bin)
        left.rows.push_back(r);
      else
        right.rows.push_back(r);
    }

    left.node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    right.node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    memtrack::add(2 * sizeof(TreeNode));

    TreeNode& pnode = tree.nodes[parent.node_id];
    pnode.feature = split.feature;
    pnode.threshold = split.threshold;
    pnode.left = left.node_id;
    pnode.right = right.node_id;

    for (std::size_t r : left.rows) {
      left.sum_g += grads[r].g;
      left.sum_h += grads[r].h;
    }
    right.sum_g = parent.sum_g - left.sum_g;
    right.sum_h = parent.sum_h - left.sum_h;

    if (config.sibling_subtraction) {
      LiveLeaf& small = left.rows.size() <= right.rows.size() ? left : right;
      LiveLeaf& big = left.rows.size() <= right.rows.size() ? right : left;
      small.histogram = build_histogram(small.rows, grads, binned, mapper);
      big.histogram = std::move(parent.histogram);
      for (std::size_t i = 0; i < big.histogram.entries.size(); ++i)
        big.histogram.entries[i] -= small.histogram.entries[i];
    } else {
      left.histogram = build_histogram(left.rows, grads, binned, mapper);
      right.histogram = build_histogram(right.rows, grads, binned, mapper);
      memtrack::release(parent.histogram.entries.size() * sizeof(HistEntry));
    }

    finish_leaf(left, mapper, config);
    finish_leaf(right, mapper, config);
    leaves.push_back(std::move(left));
    leaves.push_back(std::move(right));
  }

  for (const auto& leaf : leaves) {
    tree.nodes[leaf.node_id].weight =
        leaf_weight(leaf.sum_g, leaf.sum_h, config.l2_penalty);
    memtrack::release(leaf.histogram.entries.size() * sizeof(HistEntry));
  }
  return tree;
}

BoostModel train(const DataMatrix& matrix, const LeafWiseConfig& config,
                 GrowthLog* log) {
  config.validate();
  if (matrix.n_rows == 0) throw ArgumentError("train: empty matrix");

  const BinMapper mapper = build_bins(matrix, config.bin_count);
  const BinnedMatrix binned = bin_features(matrix, mapper);

  BoostModel model;
  model.feature_names = matrix.feature_names;
  model.learning_rate = config.learning_rate;
  model.base_score =
      config.base_score_zero
          ? 0.0
          : kernels::reduce_sum(matrix.target.data(), matrix.n_rows) /
                static_cast<double>(matrix.n_rows);

  std::vector<double> predictions(matrix.n_rows, model.base_score);
  std::vector<GradPair> grads(matrix.n_rows);
  for (int round = 0; round < config.num_trees; ++round) {
    for (std::size_t i = 0; i < matrix.n_rows; ++i)
      grads[i] = loss_grad(matrix.target[i], predictions[i]);
    RegTree tree = grow_leaf_wise(matrix, grads, binned, mapper, config, log);
    for (std::size_t i = 0; i < matrix.n_rows; ++i)
      predictions[i] += config.learning_rate *
                        tree.predict(matrix.values.data() + i * matrix.n_cols());
    model.trees.push_back(std::move(tree));
  }
  memtrack::release(binned.bins.size() * sizeof(std::uint16_t));
  return model;
}

}  // namespace hist

}  // namespace boostfuse
