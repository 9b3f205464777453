#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boostfuse/data.hpp"
#include "boostfuse/exact.hpp"
#include "boostfuse/objective.hpp"
#include "boostfuse/tree.hpp"

namespace boostfuse {

struct LeafWiseConfig : TrainConfig {
  int max_leaves = 31;
  int bin_count = 255;
  // Derive the larger sibling's histogram as parent - smaller child.
  bool sibling_subtraction = false;

  void validate() const;
};

namespace hist {

// Per-feature discretization. boundaries[i] is the split threshold between
// bin i and bin i+1 (a midpoint between adjacent observed values), so
// value <= boundaries[i] lands in bins 0..i.
struct FeatureBins {
  std::vector<double> boundaries;  // size num_bins - 1, strictly increasing
  bool unsplittable = false;       // constant feature, single bin

  int num_bins() const { return static_cast<int>(boundaries.size()) + 1; }
  int bin_of(double value) const;
};

struct BinMapper {
  std::vector<FeatureBins> features;
};

// Quantile-edged bins; features with <= k distinct values get one bin per
// distinct value.
BinMapper build_bins(const DataMatrix& matrix, int bin_count);

// Feature-major bin indices: bins[feature * n_rows + row].
struct BinnedMatrix {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::vector<std::uint16_t> bins;

  std::uint16_t at(std::size_t row, std::size_t feature) const {
    return bins[feature * n_rows + row];
  }
};

BinnedMatrix bin_features(const DataMatrix& matrix, const BinMapper& mapper);

struct HistEntry {
  double sum_g = 0;
  double sum_h = 0;
  std::size_t count = 0;

  HistEntry& operator+=(const HistEntry& o) {
    sum_g += o.sum_g;
    sum_h += o.sum_h;
    count += o.count;
    return *this;
  }
  HistEntry& operator-=(const HistEntry& o) {
    sum_g -= o.sum_g;
    sum_h -= o.sum_h;
    count -= o.count;
    return *this;
  }
};

// Per-feature bin accumulators, stored back to back.
struct Histogram {
  std::vector<HistEntry> entries;
  std::vector<std::size_t> offsets;  // per-feature start into entries

  HistEntry& at(std::size_t feature, int bin) {
    return entries[offsets[feature] + static_cast<std::size_t>(bin)];
  }
  const HistEntry& at(std::size_t feature, int bin) const {
    return entries[offsets[feature] + static_cast<std::size_t>(bin)];
  }
};

Histogram build_histogram(const std::vector<std::size_t>& rows,
                          const std::vector<GradPair>& grads,
                          const BinnedMatrix& binned, const BinMapper& mapper);

// O(k) scan per feature over bin boundaries; gain formula and tie rules
// identical to the exact learner.
std::optional<SplitCandidate> best_split_from_histogram(
    const Histogram& hist, const BinMapper& mapper, double l2_penalty,
    double leaf_penalty, int min_samples_leaf);

// Growth log for replaying leaf-wise decisions: at each executed split,
// the row sets of every live leaf and the gain that won.
struct GrowthStep {
  struct Leaf {
    std::size_t serial = 0;
    int depth = 0;  // leaves at max_depth are live but not splittable
    std::vector<std::size_t> rows;
  };
  std::size_t executed_leaf_serial = 0;
  double executed_gain = 0;
  std::vector<Leaf> live_leaves;
};
using GrowthLog = std::vector<GrowthStep>;

// Best-first growth: repeatedly split the live leaf with the highest gain
// until max_leaves, no positive gain remains, or the depth cap blocks
// every splittable leaf. Ties go to the earliest-created leaf.
RegTree grow_leaf_wise(const DataMatrix& matrix,
                       const std::vector<GradPair>& grads,
                       const BinnedMatrix& binned, const BinMapper& mapper,
                       const LeafWiseConfig& config, GrowthLog* log = nullptr);

// Boosting loop over leaf-wise trees on binned data; prediction semantics
// match the exact learner's BoostModel.
BoostModel train(const DataMatrix& matrix, const LeafWiseConfig& config,
                 GrowthLog* log = nullptr);

}  // namespace hist

}  // namespace boostfuse
