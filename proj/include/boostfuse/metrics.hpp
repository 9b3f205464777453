#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "boostfuse/data.hpp"

namespace boostfuse {

struct Metrics {
  double mae = 0;
  double rmse = 0;
  // Absent when the actuals are constant (denominator vanishes).
  std::optional<double> r_squared;
  double band_accuracy = 0;  // fraction within +-p of actual (relative)
};

// band p: |error| <= p * |actual|, absolute p where actual == 0.
Metrics compute_metrics(const std::vector<double>& predictions,
                        const std::vector<double>& actuals, double band_p);

std::string metrics_to_json(const Metrics& m);

// Minimal 64-bit linear congruential generator, used for every seeded
// shuffle so fold assignment is reproducible across implementations.
// state' = state * 6364136223846793005 + 1442695040888963407 (Knuth MMIX).
struct Lcg64 {
  std::uint64_t state;

  explicit Lcg64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state;
  }
  // next() modulo n; fine for fold shuffling.
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Trains on a matrix, returns a batch predictor.
using Predictor = std::function<std::vector<double>(const DataMatrix&)>;
using Trainer = std::function<Predictor(const DataMatrix&)>;

struct CVResult {
  std::vector<Metrics> fold_metrics;
  Metrics mean_metrics;
  Metrics std_metrics;  // population standard deviation per metric
  std::vector<std::size_t> fold_assignment;  // per-row fold index
  std::uint64_t seed = 0;
};

CVResult k_fold_cv(const DataMatrix& matrix, std::size_t k, std::uint64_t seed,
                   const Trainer& trainer, double band_p = 0.1);

struct ComparisonRow {
  std::string model_name;
  Metrics test_metrics;
  std::size_t peak_memory_bytes = 0;
  double train_time_ms = 0;
};

std::vector<ComparisonRow> compare_models(
    const std::vector<std::pair<std::string, Trainer>>& entries,
    const DataMatrix& train, const DataMatrix& test, double band_p = 0.1);

// Rows {accuracy, memory, time} x one column per model.
// accuracy_metric is "r_squared" or "band_accuracy".
void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::string& accuracy_metric,
                          std::ostream& out);

// Row subset of a matrix, in the given index order.
DataMatrix matrix_subset(const DataMatrix& matrix,
                         const std::vector<std::size_t>& rows);

}  // namespace boostfuse
