#include "boostfuse/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "boostfuse/kernels.hpp"
#include "boostfuse/memtrack.hpp"

namespace boostfuse {

Metrics compute_metrics(const std::vector<double>& predictions,
                        const std::vector<double>& actuals, double band_p) {
  if (predictions.size() != actuals.size())
    throw ArgumentError("compute_metrics: length mismatch");
  if (predictions.empty()) throw ArgumentError("compute_metrics: empty input");
  if (band_p <= 0) throw ArgumentError("compute_metrics: band must be > 0");

  const std::size_t n = predictions.size();
  Metrics m;
  m.mae = kernels::sum_abs_diff(predictions.data(), actuals.data(), n) /
          static_cast<double>(n);
  const double sse = kernels::sum_sq_diff(predictions.data(), actuals.data(), n);
  m.rmse = std::sqrt(sse / static_cast<double>(n));

  const double mean_y =
      kernels::reduce_sum(actuals.data(), n) / static_cast<double>(n);
  const double ss_tot = kernels::centered_dot(actuals.data(), mean_y,
                                              actuals.data(), mean_y, n);
  const bool constant =
      std::all_of(actuals.begin(), actuals.end(),
                  [&](double y) { return y == actuals.front(); });
  if (!constant && ss_tot > 0) m.r_squared = 1.0 - sse / ss_tot;

  std::size_t in_band = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double err = std::abs(predictions[i] - actuals[i]);
    const double tol = actuals[i] == 0 ? band_p : band_p * std::abs(actuals[i]);
    if (err <= tol) ++in_band;
  }
  m.band_accuracy = static_cast<double>(in_band) / static_cast<double>(n);
  return m;
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::json j;
  j["mae"] = m.mae;
  j["rmse"] = m.rmse;
  if (m.r_squared)
    j["r_squared"] = *m.r_squared;
  else
    j["r_squared_undefined"] = true;
  j["band_accuracy"] = m.band_accuracy;
  return j.dump(2);
}

DataMatrix matrix_subset(const DataMatrix& matrix,
                         const std::vector<std::size_t>& rows) {
  DataMatrix out;
  out.feature_names = matrix.feature_names;
  out.target_name = matrix.target_name;
  out.n_rows = rows.size();
  out.values.reserve(rows.size() * matrix.n_cols());
  out.target.reserve(rows.size());
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < matrix.n_cols(); ++c)
      out.values.push_back(matrix.at(r, c));
    out.target.push_back(matrix.target[r]);
  }
  return out;
}

namespace {

// Mean and population std over folds; r_squared aggregates only when it is
// defined on every fold.
void aggregate(CVResult& result) {
  const auto& folds = result.fold_metrics;
  const double n = static_cast<double>(folds.size());
  auto mean_of = [&](auto get) {
    double s = 0;
    for (const auto& f : folds) s += get(f);
    return s / n;
  };
  auto std_of = [&](auto get, double mean) {
    double s = 0;
    for (const auto& f : folds) {
      const double d = get(f) - mean;
      s += d * d;
    }
    return std::sqrt(s / n);
  };

  auto mae = [](const Metrics& f) { return f.mae; };
  auto rmse = [](const Metrics& f) { return f.rmse; };
  auto band = [](const Metrics& f) { return f.band_accuracy; };
  result.mean_metrics.mae = mean_of(mae);
  result.std_metrics.mae = std_of(mae, result.mean_metrics.mae);
  result.mean_metrics.rmse = mean_of(rmse);
  result.std_metrics.rmse = std_of(rmse, result.mean_metrics.rmse);
  result.mean_metrics.band_accuracy = mean_of(band);
  result.std_metrics.band_accuracy =
      std_of(band, result.mean_metrics.band_accuracy);

  const bool all_r2 = std::all_of(folds.begin(), folds.end(),
                                  [](const Metrics& f) { return bool(f.r_squared); });
  if (all_r2) {
    auto r2 = [](const Metrics& f) { return *f.r_squared; };
    result.mean_metrics.r_squared = mean_of(r2);
    result.std_metrics.r_squared = std_of(r2, *result.mean_metrics.r_squared);
  }
}

}  // namespace

CVResult k_fold_cv(const DataMatrix& matrix, std::size_t k, std::uint64_t seed,
                   const Trainer& trainer, double band_p) {
  if (k < 2) throw ArgumentError("k_fold_cv: k must be >= 2");
  if (k > matrix.n_rows) throw ArgumentError("k_fold_cv: k exceeds row count");

  // Seeded Fisher-Yates, then round-robin fold assignment over the shuffle.
  std::vector<std::size_t> order(matrix.n_rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Lcg64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(i + 1)]);

  CVResult result;
  result.seed = seed;
  result.fold_assignment.resize(matrix.n_rows);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t fold = pos % k;
    folds[fold].push_back(order[pos]);
    result.fold_assignment[order[pos]] = fold;
  }

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f)
        train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    std::sort(train_rows.begin(), train_rows.end());
    std::vector<std::size_t> test_rows = folds[f];
    std::sort(test_rows.begin(), test_rows.end());

    const DataMatrix train = matrix_subset(matrix, train_rows);
    const DataMatrix test = matrix_subset(matrix, test_rows);
    const Predictor predictor = trainer(train);
    result.fold_metrics.push_back(
        compute_metrics(predictor(test), test.target, band_p));
  }
  aggregate(result);
  return result;
}

std::vector<ComparisonRow> compare_models(
    const std::vector<std::pair<std::string, Trainer>>& entries,
    const DataMatrix& train, const DataMatrix& test, double band_p) {
  if (entries.empty()) throw ArgumentError("compare_models: no entries");
  std::vector<ComparisonRow> rows;
  for (const auto& [name, trainer] : entries) {
    ComparisonRow row;
    row.model_name = name;
    memtrack::reset();
    const auto start = std::chrono::steady_clock::now();
    const Predictor predictor = trainer(train);
    const auto stop = std::chrono::steady_clock::now();
    row.train_time_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    row.peak_memory_bytes = memtrack::peak();
    row.test_metrics = compute_metrics(predictor(test), test.target, band_p);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::string& accuracy_metric,
                          std::ostream& out) {
  if (accuracy_metric != "r_squared" && accuracy_metric != "band_accuracy")
    throw ArgumentError("accuracy metric must be r_squared or band_accuracy");

  out << "metric";
  for (const auto& r : rows) out << ',' << r.model_name;
  out << '\n';

  char buf[64];
  out << "accuracy(" << accuracy_metric << ")";
  for (const auto& r : rows) {
    double v;
    if (accuracy_metric == "band_accuracy") {
      v = r.test_metrics.band_accuracy;
    } else if (r.test_metrics.r_squared) {
      v = *r.test_metrics.r_squared;
    } else {
      out << ",undefined";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  }
  out << '\n';

  out << "memory_bytes";
  for (const auto& r : rows) out << ',' << r.peak_memory_bytes;
  out << '\n';

  out << "time_ms";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.train_time_ms);
    out << ',' << buf;
  }
  out << '\n';
}

}  // namespace boostfuse
