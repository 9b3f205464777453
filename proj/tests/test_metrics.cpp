#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "boostfuse/exact.hpp"
#include "boostfuse/memtrack.hpp"
#include "boostfuse/metrics.hpp"
#include "helpers.hpp"

using namespace boostfuse;

namespace {

// Trainer that fits the mean of the training targets.
Trainer mean_trainer() {
  return [](const DataMatrix& train) -> Predictor {
    double mean = 0;
    for (double y : train.target) mean += y;
    mean /= static_cast<double>(train.n_rows);
    return [mean](const DataMatrix& test) {
      return std::vector<double>(test.n_rows, mean);
    };
  };
}

Trainer exact_trainer(TrainConfig cfg = {}) {
  return [cfg](const DataMatrix& train) -> Predictor {
    auto model = exact::train(train, cfg);
    return [model = std::move(model)](const DataMatrix& test) {
      return model.predict(test);
    };
  };
}

}  // namespace

TEST_CASE("perfect predictions") {
  const auto m = compute_metrics({1, 2, 3}, {1, 2, 3}, 0.1);
  CHECK(m.mae == 0.0);
  CHECK(m.rmse == 0.0);
  REQUIRE(m.r_squared.has_value());
  CHECK(*m.r_squared == 1.0);
  CHECK(m.band_accuracy == 1.0);
}

TEST_CASE("constant actuals leave r squared undefined") {
  const auto m = compute_metrics({1, 3}, {2, 2}, 0.1);
  CHECK(m.mae == 1.0);
  CHECK(m.rmse == 1.0);
  CHECK_FALSE(m.r_squared.has_value());
}

TEST_CASE("hand-computed r squared") {
  // actuals {2,4}, preds {1,5}: SS_res = 2, SS_tot = 2 -> r^2 = 0
  const auto a = compute_metrics({1, 5}, {2, 4}, 0.1);
  REQUIRE(a.r_squared.has_value());
  CHECK(*a.r_squared == doctest::Approx(0.0).epsilon(1e-15));
  // actuals {0,4}, preds {1,3}: SS_res = 2, SS_tot = 8 -> r^2 = 0.75
  const auto b = compute_metrics({1, 3}, {0, 4}, 0.1);
  REQUIRE(b.r_squared.has_value());
  CHECK(*b.r_squared == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("predicting the mean scores r squared of zero") {
  const std::vector<double> y{1, 2, 3, 4, 10};
  const double mean = 4.0;
  const auto m = compute_metrics(std::vector<double>(y.size(), mean), y, 0.1);
  REQUIRE(m.r_squared.has_value());
  CHECK(*m.r_squared == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("band accuracy counts relative errors, absolute at zero") {
  // |e| <= 0.1 * |y|: 100 vs 109 in, 100 vs 111 out; y = 0 uses |e| <= 0.1.
  const auto m =
      compute_metrics({109, 111, 0.05, 0.2}, {100, 100, 0, 0}, 0.1);
  CHECK(m.band_accuracy == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("compute_metrics input validation") {
  CHECK_THROWS_AS(compute_metrics({1}, {1, 2}, 0.1), ArgumentError);
  CHECK_THROWS_AS(compute_metrics({}, {}, 0.1), ArgumentError);
  CHECK_THROWS_AS(compute_metrics({1}, {1}, -0.5), ArgumentError);
}

TEST_CASE("metrics_to_json carries the undefined marker") {
  Metrics m;
  m.mae = 1.5;
  m.rmse = 2.0;
  m.band_accuracy = 0.25;
  const auto without = metrics_to_json(m);
  CHECK(without.find("r_squared_undefined") != std::string::npos);
  m.r_squared = 0.5;
  const auto with = metrics_to_json(m);
  CHECK(with.find("\"r_squared\": 0.5") != std::string::npos);
  CHECK(with.find("r_squared_undefined") == std::string::npos);
}

TEST_CASE("leave-one-out: k equals n") {
  const auto m = testutil::make_matrix({{1}, {2}, {3}, {4}, {5}},
                                       {1, 2, 3, 4, 5});
  const auto cv = k_fold_cv(m, 5, 7, mean_trainer());
  CHECK(cv.fold_metrics.size() == 5);
  std::set<std::size_t> folds(cv.fold_assignment.begin(),
                              cv.fold_assignment.end());
  CHECK(folds.size() == 5);  // each row alone in its fold
  memtrack::reset();
}

TEST_CASE("folds partition the rows with near-equal sizes") {
  const auto m = testutil::synthetic_regression(50, 103, 4);
  const auto cv = k_fold_cv(m, 4, 99, mean_trainer());
  REQUIRE(cv.fold_assignment.size() == m.n_rows);
  std::vector<std::size_t> counts(4, 0);
  for (std::size_t f : cv.fold_assignment) {
    REQUIRE(f < 4);
    ++counts[f];
  }
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  CHECK(*hi - *lo <= 1);
  memtrack::reset();
}

TEST_CASE("same seed reproduces the identical fold assignment and scores") {
  const auto m = testutil::synthetic_regression(51, 80, 4);
  const auto a = k_fold_cv(m, 5, 1234, exact_trainer());
  const auto b = k_fold_cv(m, 5, 1234, exact_trainer());
  CHECK(a.fold_assignment == b.fold_assignment);
  for (std::size_t i = 0; i < a.fold_metrics.size(); ++i) {
    CHECK(a.fold_metrics[i].mae == b.fold_metrics[i].mae);
    CHECK(a.fold_metrics[i].rmse == b.fold_metrics[i].rmse);
  }
  CHECK(a.mean_metrics.mae == b.mean_metrics.mae);

  const auto c = k_fold_cv(m, 5, 1235, exact_trainer());
  CHECK(a.fold_assignment != c.fold_assignment);
  memtrack::reset();
}

TEST_CASE("mean and std aggregate the fold metrics") {
  const auto m = testutil::synthetic_regression(52, 60, 4);
  const auto cv = k_fold_cv(m, 3, 5, mean_trainer());
  double mean = 0;
  for (const auto& f : cv.fold_metrics) mean += f.mae;
  mean /= 3.0;
  double var = 0;
  for (const auto& f : cv.fold_metrics)
    var += (f.mae - mean) * (f.mae - mean);
  var /= 3.0;  // population variance
  CHECK(cv.mean_metrics.mae == doctest::Approx(mean).epsilon(1e-12));
  CHECK(cv.std_metrics.mae == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  memtrack::reset();
}

TEST_CASE("k_fold_cv input validation") {
  const auto m = testutil::make_matrix({{1}, {2}}, {1, 2});
  CHECK_THROWS_AS(k_fold_cv(m, 3, 0, mean_trainer()), ArgumentError);
  CHECK_THROWS_AS(k_fold_cv(m, 1, 0, mean_trainer()), ArgumentError);
}

TEST_CASE("matrix_subset keeps the requested rows in order") {
  const auto m = testutil::make_matrix({{1, 10}, {2, 20}, {3, 30}}, {1, 2, 3});
  const auto s = matrix_subset(m, {2, 0});
  REQUIRE(s.n_rows == 2);
  CHECK(s.at(0, 0) == 3);
  CHECK(s.at(1, 1) == 10);
  CHECK(s.target == std::vector<double>{3, 1});
  CHECK(s.feature_names == m.feature_names);
}

TEST_CASE("compare_models produces one row per entry with sane fields") {
  const auto train = testutil::synthetic_regression(53, 150, 4);
  const auto test = testutil::synthetic_regression(54, 40, 4);
  const auto rows = compare_models(
      {{"mean", mean_trainer()}, {"gbdt", exact_trainer()}}, train, test);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].model_name == "mean");
  CHECK(rows[1].model_name == "gbdt");
  for (const auto& r : rows) {
    CHECK(r.test_metrics.mae >= 0);
    CHECK(r.train_time_ms >= 0);
  }
  // the boosted model should beat the constant predictor here
  CHECK(rows[1].test_metrics.mae < rows[0].test_metrics.mae);
  memtrack::reset();
}

TEST_CASE("write_comparison_csv emits the metric-by-model table") {
  std::vector<ComparisonRow> rows(2);
  rows[0].model_name = "a";
  rows[0].test_metrics.r_squared = 0.5;
  rows[0].peak_memory_bytes = 100;
  rows[0].train_time_ms = 1.5;
  rows[1].model_name = "b";
  rows[1].test_metrics.r_squared = 0.75;
  rows[1].peak_memory_bytes = 200;
  rows[1].train_time_ms = 2.5;
  std::ostringstream out;
  write_comparison_csv(rows, "r_squared", out);
  const std::string text = out.str();
  // header + three metric rows
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("a") != std::string::npos);
  CHECK(text.find("b") != std::string::npos);
  CHECK(text.find("0.75") != std::string::npos);
  CHECK(text.find("200") != std::string::npos);
  CHECK_THROWS_AS(write_comparison_csv(rows, "nope", out), ArgumentError);
}
