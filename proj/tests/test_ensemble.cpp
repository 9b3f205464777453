#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "boostfuse/ensemble.hpp"
#include "boostfuse/memtrack.hpp"
#include "helpers.hpp"

using namespace boostfuse;

namespace {

// Train/holdout pair from one synthetic draw, split 80/20 by row order.
std::pair<DataMatrix, DataMatrix> split_synthetic(std::uint64_t seed,
                                                  std::size_t n = 200,
                                                  std::size_t m = 5) {
  const auto full = testutil::synthetic_regression(seed, n, m);
  const std::size_t cut = n - n / 5;
  DataMatrix train, holdout;
  train.feature_names = holdout.feature_names = full.feature_names;
  train.target_name = holdout.target_name = full.target_name;
  train.n_rows = cut;
  holdout.n_rows = n - cut;
  train.values.assign(full.values.begin(),
                      full.values.begin() + cut * full.n_cols());
  holdout.values.assign(full.values.begin() + cut * full.n_cols(),
                        full.values.end());
  train.target.assign(full.target.begin(), full.target.begin() + cut);
  holdout.target.assign(full.target.begin() + cut, full.target.end());
  return {train, holdout};
}

}  // namespace

TEST_CASE("compute_mae hand cases") {
  CHECK(compute_mae({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(compute_mae({1, 3}, {2, 2}) == 1.0);
  CHECK(compute_mae({0, 0, 0, 12}, {0, 0, 0, 0}) == 3.0);
  CHECK_THROWS_AS(compute_mae({1}, {1, 2}), ArgumentError);
  CHECK_THROWS_AS(compute_mae({}, {}), ArgumentError);
}

TEST_CASE("fuse_weights closed forms") {
  const auto eq = fuse_weights(2.0, 2.0);
  CHECK(eq.w_exact == 0.5);
  CHECK(eq.w_hist == 0.5);

  const auto w = fuse_weights(1.0, 3.0);
  CHECK(w.w_exact == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(w.w_hist == doctest::Approx(0.25).epsilon(1e-15));

  const auto z = fuse_weights(0.0, 0.0);
  CHECK(z.w_exact == 0.5);
  CHECK(z.w_hist == 0.5);

  const auto one = fuse_weights(0.0, 5.0);
  CHECK(one.w_exact == 1.0);
  CHECK(one.w_hist == 0.0);

  CHECK_THROWS_AS(fuse_weights(-1.0, 1.0), ArgumentError);
}

TEST_CASE("fuse_weights reproduces the published weight pair") {
  // MAE pair whose sum is 1, so each model's weight equals the other's MAE.
  const double mae_exact = 0.28998819559541045;
  const double mae_hist = 0.7100118044045896;
  const auto got = fuse_weights(mae_exact, mae_hist);
  CHECK(got.w_exact == doctest::Approx(mae_hist).epsilon(1e-15));
  CHECK(got.w_hist == doctest::Approx(mae_exact).epsilon(1e-15));
  CHECK(got.w_exact + got.w_hist == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fuse_weights: sum to one, lower error earns larger weight") {
  std::mt19937_64 rng(90);
  std::uniform_real_distribution<double> mae(0, 100);
  std::uniform_int_distribution<int> zero(0, 19);
  for (int it = 0; it < 1000; ++it) {
    double a = mae(rng), b = mae(rng);
    if (zero(rng) == 0) a = 0;
    if (zero(rng) == 0) b = 0;
    const auto w = fuse_weights(a, b);
    CHECK(w.w_exact >= 0);
    CHECK(w.w_hist >= 0);
    CHECK(w.w_exact + w.w_hist == doctest::Approx(1.0).epsilon(1e-12));
    if (a < b) CHECK(w.w_exact >= w.w_hist);
    if (b < a) CHECK(w.w_hist >= w.w_exact);
  }
}

TEST_CASE("predict_ensemble blends the two slots by weight") {
  // Two zero-round models reduced to constant base scores 2 and 6.
  EnsembleModel e;
  e.feature_names = {"f0"};
  BoostModel a;
  a.base_score = 2;
  a.feature_names = {"f0"};
  BoostModel b;
  b.base_score = 6;
  b.feature_names = {"f0"};
  e.model_exact = a;
  e.model_hist = b;
  e.weights = {0.25, 0.75};
  CHECK(predict_ensemble(e, {1.0}) == doctest::Approx(5.0).epsilon(1e-15));
  e.weights = {1.0, 0.0};
  CHECK(predict_ensemble(e, {1.0}) == 2.0);
}

TEST_CASE("a zero-weight absent slot is never consulted") {
  EnsembleModel e;
  e.feature_names = {"f0"};
  BoostModel a;
  a.base_score = 3;
  a.feature_names = {"f0"};
  e.model_exact = a;
  e.weights = {1.0, 0.0};  // model_hist absent
  CHECK(e.predict(std::vector<double>{0.5}) == 3.0);
}

TEST_CASE("batch ensemble predict equals per-row predict") {
  const auto [train, holdout] = split_synthetic(91);
  const auto e = train_ensemble(train, holdout, TrainConfig{}, LeafWiseConfig{});
  const auto batch = e.predict(holdout);
  for (std::size_t i = 0; i < holdout.n_rows; ++i) {
    std::vector<double> row(holdout.n_cols());
    for (std::size_t j = 0; j < holdout.n_cols(); ++j) row[j] = holdout.at(i, j);
    CHECK(batch[i] == e.predict(row));
  }
  memtrack::reset();
}

TEST_CASE("identical learners fuse to equal weights") {
  // With enough bins the two learners agree on every training row (the
  // chosen thresholds may differ inside gaps between observed values, so
  // agreement is only guaranteed there). Scoring on the training rows makes
  // both MAEs coincide and the blend symmetric.
  const auto train = testutil::synthetic_regression(92, 200, 5);
  TrainConfig ecfg;
  ecfg.max_depth = 4;
  LeafWiseConfig hcfg;
  hcfg.max_depth = 4;
  hcfg.max_leaves = 1 << 12;
  hcfg.bin_count = 4096;
  const auto e = train_ensemble(train, train, ecfg, hcfg);
  CHECK(e.weights.w_exact == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(e.holdout_mae_exact - e.holdout_mae_hist) < 1e-9);
}

TEST_CASE("ensemble holdout MAE never exceeds the worse member") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto [train, holdout] = split_synthetic(seed, 300, 5);
    TrainConfig ecfg;
    ecfg.max_depth = 3;
    LeafWiseConfig hcfg;
    hcfg.max_depth = 6;
    hcfg.max_leaves = 15;
    hcfg.bin_count = 32;
    const auto e = train_ensemble(train, holdout, ecfg, hcfg);
    const double mae_fused = compute_mae(e.predict(holdout), holdout.target);
    const double worse = std::max(e.holdout_mae_exact, e.holdout_mae_hist);
    CHECK(mae_fused <= worse + 1e-9);
  }
}

TEST_CASE("train_ensemble rejects an empty holdout") {
  const auto [train, holdout] = split_synthetic(93);
  DataMatrix empty;
  empty.feature_names = train.feature_names;
  empty.target_name = train.target_name;
  CHECK_THROWS_AS(
      train_ensemble(train, empty, TrainConfig{}, LeafWiseConfig{}), Error);
}

TEST_CASE("save/load round trip is bit-faithful") {
  const auto [train, holdout] = split_synthetic(94);
  const auto e = train_ensemble(train, holdout, TrainConfig{}, LeafWiseConfig{});
  std::ostringstream saved;
  save_model(e, saved);
  std::istringstream in(saved.str());
  const auto back = load_model(in);

  CHECK(back.weights.w_exact == e.weights.w_exact);
  CHECK(back.weights.w_hist == e.weights.w_hist);
  CHECK(back.holdout_mae_exact == e.holdout_mae_exact);
  CHECK(back.feature_names == e.feature_names);
  CHECK(back.target_name == e.target_name);
  const auto pa = e.predict(holdout);
  const auto pb = back.predict(holdout);
  for (std::size_t i = 0; i < holdout.n_rows; ++i) CHECK(pa[i] == pb[i]);
  memtrack::reset();
}

TEST_CASE("saving twice produces byte-identical documents") {
  const auto [train, holdout] = split_synthetic(95);
  const auto e = train_ensemble(train, holdout, TrainConfig{}, LeafWiseConfig{});
  std::ostringstream a, b;
  save_model(e, a);
  save_model(e, b);
  CHECK(a.str() == b.str());
  // save -> load -> save must also be stable
  std::istringstream in(a.str());
  const auto back = load_model(in);
  std::ostringstream c;
  save_model(back, c);
  CHECK(c.str() == a.str());
  memtrack::reset();
}

TEST_CASE("load_model rejects unsupported versions") {
  std::istringstream in(R"({"version": 999})");
  CHECK_THROWS_AS(load_model(in), VersionError);
}

TEST_CASE("load_model rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(load_model(empty), MalformedDocumentError);
  std::istringstream junk("this is not json");
  CHECK_THROWS_AS(load_model(junk), MalformedDocumentError);
  std::istringstream missing(R"({"version": 1})");
  CHECK_THROWS_AS(load_model(missing), MalformedDocumentError);
}
