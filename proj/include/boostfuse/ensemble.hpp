#pragma once

#include <iosfwd>
#include <optional>

#include "boostfuse/exact.hpp"
#include "boostfuse/hist.hpp"
#include "boostfuse/tree.hpp"

namespace boostfuse {

// Blend weights derived from holdout MAE; always non-negative, sum to 1.
struct FusionWeights {
  double w_exact = 0.5;
  double w_hist = 0.5;
};

// Two trained learners plus the weights and the MAEs they came from.
// A slot may be absent for single-learner model documents; its weight is
// then zero.
struct EnsembleModel {
  std::optional<BoostModel> model_exact;
  std::optional<BoostModel> model_hist;
  FusionWeights weights;
  double holdout_mae_exact = 0;
  double holdout_mae_hist = 0;
  std::vector<std::string> feature_names;
  std::string target_name;

  double predict(const std::vector<double>& row) const;
  std::vector<double> predict(const DataMatrix& matrix) const;
};

// Mean absolute error.
double compute_mae(const std::vector<double>& predictions,
                   const std::vector<double>& actuals);

// Inverse-MAE normalization: each model gets the other's error share.
// Both zero -> (0.5, 0.5); exactly one zero -> that model takes weight 1.
FusionWeights fuse_weights(double mae_exact, double mae_hist);

double predict_ensemble(const EnsembleModel& model,
                        const std::vector<double>& row);

EnsembleModel train_ensemble(const DataMatrix& train, const DataMatrix& holdout,
                             const TrainConfig& config_exact,
                             const LeafWiseConfig& config_hist);

// Versioned JSON document; saves are byte-stable and reloads are
// bit-faithful (shortest round-trip decimal floats).
void save_model(const EnsembleModel& model, std::ostream& sink);
EnsembleModel load_model(std::istream& source);

}  // namespace boostfuse
