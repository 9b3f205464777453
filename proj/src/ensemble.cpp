#include "boostfuse/ensemble.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "boostfuse/kernels.hpp"

namespace boostfuse {

double compute_mae(const std::vector<double>& predictions,
                   const std::vector<double>& actuals) {
  if (predictions.size() != actuals.size())
    throw ArgumentError("compute_mae: length mismatch");
  if (predictions.empty()) throw ArgumentError("compute_mae: empty input");
  return kernels::sum_abs_diff(predictions.data(), actuals.data(),
                               predictions.size()) /
         static_cast<double>(predictions.size());
}

FusionWeights fuse_weights(double mae_exact, double mae_hist) {
  if (mae_exact < 0 || mae_hist < 0)
    throw ArgumentError("fuse_weights: MAE must be >= 0");
  if (mae_exact == 0 && mae_hist == 0) return {0.5, 0.5};
  const double total = mae_exact + mae_hist;
  return {mae_hist / total, mae_exact / total};
}

double EnsembleModel::predict(const std::vector<double>& row) const {
  if (row.size() != feature_names.size())
    throw ArgumentError("predict: row length mismatch");
  double acc = 0;
  if (weights.w_exact != 0) {
    if (!model_exact) throw ArgumentError("predict: exact model absent");
    acc += weights.w_exact * model_exact->predict(row);
  }
  if (weights.w_hist != 0) {
    if (!model_hist) throw ArgumentError("predict: hist model absent");
    acc += weights.w_hist * model_hist->predict(row);
  }
  return acc;
}

std::vector<double> EnsembleModel::predict(const DataMatrix& matrix) const {
  std::vector<double> out(matrix.n_rows, 0.0);
  auto blend = [&](const BoostModel& m, double w) {
    const auto p = m.predict(matrix);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * p[i];
  };
  if (weights.w_exact != 0) {
    if (!model_exact) throw ArgumentError("predict: exact model absent");
    blend(*model_exact, weights.w_exact);
  }
  if (weights.w_hist != 0) {
    if (!model_hist) throw ArgumentError("predict: hist model absent");
    blend(*model_hist, weights.w_hist);
  }
  return out;
}

double predict_ensemble(const EnsembleModel& model,
                        const std::vector<double>& row) {
  return model.predict(row);
}

EnsembleModel train_ensemble(const DataMatrix& train, const DataMatrix& holdout,
                             const TrainConfig& config_exact,
                             const LeafWiseConfig& config_hist) {
  if (train.n_rows == 0) throw ArgumentError("train_ensemble: empty train set");
  if (holdout.n_rows == 0)
    throw ArgumentError("train_ensemble: empty holdout set");
  if (train.feature_names != holdout.feature_names ||
      train.target_name != holdout.target_name)
    throw ArgumentError("train_ensemble: train/holdout schema mismatch");

  EnsembleModel out;
  out.feature_names = train.feature_names;
  out.target_name = train.target_name;
  out.model_exact = exact::train(train, config_exact);
  out.model_hist = hist::train(train, config_hist);
  out.holdout_mae_exact =
      compute_mae(out.model_exact->predict(holdout), holdout.target);
  out.holdout_mae_hist =
      compute_mae(out.model_hist->predict(holdout), holdout.target);
  out.weights = fuse_weights(out.holdout_mae_exact, out.holdout_mae_hist);
  return out;
}

namespace {

constexpr int kDocumentVersion = 1;

nlohmann::json tree_to_json(const RegTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : tree.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"weight", n.weight}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right}});
    }
  }
  return nodes;
}

RegTree tree_from_json(const nlohmann::json& nodes) {
  RegTree tree;
  for (const auto& jn : nodes) {
    TreeNode n;
    if (jn.contains("weight")) {
      n.weight = jn.at("weight").get<double>();
    } else {
      n.feature = jn.at("feature").get<int>();
      n.threshold = jn.at("threshold").get<double>();
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
    }
    tree.nodes.push_back(n);
  }
  if (tree.nodes.empty())
    throw MalformedDocumentError("tree with no nodes");
  return tree;
}

nlohmann::json boost_to_json(const BoostModel& m) {
  nlohmann::json j;
  j["base_score"] = m.base_score;
  j["learning_rate"] = m.learning_rate;
  j["trees"] = nlohmann::json::array();
  for (const auto& t : m.trees) j["trees"].push_back(tree_to_json(t));
  return j;
}

BoostModel boost_from_json(const nlohmann::json& j,
                           const std::vector<std::string>& feature_names) {
  BoostModel m;
  m.feature_names = feature_names;
  m.base_score = j.at("base_score").get<double>();
  m.learning_rate = j.at("learning_rate").get<double>();
  for (const auto& jt : j.at("trees")) m.trees.push_back(tree_from_json(jt));
  return m;
}

}  // namespace

void save_model(const EnsembleModel& model, std::ostream& sink) {
  nlohmann::json doc;
  doc["version"] = kDocumentVersion;
  doc["feature_names"] = model.feature_names;
  doc["target_name"] = model.target_name;
  doc["weights"] = {{"exact", model.weights.w_exact},
                    {"hist", model.weights.w_hist}};
  doc["holdout_mae"] = {{"exact", model.holdout_mae_exact},
                        {"hist", model.holdout_mae_hist}};
  doc["models"]["exact"] =
      model.model_exact ? boost_to_json(*model.model_exact)
                        : nlohmann::json(nullptr);
  doc["models"]["hist"] = model.model_hist ? boost_to_json(*model.model_hist)
                                           : nlohmann::json(nullptr);
  sink << doc.dump(2) << '\n';
}

EnsembleModel load_model(std::istream& source) {
  nlohmann::json doc;
  try {
    source >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedDocumentError(std::string("bad model document: ") +
                                 e.what());
  }
  if (!doc.is_object() || !doc.contains("version"))
    throw MalformedDocumentError("model document has no version tag");
  if (doc.at("version").get<int>() != kDocumentVersion)
    throw VersionError("unsupported model document version " +
                       doc.at("version").dump());
  try {
    EnsembleModel m;
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    m.target_name = doc.at("target_name").get<std::string>();
    m.weights.w_exact = doc.at("weights").at("exact").get<double>();
    m.weights.w_hist = doc.at("weights").at("hist").get<double>();
    m.holdout_mae_exact = doc.at("holdout_mae").at("exact").get<double>();
    m.holdout_mae_hist = doc.at("holdout_mae").at("hist").get<double>();
    const auto& models = doc.at("models");
    if (!models.at("exact").is_null())
      m.model_exact = boost_from_json(models.at("exact"), m.feature_names);
    if (!models.at("hist").is_null())
      m.model_hist = boost_from_json(models.at("hist"), m.feature_names);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedDocumentError(std::string("bad model document: ") +
                                 e.what());
  }
}

}  // namespace boostfuse
