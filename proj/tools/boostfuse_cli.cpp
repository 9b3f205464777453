#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "boostfuse/correlation.hpp"
#include "boostfuse/data.hpp"
#include "boostfuse/ensemble.hpp"
#include "boostfuse/kernels.hpp"
#include "boostfuse/metrics.hpp"

using namespace boostfuse;

namespace {

struct IoError : Error {
  using Error::Error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

CsvOptions csv_options(const std::string& alias_path, bool lenient) {
  CsvOptions opts;
  opts.lenient = lenient;
  if (!alias_path.empty()) {
    auto in = open_input(alias_path);
    opts.aliases = parse_alias_table(in);
  }
  return opts;
}

std::vector<DailyRecord> load_daily(const std::string& path,
                                    const std::string& alias_path,
                                    bool lenient) {
  auto in = open_input(path);
  auto records = parse_daily_csv(in, csv_options(alias_path, lenient));
  std::sort(records.begin(), records.end(),
            [](const DailyRecord& a, const DailyRecord& b) {
              return a.date < b.date;
            });
  return records;
}

std::vector<std::string> parse_feature_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Feature list: explicit flag value, else every column except the target.
std::vector<std::string> resolve_features(
    const std::vector<DailyRecord>& records, const std::string& features_flag,
    const std::string& target) {
  if (!features_flag.empty()) return parse_feature_list(features_flag);
  std::vector<std::string> names;
  for (const auto& c : column_names(records))
    if (c != target) names.push_back(c);
  return names;
}

// Matrix without a target column, for prediction-only inputs.
DataMatrix rows_matrix(const std::vector<DailyRecord>& records,
                       const std::vector<std::string>& feature_names) {
  DataMatrix m;
  m.feature_names = feature_names;
  m.target_name = "";
  m.n_rows = records.size();
  for (const auto& r : records)
    for (const auto& f : feature_names) m.values.push_back(r.field(f));
  m.target.assign(records.size(), 0.0);
  return m;
}

struct TrainFlags {
  std::string learner = "ensemble";
  int trees = 7;
  double learning_rate = 0.3;
  double l2 = 1.0;
  double gamma = 0.0;
  int max_depth = 6;
  int min_samples_leaf = 1;
  int max_leaves = 31;
  int bins = 255;
  std::uint64_t seed = 0;
  bool base_score_zero = false;

  TrainConfig exact_config() const {
    TrainConfig c;
    c.num_trees = trees;
    c.learning_rate = learning_rate;
    c.l2_penalty = l2;
    c.leaf_penalty = gamma;
    c.max_depth = max_depth;
    c.min_samples_leaf = min_samples_leaf;
    c.seed = seed;
    c.base_score_zero = base_score_zero;
    return c;
  }
  LeafWiseConfig hist_config() const {
    LeafWiseConfig c;
    static_cast<TrainConfig&>(c) = exact_config();
    c.max_leaves = max_leaves;
    c.bin_count = bins;
    return c;
  }
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--trees", f.trees, "boosting rounds");
  cmd->add_option("--learning-rate", f.learning_rate, "shrinkage, (0,1]");
  cmd->add_option("--l2", f.l2, "L2 penalty on leaf weights (mu)");
  cmd->add_option("--gamma", f.gamma, "per-leaf penalty");
  cmd->add_option("--max-depth", f.max_depth, "depth cap");
  cmd->add_option("--min-samples-leaf", f.min_samples_leaf,
                  "minimum rows per leaf");
  cmd->add_option("--max-leaves", f.max_leaves, "leaf cap (hist learner)");
  cmd->add_option("--bins", f.bins, "bin count (hist learner)");
  cmd->add_option("--seed", f.seed, "seed for seeded procedures");
  cmd->add_flag("--base-score-zero", f.base_score_zero,
                "start boosting from 0 instead of the target mean");
}

// Last 20% of rows (file is date-sorted) when no explicit holdout is given.
std::pair<DataMatrix, DataMatrix> default_holdout_split(const DataMatrix& m) {
  const std::size_t holdout = std::max<std::size_t>(1, m.n_rows / 5);
  if (holdout >= m.n_rows)
    throw ArgumentError("not enough rows to carve a holdout slice");
  std::vector<std::size_t> head, tail;
  for (std::size_t i = 0; i < m.n_rows - holdout; ++i) head.push_back(i);
  for (std::size_t i = m.n_rows - holdout; i < m.n_rows; ++i)
    tail.push_back(i);
  return {matrix_subset(m, head), matrix_subset(m, tail)};
}

EnsembleModel train_from_flags(const TrainFlags& flags,
                               const DataMatrix& train_matrix,
                               const DataMatrix* holdout_matrix) {
  EnsembleModel out;
  out.feature_names = train_matrix.feature_names;
  out.target_name = train_matrix.target_name;
  if (flags.learner == "ensemble") {
    DataMatrix train = train_matrix, holdout;
    if (holdout_matrix) {
      holdout = *holdout_matrix;
    } else {
      std::tie(train, holdout) = default_holdout_split(train_matrix);
    }
    return train_ensemble(train, holdout, flags.exact_config(),
                          flags.hist_config());
  }
  if (flags.learner == "exact") {
    out.model_exact = exact::train(train_matrix, flags.exact_config());
    out.weights = {1.0, 0.0};
    if (holdout_matrix)
      out.holdout_mae_exact =
          compute_mae(out.model_exact->predict(*holdout_matrix),
                      holdout_matrix->target);
  } else if (flags.learner == "hist") {
    out.model_hist = hist::train(train_matrix, flags.hist_config());
    out.weights = {0.0, 1.0};
    if (holdout_matrix)
      out.holdout_mae_hist =
          compute_mae(out.model_hist->predict(*holdout_matrix),
                      holdout_matrix->target);
  } else {
    throw CLI::ValidationError("--learner must be exact, hist, or ensemble");
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"boostfuse: boosted-tree energy prediction toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file mirroring the flags");

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "validate a CSV and emit the canonical daily table");
  std::string in_path, out_path, alias_path;
  bool lenient = false, minutely = false, filter_flag = false;
  ingest->add_option("--data", in_path, "input CSV")->required();
  ingest->add_option("--out", out_path, "output CSV (default stdout)");
  ingest->add_option("--alias", alias_path,
                     "alias table mapping canonical names to headers");
  ingest->add_flag("--lenient", lenient, "drop bad rows instead of failing");
  ingest->add_flag("--aggregate", minutely,
                   "input is minutely gateway data; aggregate per day");
  ingest->add_flag("--filter-operating", filter_flag,
                   "keep only days with nonzero cooling output");
  std::string train_month, test_month, out_train, out_test;
  ingest->add_option("--train-month", train_month,
                     "YYYY-MM bucket written to --out-train");
  ingest->add_option("--test-month", test_month,
                     "YYYY-MM bucket written to --out-test");
  ingest->add_option("--out-train", out_train, "train-month CSV path");
  ingest->add_option("--out-test", out_test, "test-month CSV path");

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "correlation report, second-order flags, feature ranking");
  std::string an_data, an_target = "system_daily_cooling", an_features;
  std::string an_out_json, an_out_csv;
  std::size_t top_k = 9;
  analyze->add_option("--data", an_data, "daily CSV")->required();
  analyze->add_option("--target", an_target, "target column");
  analyze->add_option("--features", an_features, "comma-separated feature list");
  analyze->add_option("--top", top_k, "how many features to select");
  analyze->add_option("--out-json", an_out_json, "write JSON report here");
  analyze->add_option("--out-csv", an_out_csv, "write CSV report here");
  analyze->add_option("--alias", alias_path, "alias table file");
  analyze->add_flag("--lenient", lenient, "drop bad rows instead of failing");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model document");
  std::string tr_train, tr_holdout, tr_out = "model.json";
  std::string tr_target = "system_daily_cooling", tr_features;
  TrainFlags tr_flags;
  train_cmd->add_option("--train", tr_train, "training CSV")->required();
  train_cmd->add_option("--holdout", tr_holdout,
                        "holdout CSV for fusion weights");
  train_cmd->add_option("--out", tr_out, "model document path");
  train_cmd->add_option("--target", tr_target, "target column");
  train_cmd->add_option("--features", tr_features, "comma-separated features");
  train_cmd
      ->add_option("--learner", tr_flags.learner, "exact | hist | ensemble")
      ->check(CLI::IsMember({"exact", "hist", "ensemble"}));
  train_cmd->add_option("--alias", alias_path, "alias table file");
  train_cmd->add_flag("--lenient", lenient, "drop bad rows instead of failing");
  add_train_flags(train_cmd, tr_flags);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "model + CSV -> predictions");
  std::string pr_model, pr_data, pr_out;
  predict_cmd->add_option("--model", pr_model, "model document")->required();
  predict_cmd->add_option("--data", pr_data, "input CSV")->required();
  predict_cmd->add_option("--out", pr_out, "predictions CSV (default stdout)");
  predict_cmd->add_option("--alias", alias_path, "alias table file");
  predict_cmd->add_flag("--lenient", lenient, "drop bad rows instead of failing");

  // evaluate
  auto* eval_cmd =
      app.add_subcommand("evaluate", "model + CSV -> metrics and series file");
  std::string ev_model, ev_data, ev_json, ev_series;
  double ev_band = 0.1;
  eval_cmd->add_option("--model", ev_model, "model document")->required();
  eval_cmd->add_option("--data", ev_data, "evaluation CSV")->required();
  eval_cmd->add_option("--out-json", ev_json, "metrics JSON path");
  eval_cmd->add_option("--series", ev_series,
                       "actual-vs-predicted CSV, ordered by date");
  eval_cmd->add_option("--band", ev_band, "band accuracy tolerance p");
  eval_cmd->add_option("--alias", alias_path, "alias table file");
  eval_cmd->add_flag("--lenient", lenient, "drop bad rows instead of failing");

  // cv
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation report");
  std::string cv_data, cv_target = "system_daily_cooling", cv_features, cv_out;
  std::size_t cv_folds = 2;
  double cv_band = 0.1;
  TrainFlags cv_flags;
  cv_cmd->add_option("--data", cv_data, "daily CSV")->required();
  cv_cmd->add_option("--target", cv_target, "target column");
  cv_cmd->add_option("--features", cv_features, "comma-separated features");
  cv_cmd->add_option("--folds", cv_folds, "fold count k");
  cv_cmd->add_option("--band", cv_band, "band accuracy tolerance p");
  cv_cmd->add_option("--out", cv_out, "fold metrics CSV (default stdout)");
  cv_cmd->add_option("--learner", cv_flags.learner, "exact | hist | ensemble")
      ->check(CLI::IsMember({"exact", "hist", "ensemble"}));
  cv_cmd->add_option("--alias", alias_path, "alias table file");
  cv_cmd->add_flag("--lenient", lenient, "drop bad rows instead of failing");
  add_train_flags(cv_cmd, cv_flags);

  // compare
  auto* cmp_cmd = app.add_subcommand(
      "compare", "exact vs hist vs fusion comparison table");
  std::string cmp_train, cmp_test, cmp_target = "system_daily_cooling";
  std::string cmp_features, cmp_out, cmp_metric = "r_squared";
  double cmp_band = 0.1;
  TrainFlags cmp_flags;
  cmp_cmd->add_option("--train", cmp_train, "training CSV")->required();
  cmp_cmd->add_option("--test", cmp_test, "test CSV")->required();
  cmp_cmd->add_option("--target", cmp_target, "target column");
  cmp_cmd->add_option("--features", cmp_features, "comma-separated features");
  cmp_cmd->add_option("--band", cmp_band, "band accuracy tolerance p");
  cmp_cmd->add_option("--metric", cmp_metric,
                      "accuracy column: r_squared | band_accuracy")
      ->check(CLI::IsMember({"r_squared", "band_accuracy"}));
  cmp_cmd->add_option("--out", cmp_out, "comparison CSV (default stdout)");
  cmp_cmd->add_option("--alias", alias_path, "alias table file");
  cmp_cmd->add_flag("--lenient", lenient, "drop bad rows instead of failing");
  add_train_flags(cmp_cmd, cmp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help or the usage diagnostic
    const bool help = e.get_name() == "CallForHelp" ||
                      e.get_name() == "CallForAllHelp";
    return help ? 0 : 1;
  }

  if (*ingest) {
    std::vector<DailyRecord> records;
    if (minutely) {
      auto in = open_input(in_path);
      auto minutes = parse_minutely_csv(in, csv_options(alias_path, lenient));
      std::map<Date, std::vector<MinutelyRecord>> by_day;
      for (const auto& r : minutes) by_day[r.date].push_back(r);
      for (const auto& [day, rs] : by_day)
        records.push_back(aggregate_minutely(rs, day));
    } else {
      records = load_daily(in_path, alias_path, lenient);
    }
    if (filter_flag) records = filter_operating_days(records);
    if (!train_month.empty() || !test_month.empty()) {
      if (train_month.empty() || test_month.empty() || out_train.empty() ||
          out_test.empty())
        throw CLI::ValidationError(
            "month split needs --train-month, --test-month, --out-train and "
            "--out-test");
      const auto split = split_by_month(records, Month::parse(train_month),
                                        Month::parse(test_month));
      for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';
      auto tr = open_output(out_train);
      write_daily_csv(split.train, tr);
      auto te = open_output(out_test);
      write_daily_csv(split.test, te);
      std::cerr << "split " << split.train.size() << " train / "
                << split.test.size() << " test day(s)\n";
      return 0;
    }
    if (out_path.empty()) {
      write_daily_csv(records, std::cout);
    } else {
      auto out = open_output(out_path);
      write_daily_csv(records, out);
    }
    std::cerr << "ingested " << records.size() << " day(s)\n";
    return 0;
  }

  if (*analyze) {
    const auto records = load_daily(an_data, alias_path, lenient);
    const auto features = resolve_features(records, an_features, an_target);
    const auto matrix = to_matrix(records, features, an_target);
    auto report = correlate_with_target(matrix);
    report = second_order_analysis(matrix, report);
    if (!an_out_json.empty()) {
      auto out = open_output(an_out_json);
      out << report_to_json(report) << '\n';
    }
    if (!an_out_csv.empty()) {
      auto out = open_output(an_out_csv);
      write_report_csv(report, out);
    }
    const auto selected = select_features(report, top_k);
    std::cout << "selected features (|r| descending):\n";
    for (std::size_t i = 0; i < selected.size(); ++i)
      std::cout << "  " << (i + 1) << ". " << selected[i] << '\n';
    return 0;
  }

  if (*train_cmd) {
    const auto records = load_daily(tr_train, alias_path, lenient);
    const auto features = resolve_features(records, tr_features, tr_target);
    const auto train_matrix = to_matrix(records, features, tr_target);
    std::optional<DataMatrix> holdout;
    if (!tr_holdout.empty()) {
      const auto hrecords = load_daily(tr_holdout, alias_path, lenient);
      holdout = to_matrix(hrecords, features, tr_target);
    }
    const auto model = train_from_flags(tr_flags, train_matrix,
                                        holdout ? &*holdout : nullptr);
    auto out = open_output(tr_out);
    save_model(model, out);
    std::cerr << "wrote " << tr_out << " (weights exact="
              << model.weights.w_exact << " hist=" << model.weights.w_hist
              << ", simd=" << kernels::active_backend() << ")\n";
    return 0;
  }

  if (*predict_cmd) {
    auto min = open_input(pr_model);
    const auto model = load_model(min);
    const auto records = load_daily(pr_data, alias_path, lenient);
    const auto matrix = rows_matrix(records, model.feature_names);
    const auto preds = model.predict(matrix);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!pr_out.empty()) {
      file = open_output(pr_out);
      os = &file;
    }
    *os << "date,prediction\n";
    char buf[64];
    for (std::size_t i = 0; i < records.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", preds[i]);
      *os << records[i].date.to_string() << ',' << buf << '\n';
    }
    return 0;
  }

  if (*eval_cmd) {
    auto min = open_input(ev_model);
    const auto model = load_model(min);
    const auto records = load_daily(ev_data, alias_path, lenient);
    const auto matrix = rows_matrix(records, model.feature_names);
    const auto preds = model.predict(matrix);
    std::vector<double> actuals;
    for (const auto& r : records) actuals.push_back(r.field(model.target_name));
    const auto m = compute_metrics(preds, actuals, ev_band);
    std::cout << metrics_to_json(m) << '\n';
    if (!ev_json.empty()) {
      auto out = open_output(ev_json);
      out << metrics_to_json(m) << '\n';
    }
    if (!ev_series.empty()) {
      auto out = open_output(ev_series);
      out << "date,actual,predicted\n";
      char buf[64];
      for (std::size_t i = 0; i < records.size(); ++i) {
        out << records[i].date.to_string();
        std::snprintf(buf, sizeof buf, "%.17g", actuals[i]);
        out << ',' << buf;
        std::snprintf(buf, sizeof buf, "%.17g", preds[i]);
        out << ',' << buf << '\n';
      }
    }
    return 0;
  }

  auto make_trainer = [](const TrainFlags& flags,
                         const std::string& learner) -> Trainer {
    TrainFlags f = flags;
    f.learner = learner;
    return [f](const DataMatrix& train) -> Predictor {
      auto model = std::make_shared<EnsembleModel>(
          train_from_flags(f, train, nullptr));
      return [model](const DataMatrix& eval) { return model->predict(eval); };
    };
  };

  if (*cv_cmd) {
    const auto records = load_daily(cv_data, alias_path, lenient);
    const auto features = resolve_features(records, cv_features, cv_target);
    const auto matrix = to_matrix(records, features, cv_target);
    const auto result = k_fold_cv(matrix, cv_folds, cv_flags.seed,
                                  make_trainer(cv_flags, cv_flags.learner),
                                  cv_band);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cv_out.empty()) {
      file = open_output(cv_out);
      os = &file;
    }
    *os << "fold,mae,rmse,r_squared,band_accuracy\n";
    char buf[64];
    auto emit = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      *os << ',' << buf;
    };
    auto emit_row = [&](const std::string& label, const Metrics& m) {
      *os << label;
      emit(m.mae);
      emit(m.rmse);
      if (m.r_squared)
        emit(*m.r_squared);
      else
        *os << ",undefined";
      emit(m.band_accuracy);
      *os << '\n';
    };
    for (std::size_t f = 0; f < result.fold_metrics.size(); ++f)
      emit_row(std::to_string(f), result.fold_metrics[f]);
    emit_row("mean", result.mean_metrics);
    emit_row("std", result.std_metrics);
    return 0;
  }

  if (*cmp_cmd) {
    const auto train_records = load_daily(cmp_train, alias_path, lenient);
    const auto features = resolve_features(train_records, cmp_features,
                                           cmp_target);
    const auto train_matrix = to_matrix(train_records, features, cmp_target);
    const auto test_records = load_daily(cmp_test, alias_path, lenient);
    const auto test_matrix = to_matrix(test_records, features, cmp_target);
    const std::vector<std::pair<std::string, Trainer>> entries = {
        {"exact", make_trainer(cmp_flags, "exact")},
        {"hist", make_trainer(cmp_flags, "hist")},
        {"fusion", make_trainer(cmp_flags, "ensemble")},
    };
    const auto rows = compare_models(entries, train_matrix, test_matrix,
                                     cmp_band);
    if (cmp_out.empty()) {
      write_comparison_csv(rows, cmp_metric, std::cout);
    } else {
      auto out = open_output(cmp_out);
      write_comparison_csv(rows, cmp_metric, out);
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
