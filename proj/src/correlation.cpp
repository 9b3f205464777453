#include "boostfuse/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "boostfuse/kernels.hpp"

namespace boostfuse {

namespace {

bool is_constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [&](double x) { return x == v.front(); });
}

double pearson_unchecked(const std::vector<double>& x,
                         const std::vector<double>& y) {
  const std::size_t n = x.size();
  const double mx = kernels::reduce_sum(x.data(), n) / static_cast<double>(n);
  const double my = kernels::reduce_sum(y.data(), n) / static_cast<double>(n);
  const double sxy = kernels::centered_dot(x.data(), mx, y.data(), my, n);
  const double sxx = kernels::centered_dot(x.data(), mx, x.data(), mx, n);
  const double syy = kernels::centered_dot(y.data(), my, y.data(), my, n);
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(r, -1.0, 1.0);
}

// Sort order for emission and ranking: |r| descending, name on ties.
bool rank_less(const CorrelationEntry& a, const CorrelationEntry& b) {
  if (std::abs(a.r) != std::abs(b.r)) return std::abs(a.r) > std::abs(b.r);
  return a.feature < b.feature;
}

}  // namespace

std::string_view strength_name(Strength s) {
  switch (s) {
    case Strength::Strong: return "Strong";
    case Strength::Moderate: return "Moderate";
    case Strength::Weak: return "Weak";
  }
  return "?";
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw ArgumentError("pearson: series lengths differ");
  if (x.size() < 2) throw DegenerateError("pearson: need at least 2 samples");
  if (is_constant(x) || is_constant(y))
    throw DegenerateError("pearson: constant series has no correlation");
  return pearson_unchecked(x, y);
}

Strength classify_strength(double r) {
  const double a = std::abs(r);
  if (a > 0.5) return Strength::Strong;
  if (a <= 0.3) return Strength::Weak;
  return Strength::Moderate;
}

CorrelationReport correlate_with_target(const DataMatrix& matrix) {
  if (matrix.n_rows < 2)
    throw ArgumentError("correlate_with_target: need at least 2 rows");
  if (is_constant(matrix.target))
    throw DegenerateError("correlate_with_target: target column is constant");

  CorrelationReport report;
  report.target = matrix.target_name;
  for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
    CorrelationEntry e;
    e.feature = matrix.feature_names[j];
    e.n = matrix.n_rows;
    const auto col = matrix.column(j);
    if (is_constant(col)) {
      e.degenerate = true;
    } else {
      e.r = pearson_unchecked(col, matrix.target);
      e.strength = classify_strength(e.r);
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

CorrelationReport second_order_analysis(const DataMatrix& matrix,
                                        const CorrelationReport& report) {
  CorrelationReport out = report;
  out.second_order.clear();

  std::vector<std::size_t> strong;
  for (std::size_t j = 0; j < out.entries.size(); ++j)
    if (!out.entries[j].degenerate &&
        out.entries[j].strength == Strength::Strong)
      strong.push_back(j);

  for (auto& entry : out.entries) {
    if (entry.degenerate || entry.strength != Strength::Weak) continue;
    const auto weak_col = matrix.column(matrix.feature_index(entry.feature));
    std::vector<SecondOrderLink> links;
    for (std::size_t j : strong) {
      SecondOrderLink link;
      link.strong_feature = out.entries[j].feature;
      const auto strong_col = matrix.column(matrix.feature_index(link.strong_feature));
      if (is_constant(weak_col) || is_constant(strong_col)) {
        link.available = false;
      } else {
        link.r = pearson_unchecked(weak_col, strong_col);
        if (std::abs(link.r) > 0.5) entry.indirectly_relevant = true;
      }
      links.push_back(std::move(link));
    }
    out.second_order[entry.feature] = std::move(links);
  }
  return out;
}

std::vector<std::string> select_features(const CorrelationReport& report,
                                         std::size_t k) {
  if (k < 1) throw ArgumentError("select_features: k must be >= 1");

  std::vector<CorrelationEntry> primary, indirect;
  for (const auto& e : report.entries) {
    if (e.degenerate) continue;
    if (e.strength != Strength::Weak)
      primary.push_back(e);
    else if (e.indirectly_relevant)
      indirect.push_back(e);
  }
  std::sort(primary.begin(), primary.end(), rank_less);
  std::sort(indirect.begin(), indirect.end(), rank_less);

  std::vector<std::string> out;
  for (const auto& e : primary) out.push_back(e.feature);
  for (const auto& e : indirect) out.push_back(e.feature);
  if (out.empty()) throw DegenerateError("select_features: no eligible features");
  if (out.size() > k) out.resize(k);
  return out;
}

void write_report_csv(const CorrelationReport& report, std::ostream& out) {
  auto sorted = report.entries;
  std::sort(sorted.begin(), sorted.end(), rank_less);
  out << "feature,r,strength,flags\n";
  for (const auto& e : sorted) {
    out << e.feature << ',';
    if (e.degenerate) {
      out << ",," << "degenerate\n";
      continue;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", e.r);
    out << buf << ',' << strength_name(e.strength) << ','
        << (e.indirectly_relevant ? "indirectly_relevant" : "") << '\n';
  }
}

std::string report_to_json(const CorrelationReport& report) {
  auto sorted = report.entries;
  std::sort(sorted.begin(), sorted.end(), rank_less);

  nlohmann::json doc;
  doc["target"] = report.target;
  doc["entries"] = nlohmann::json::array();
  for (const auto& e : sorted) {
    nlohmann::json je;
    je["feature"] = e.feature;
    je["n"] = e.n;
    if (e.degenerate) {
      je["degenerate"] = true;
    } else {
      je["r"] = e.r;
      je["strength"] = strength_name(e.strength);
      je["indirectly_relevant"] = e.indirectly_relevant;
    }
    doc["entries"].push_back(std::move(je));
  }
  doc["second_order"] = nlohmann::json::object();
  for (const auto& [weak, links] : report.second_order) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& link : links) {
      nlohmann::json jl;
      jl["strong_feature"] = link.strong_feature;
      if (link.available)
        jl["r"] = link.r;
      else
        jl["unavailable"] = true;
      arr.push_back(std::move(jl));
    }
    doc["second_order"][weak] = std::move(arr);
  }
  return doc.dump(2);
}

}  // namespace boostfuse
