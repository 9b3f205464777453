#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "boostfuse/data.hpp"

namespace boostfuse {

enum class Strength { Strong, Moderate, Weak };

std::string_view strength_name(Strength s);

// Pearson r between two equal-length series, clamped to [-1, 1].
// Throws ArgumentError on length mismatch, DegenerateError when n < 2 or
// either series is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// |r| > 0.5 -> Strong, |r| <= 0.3 -> Weak, else Moderate.
Strength classify_strength(double r);

struct CorrelationEntry {
  std::string feature;
  double r = 0;
  Strength strength = Strength::Weak;
  std::size_t n = 0;
  bool degenerate = false;          // constant column, r unavailable
  bool indirectly_relevant = false; // weak but strongly tied to a strong feature
};

struct SecondOrderLink {
  std::string strong_feature;
  double r = 0;
  bool available = true;  // false when the pair was degenerate
};

struct CorrelationReport {
  std::string target;
  std::vector<CorrelationEntry> entries;  // one per feature, matrix order
  std::map<std::string, std::vector<SecondOrderLink>> second_order;
};

// Correlates every feature with the target. Constant features are flagged
// degenerate rather than dropped; a constant target throws DegenerateError.
CorrelationReport correlate_with_target(const DataMatrix& matrix);

// Cross-correlates every Weak feature against every Strong one and flags
// weak features that clear the strong threshold as indirectly relevant.
CorrelationReport second_order_analysis(const DataMatrix& matrix,
                                        const CorrelationReport& report);

// Top-k features by |r| descending, name-lexicographic on ties. Strong and
// Moderate features rank first; indirectly relevant Weak features follow.
std::vector<std::string> select_features(const CorrelationReport& report,
                                         std::size_t k);

// Emission, both sorted by |r| descending.
void write_report_csv(const CorrelationReport& report, std::ostream& out);
std::string report_to_json(const CorrelationReport& report);

}  // namespace boostfuse
