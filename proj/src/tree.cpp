#include "boostfuse/tree.hpp"

#include <functional>

namespace boostfuse {

int RegTree::num_leaves() const {
  int count = 0;
  for (const auto& n : nodes)
    if (n.is_leaf()) ++count;
  return count;
}

int RegTree::depth() const {
  std::function<int(int)> walk = [&](int i) -> int {
    if (nodes[i].is_leaf()) return 0;
    return 1 + std::max(walk(nodes[i].left), walk(nodes[i].right));
  };
  return nodes.empty() ? 0 : walk(0);
}

double BoostModel::predict(const std::vector<double>& row) const {
  if (row.size() != feature_names.size())
    throw ArgumentError("predict: row has " + std::to_string(row.size()) +
                        " values, model expects " +
                        std::to_string(feature_names.size()));
  double acc = 0;
  for (const auto& t : trees) acc += t.predict(row.data());
  return base_score + learning_rate * acc;
}

std::vector<double> BoostModel::predict(const DataMatrix& matrix) const {
  if (matrix.n_cols() != feature_names.size())
    throw ArgumentError("predict: feature count mismatch");
  std::vector<double> out(matrix.n_rows);
  for (std::size_t i = 0; i < matrix.n_rows; ++i) {
    double acc = 0;
    const double* row = matrix.values.data() + i * matrix.n_cols();
    for (const auto& t : trees) acc += t.predict(row);
    out[i] = base_score + learning_rate * acc;
  }
  return out;
}

}  // namespace boostfuse
