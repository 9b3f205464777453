#pragma once

#include <string>
#include <vector>

#include "boostfuse/data.hpp"

namespace boostfuse {

// Binary regression tree stored as a flat node array; node 0 is the root.
// Routing rule: value <= threshold goes left.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  double weight = 0;  // leaf output

  bool is_leaf() const { return left < 0; }
};

struct RegTree {
  std::vector<TreeNode> nodes;

  double predict(const double* row) const {
    int i = 0;
    while (!nodes[i].is_leaf())
      i = row[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left
                                                      : nodes[i].right;
    return nodes[i].weight;
  }

  int num_leaves() const;
  int depth() const;  // a lone leaf has depth 0
};

// Additive sequence: prediction = base_score + learning_rate * sum of trees.
struct BoostModel {
  double base_score = 0;
  double learning_rate = 1;
  std::vector<RegTree> trees;
  std::vector<std::string> feature_names;

  double predict(const std::vector<double>& row) const;
  std::vector<double> predict(const DataMatrix& matrix) const;
};

}  // namespace boostfuse
