#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace crbm::train {

/// Random-forest binary classifier: bagged depth-limited CART trees with
/// sqrt(d) feature subsampling, Gini splits, leaf class fractions averaged
/// for the probability estimate. Deterministic under the seed.
class RandomForest {
 public:
  struct Settings {
    int n_trees = 50;
    int max_depth = 8;
    int min_leaf = 4;
  };

  /// x: one row per sample; y: labels 0/1.
  void fit(const Eigen::MatrixXd& x, const std::vector<int>& y, Settings settings,
           uint64_t seed);

  /// P(label = 1 | features) for each row.
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;

  bool fitted() const { return !trees_.empty(); }

 private:
  struct Node {
    int feature = -1;      // -1 for leaves
    double threshold = 0.0;
    int left = -1, right = -1;
    double p1 = 0.5;  // leaf class-1 fraction
  };
  struct Tree {
    std::vector<Node> nodes;
  };

  double predict_one(const Tree& tree, const Eigen::VectorXd& x) const;

  std::vector<Tree> trees_;
};

}  // namespace crbm::train
