#include "crbm/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crbm/errors.hpp"
#include "crbm/rng.hpp"

namespace crbm::train {

namespace {

struct SplitResult {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 1e300;
};

double gini(long n1, long n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(n1) / n;
  return p * (1.0 - p);
}

}  // namespace

void RandomForest::fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       Settings settings, uint64_t seed) {
  const long n = x.rows();
  const int d = static_cast<int>(x.cols());
  if (n == 0 || static_cast<long>(y.size()) != n) {
    throw RunError("random forest: empty or mismatched training set");
  }
  trees_.clear();
  trees_.resize(settings.n_trees);
  const int mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(d))));

  for (int t = 0; t < settings.n_trees; ++t) {
    Rng rng(derive_seed(seed, 0xF0BE57ULL, t));
    Tree& tree = trees_[t];
    std::vector<long> sample(n);
    for (long i = 0; i < n; ++i) sample[i] = static_cast<long>(rng.below(n));

    struct Work {
      int node;
      std::vector<long> rows;
      int depth;
    };
    std::vector<Work> stack;
    tree.nodes.push_back({});
    stack.push_back({0, sample, 0});
    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);

    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();
      Node& node = tree.nodes[w.node];
      long n1 = 0;
      for (long r : w.rows) n1 += y[r];
      const long nn = static_cast<long>(w.rows.size());
      node.p1 = nn > 0 ? static_cast<double>(n1) / nn : 0.5;
      if (w.depth >= settings.max_depth || nn < 2 * settings.min_leaf || n1 == 0 ||
          n1 == nn) {
        continue;
      }

      rng.shuffle(features);
      SplitResult best;
      std::vector<std::pair<double, int>> vals(nn);
      for (int fi = 0; fi < mtry; ++fi) {
        const int f = features[fi];
        for (long i = 0; i < nn; ++i) {
          vals[i] = {x(w.rows[i], f), y[w.rows[i]]};
        }
        std::sort(vals.begin(), vals.end());
        long left1 = 0;
        for (long i = 0; i + 1 < nn; ++i) {
          left1 += vals[i].second;
          if (vals[i].first == vals[i + 1].first) continue;
          const long nl = i + 1, nr = nn - nl;
          if (nl < settings.min_leaf || nr < settings.min_leaf) continue;
          const double imp = nl * gini(left1, nl) + nr * gini(n1 - left1, nr);
          if (imp < best.impurity) {
            best = {f, 0.5 * (vals[i].first + vals[i + 1].first), imp};
          }
        }
      }
      if (best.feature < 0) continue;

      std::vector<long> left_rows, right_rows;
      for (long r : w.rows) {
        (x(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
      }
      if (left_rows.empty() || right_rows.empty()) continue;
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.left = static_cast<int>(tree.nodes.size());
      node.right = node.left + 1;
      const int depth = w.depth + 1;
      const int left_id = node.left, right_id = node.right;
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      stack.push_back({left_id, std::move(left_rows), depth});
      stack.push_back({right_id, std::move(right_rows), depth});
    }
  }
}

double RandomForest::predict_one(const Tree& tree, const Eigen::VectorXd& x) const {
  int node = 0;
  for (;;) {
    const Node& nd = tree.nodes[node];
    if (nd.feature < 0) return nd.p1;
    node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
}

Eigen::VectorXd RandomForest::predict_proba(const Eigen::MatrixXd& x) const {
  if (trees_.empty()) throw RunError("random forest: not fitted");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (long i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd row = x.row(i).transpose();
    double sum = 0.0;
    for (const auto& tree : trees_) sum += predict_one(tree, row);
    out[i] = sum / static_cast<double>(trees_.size());
  }
  return out;
}

}  // namespace crbm::train
