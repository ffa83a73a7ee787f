#include "crbm/adversary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "crbm/math_util.hpp"
#include "crbm/outcomes.hpp"
#include "crbm/parallel.hpp"
#include "crbm/rng.hpp"

namespace crbm::metrics {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void LogisticRegression::fit(const MatrixXd& x, const std::vector<int>& y,
                             double ridge_fallback) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (n == 0 || static_cast<int>(y.size()) != n) {
    throw RunError("logistic regression: bad inputs");
  }
  // Standardize features; constant columns get zero weight via zero scale.
  mean_ = x.colwise().mean();
  scale_.resize(d);
  for (int j = 0; j < d; ++j) {
    const double var = (x.col(j).array() - mean_[j]).square().sum() / n;
    scale_[j] = var > 1e-12 ? std::sqrt(var) : 0.0;
  }
  MatrixXd z(n, d + 1);
  for (int j = 0; j < d; ++j) {
    if (scale_[j] > 0.0) {
      z.col(j) = (x.col(j).array() - mean_[j]) / scale_[j];
    } else {
      z.col(j).setZero();
    }
  }
  z.col(d).setOnes();
  VectorXd target(n);
  for (int i = 0; i < n; ++i) target[i] = y[i];

  auto newton = [&](double ridge) -> std::pair<VectorXd, bool> {
    VectorXd w = VectorXd::Zero(d + 1);
    for (int iter = 0; iter < 100; ++iter) {
      const VectorXd eta = z * w;
      VectorXd p(n), s(n);
      for (int i = 0; i < n; ++i) {
        p[i] = math::logistic(eta[i]);
        s[i] = std::max(p[i] * (1.0 - p[i]), 1e-10);
      }
      MatrixXd hess = z.transpose() * s.asDiagonal() * z;
      hess.diagonal().array() += ridge + 1e-12;
      const VectorXd grad = z.transpose() * (target - p) - ridge * w;
      const VectorXd delta = hess.ldlt().solve(grad);
      w += delta;
      if (!w.allFinite() || w.cwiseAbs().maxCoeff() > 1e4) {
        return {w, false};  // diverged: separable without regularization
      }
      if (delta.cwiseAbs().maxCoeff() < 1e-8) break;
    }
    return {w, w.allFinite() && w.cwiseAbs().maxCoeff() <= 1e4};
  };

  auto [w, ok] = newton(0.0);
  if (!ok) {
    std::tie(w, ok) = newton(ridge_fallback);
    if (!ok) w.setZero();
  }
  coef_ = w;
}

VectorXd LogisticRegression::decision(const MatrixXd& x) const {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  MatrixXd z(n, d + 1);
  for (int j = 0; j < d; ++j) {
    if (scale_[j] > 0.0) {
      z.col(j) = (x.col(j).array() - mean_[j]) / scale_[j];
    } else {
      z.col(j).setZero();
    }
  }
  z.col(d).setOnes();
  return z * coef_;
}

namespace {

struct VisitFeatures {
  std::vector<int> subject_idx;
  MatrixXd data_rows;  // n_subjects x d feature rows (imputed)
  MatrixXd raw;        // imputed raw values: current visit [, previous visit]
  std::vector<std::vector<uint8_t>> imputed;  // raw entries that were imputed
};

/// Imputed data-side features at one visit (or visit difference).
std::optional<VisitFeatures> build_data_features(const sampling::TwinSet& twins,
                                                 const std::vector<int>& variables,
                                                 int month,
                                                 AdversaryFeatures features,
                                                 int min_subjects) {
  const int step = twins.schema.visit_interval_months;
  const int prev = month - step;
  std::vector<int> subjects;
  for (int i = 0; i < twins.n_subjects(); ++i) {
    if (twins.subjects[i].duration_months() >= month) subjects.push_back(i);
  }
  if (static_cast<int>(subjects.size()) < min_subjects) return std::nullopt;
  const int d = static_cast<int>(variables.size());
  const int n = static_cast<int>(subjects.size());

  // Raw values with missingness, one (possibly two) visit per subject.
  auto fetch = [&](int i, int m, int a, double* value) {
    const auto it = twins.subjects[i].visits.find(m);
    if (it == twins.subjects[i].visits.end() || !it->second.is_observed(variables[a])) {
      return false;
    }
    *value = it->second.values[variables[a]];
    return true;
  };

  const int n_cols = features == AdversaryFeatures::visit_differences ? 2 * d : d;
  MatrixXd raw(n, n_cols);
  std::vector<std::vector<uint8_t>> missing(n, std::vector<uint8_t>(n_cols, 0));
  for (int r = 0; r < n; ++r) {
    for (int a = 0; a < d; ++a) {
      double v = 0.0;
      if (fetch(subjects[r], month, a, &v)) {
        raw(r, a) = v;
      } else {
        raw(r, a) = 0.0;
        missing[r][a] = 1;
      }
      if (features == AdversaryFeatures::visit_differences) {
        if (prev >= 0 && fetch(subjects[r], prev, a, &v)) {
          raw(r, d + a) = v;
        } else {
          raw(r, d + a) = 0.0;
          missing[r][d + a] = 1;
        }
      }
    }
  }
  // Column means over observed entries, written into the missing cells.
  for (int c = 0; c < n_cols; ++c) {
    double sum = 0.0;
    int cnt = 0;
    for (int r = 0; r < n; ++r) {
      if (!missing[r][c]) {
        sum += raw(r, c);
        ++cnt;
      }
    }
    const double mean = cnt > 0 ? sum / cnt : 0.0;
    for (int r = 0; r < n; ++r) {
      if (missing[r][c]) raw(r, c) = mean;
    }
  }

  VisitFeatures out;
  out.subject_idx = std::move(subjects);
  out.imputed = std::move(missing);
  out.raw = raw;
  if (features == AdversaryFeatures::visit_differences) {
    out.data_rows.resize(n, d);
    for (int r = 0; r < n; ++r) {
      for (int a = 0; a < d; ++a) out.data_rows(r, a) = raw(r, a) - raw(r, d + a);
    }
  } else {
    out.data_rows = raw;
  }
  return out;
}

}  // namespace

AdversaryResult adversary_auc(const sampling::TwinSet& twins, int month,
                              AdversaryFeatures features,
                              const AdversaryConfig& config, uint64_t seed) {
  AdversaryResult result;
  result.month = month;
  result.features = features;
  const std::vector<int> variables = metric_variables(twins.schema);
  const int d = static_cast<int>(variables.size());
  const int step = twins.schema.visit_interval_months;

  const auto built =
      build_data_features(twins, variables, month, features, config.min_subjects);
  if (!built) {
    result.skipped = true;
    return result;
  }
  const auto& vf = *built;
  const int n = static_cast<int>(vf.subject_idx.size());
  result.n_subjects = n;
  result.n_sims = config.n_sims;

  const bool diffs = features == AdversaryFeatures::visit_differences;
  std::vector<double> sim_aucs(config.n_sims, 0.0);

  parallel_for(config.n_sims, config.n_threads, [&](int sim) {
    Rng rng(derive_seed(seed, 0xADA0ULL, month * 2 + (diffs ? 1 : 0), sim));
    // One fresh twin per subject per simulation.
    MatrixXd twin_rows(n, d);
    for (int r = 0; r < n; ++r) {
      const int i = vf.subject_idx[r];
      const auto& pool = twins.twins[i];
      const auto& twin = pool[sim % pool.size()];
      auto value_at = [&](int m, int a, double* v) {
        const auto it = twin.visits.find(m);
        if (it == twin.visits.end() || !it->second.is_observed(variables[a])) {
          return false;
        }
        *v = it->second.values[variables[a]];
        return true;
      };
      for (int a = 0; a < d; ++a) {
        // Twin cells matching imputed data cells get the identical value.
        double now = vf.raw(r, a);
        if (!vf.imputed[r][a]) value_at(month, a, &now);
        if (!diffs) {
          twin_rows(r, a) = now;
        } else {
          double before = vf.raw(r, d + a);
          if (!vf.imputed[r][d + a]) value_at(month - step, a, &before);
          twin_rows(r, a) = now - before;
        }
      }
    }

    MatrixXd x(2 * n, d);
    std::vector<int> y(2 * n);
    for (int r = 0; r < n; ++r) {
      x.row(r) = vf.data_rows.row(r).head(d);
      y[r] = 1;
      x.row(n + r) = twin_rows.row(r);
      y[n + r] = 0;
    }

    // Grouped folds: a subject's data row and twin row stay together.
    std::vector<int> fold(n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int r = 0; r < n; ++r) fold[perm[r]] = r % config.n_folds;

    double auc_sum = 0.0;
    int auc_count = 0;
    for (int f = 0; f < config.n_folds; ++f) {
      std::vector<int> train_rows, test_rows;
      for (int r = 0; r < n; ++r) {
        if (fold[r] == f) {
          test_rows.push_back(r);
          test_rows.push_back(n + r);
        } else {
          train_rows.push_back(r);
          train_rows.push_back(n + r);
        }
      }
      if (test_rows.empty() || train_rows.empty()) continue;
      MatrixXd xtr(train_rows.size(), d), xte(test_rows.size(), d);
      std::vector<int> ytr(train_rows.size()), yte(test_rows.size());
      for (size_t r = 0; r < train_rows.size(); ++r) {
        xtr.row(r) = x.row(train_rows[r]);
        ytr[r] = y[train_rows[r]];
      }
      for (size_t r = 0; r < test_rows.size(); ++r) {
        xte.row(r) = x.row(test_rows[r]);
        yte[r] = y[test_rows[r]];
      }
      LogisticRegression lr;
      lr.fit(xtr, ytr, config.ridge_fallback);
      const VectorXd scores = lr.decision(xte);
      const auto fold_auc =
          auc(std::vector<double>(scores.data(), scores.data() + scores.size()), yte);
      if (fold_auc) {
        auc_sum += *fold_auc;
        ++auc_count;
      }
    }
    sim_aucs[sim] = auc_count > 0 ? auc_sum / auc_count : 0.5;
  });

  double mean = 0.0;
  for (double a : sim_aucs) mean += a;
  mean /= config.n_sims;
  double var = 0.0;
  for (double a : sim_aucs) var += (a - mean) * (a - mean);
  result.mean_auc = mean;
  result.std_auc = std::sqrt(var / config.n_sims);
  return result;
}

std::vector<AdversaryResult> adversary_scan(const sampling::TwinSet& twins,
                                            const AdversaryConfig& config,
                                            uint64_t seed) {
  int longest = 0;
  for (const auto& s : twins.subjects) longest = std::max(longest, s.duration_months());
  std::vector<AdversaryResult> out;
  const int step = twins.schema.visit_interval_months;
  for (int month = step; month <= longest; month += step) {
    out.push_back(adversary_auc(twins, month, AdversaryFeatures::visit_values,
                                config, seed));
    out.push_back(adversary_auc(twins, month, AdversaryFeatures::visit_differences,
                                config, seed));
  }
  return out;
}

}  // namespace crbm::metrics
