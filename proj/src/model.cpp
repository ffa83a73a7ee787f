#include "crbm/model.hpp"

#include <cmath>

#include "crbm/math_util.hpp"

namespace crbm {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
}

void validate_visible(const CrbmParams& p, const Eigen::VectorXd& v) {
  if (v.size() != p.n_visible()) {
    throw DataError("visible state size mismatch");
  }
  for (int j = 0; j < p.n_visible(); ++j) {
    if (p.layout.unit(j).kind == UnitKind::bernoulli &&
        !(v[j] == 0.0 || v[j] == 1.0)) {
      throw DataError("bernoulli visible entry not in {0,1}");
    }
  }
  for (const auto& [start, len] : p.layout.onehot_groups()) {
    double sum = 0.0;
    for (int j = 0; j < len; ++j) {
      const double x = v[start + j];
      if (x != 0.0 && x != 1.0) throw DataError("one-hot entry not in {0,1}");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DataError("one-hot group must sum to 1");
  }
}

void validate_hidden(const CrbmParams& p, const Eigen::VectorXd& h) {
  if (h.size() != p.n_hidden) throw DataError("hidden state size mismatch");
  for (int m = 0; m < p.n_hidden; ++m) {
    if (p.hidden_kind == UnitKind::relu_hidden && h[m] < 0.0) {
      throw DataError("relu hidden entry must be >= 0");
    }
    if (p.hidden_kind == UnitKind::bernoulli && !(h[m] == 0.0 || h[m] == 1.0)) {
      throw DataError("bernoulli hidden entry not in {0,1}");
    }
  }
}

double energy(const CrbmParams& p, const Eigen::VectorXd& v,
              const Eigen::VectorXd& h) {
  validate_visible(p, v);
  validate_hidden(p, h);
  double u = 0.0;
  for (int j = 0; j < p.n_visible(); ++j) {
    if (p.unit_is_gaussian(j)) {
      const double d = v[j] - p.t.vis_field[j];
      u += 0.5 * d * d * p.inv_sigma2[j];
    } else {
      u -= p.t.vis_field[j] * v[j];
    }
  }
  for (int m = 0; m < p.n_hidden; ++m) {
    if (p.hidden_kind == UnitKind::relu_hidden) {
      const double d = h[m] - p.t.hid_theta[m];
      u += 0.5 * d * d * p.inv_eps2[m];
    } else {
      u -= p.t.hid_theta[m] * h[m];
    }
  }
  const Eigen::VectorXd vs = v.cwiseProduct(p.inv_sigma2);
  const Eigen::VectorXd he = h.cwiseProduct(p.inv_eps2);
  u -= vs.dot(p.t.weights * he);
  return u;
}

Eigen::MatrixXd hidden_pre(const CrbmParams& p, const Eigen::MatrixXd& v) {
  if (v.rows() != p.n_visible()) throw DataError("hidden_pre: bad visible shape");
  Eigen::MatrixXd psi =
      p.t.weights.transpose() * (p.inv_sigma2.asDiagonal() * v);
  psi.colwise() += p.t.hid_theta;
  return psi;
}

void hidden_moments(const CrbmParams& p, const Eigen::MatrixXd& psi,
                    Eigen::MatrixXd* mean, Eigen::MatrixXd* second_moment) {
  const int n = static_cast<int>(psi.rows());
  const int m = static_cast<int>(psi.cols());
  mean->resize(n, m);
  if (second_moment != nullptr) second_moment->resize(n, m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < n; ++r) {
      if (p.hidden_kind == UnitKind::bernoulli) {
        const double q = math::logistic(psi(r, c));
        (*mean)(r, c) = q;
        if (second_moment != nullptr) (*second_moment)(r, c) = q;
      } else {
        const double e = p.eps[r];
        (*mean)(r, c) = math::truncnorm_mean(psi(r, c), e);
        if (second_moment != nullptr) {
          (*second_moment)(r, c) = math::truncnorm_second_moment(psi(r, c), e);
        }
      }
    }
  }
}

void sample_hidden(const CrbmParams& p, const Eigen::MatrixXd& psi,
                   const Eigen::VectorXd* beta, Rng& rng, Eigen::MatrixXd* h) {
  const int n = static_cast<int>(psi.rows());
  const int m = static_cast<int>(psi.cols());
  h->resize(n, m);
  for (int c = 0; c < m; ++c) {
    const double b = beta != nullptr ? (*beta)[c] : 1.0;
    const double sqrt_b = std::sqrt(b);
    for (int r = 0; r < n; ++r) {
      if (p.hidden_kind == UnitKind::bernoulli) {
        (*h)(r, c) = rng.bernoulli(math::logistic(b * psi(r, c))) ? 1.0 : 0.0;
      } else {
        (*h)(r, c) = rng.truncnorm_positive(psi(r, c), p.eps[r] / sqrt_b);
      }
    }
  }
}

Eigen::MatrixXd visible_coupling(const CrbmParams& p, const Eigen::MatrixXd& h) {
  if (h.rows() != p.n_hidden) throw DataError("visible_coupling: bad hidden shape");
  return p.t.weights * (p.inv_eps2.asDiagonal() * h);
}

namespace {

template <bool kSample>
void visible_update(const CrbmParams& p, const Eigen::MatrixXd& coupling,
                    const Eigen::VectorXd* beta, const ClampRef& clamp, Rng* rng,
                    Eigen::MatrixXd* v) {
  const int n = p.n_visible();
  const int m = static_cast<int>(coupling.cols());
  v->resize(n, m);
  const auto& groups = p.layout.onehot_groups();
  for (int c = 0; c < m; ++c) {
    const double b = beta != nullptr ? (*beta)[c] : 1.0;
    const double inv_sqrt_b = 1.0 / std::sqrt(b);
    // Non-one-hot units first.
    for (int j = 0; j < n; ++j) {
      const UnitKind kind = p.layout.unit(j).kind;
      if (kind == UnitKind::onehot) continue;
      if (kind == UnitKind::bernoulli) {
        const double q = math::logistic(b * (p.t.vis_field[j] + coupling(j, c)));
        (*v)(j, c) = kSample ? (rng->bernoulli(q) ? 1.0 : 0.0) : q;
      } else {
        const double mean = p.t.vis_field[j] + coupling(j, c);
        (*v)(j, c) =
            kSample ? rng->normal(mean, p.sigma[j] * inv_sqrt_b) : mean;
      }
    }
    for (const auto& [start, len] : groups) {
      double maxlogit = -1e300;
      double logits[64];
      double* lp = len <= 64 ? logits : nullptr;
      std::vector<double> big;
      if (lp == nullptr) {
        big.resize(len);
        lp = big.data();
      }
      for (int j = 0; j < len; ++j) {
        lp[j] = b * (p.t.vis_field[start + j] + coupling(start + j, c));
        maxlogit = std::max(maxlogit, lp[j]);
      }
      double total = 0.0;
      for (int j = 0; j < len; ++j) {
        lp[j] = std::exp(lp[j] - maxlogit);
        total += lp[j];
      }
      if constexpr (kSample) {
        const int pick = rng->categorical(lp, len);
        for (int j = 0; j < len; ++j) (*v)(start + j, c) = (j == pick) ? 1.0 : 0.0;
      } else {
        for (int j = 0; j < len; ++j) (*v)(start + j, c) = lp[j] / total;
      }
    }
  }
  if (clamp.active()) {
    for (int c = 0; c < m; ++c) {
      for (int j = 0; j < n; ++j) {
        if ((*clamp.mask)(j, c) != 0) (*v)(j, c) = (*clamp.values)(j, c);
      }
    }
  }
}

}  // namespace

void sample_visible(const CrbmParams& p, const Eigen::MatrixXd& coupling,
                    const Eigen::VectorXd* beta, const ClampRef& clamp, Rng& rng,
                    Eigen::MatrixXd* v) {
  visible_update<true>(p, coupling, beta, clamp, &rng, v);
}

void mean_visible(const CrbmParams& p, const Eigen::MatrixXd& coupling,
                  const ClampRef& clamp, Eigen::MatrixXd* v) {
  visible_update<false>(p, coupling, nullptr, clamp, nullptr, v);
}

Eigen::VectorXd cond_hidden(const CrbmParams& p, const Eigen::VectorXd& v,
                            CondMode mode, Rng& rng, double beta) {
  const Eigen::MatrixXd psi = hidden_pre(p, v);
  if (mode == CondMode::mean) {
    Eigen::MatrixXd mean;
    hidden_moments(p, psi, &mean, nullptr);
    return mean.col(0);
  }
  Eigen::VectorXd b(1);
  b << beta;
  Eigen::MatrixXd h;
  sample_hidden(p, psi, &b, rng, &h);
  return h.col(0);
}

Eigen::VectorXd cond_visible(const CrbmParams& p, const Eigen::VectorXd& h,
                             CondMode mode, Rng& rng, double beta,
                             const ClampRef& clamp) {
  const Eigen::MatrixXd coupling = visible_coupling(p, h);
  Eigen::MatrixXd v;
  if (mode == CondMode::mean) {
    mean_visible(p, coupling, clamp, &v);
  } else {
    Eigen::VectorXd b(1);
    b << beta;
    sample_visible(p, coupling, &b, clamp, rng, &v);
  }
  return v.col(0);
}

Eigen::VectorXd free_energy_batch(const CrbmParams& p, const Eigen::MatrixXd& v) {
  const int m = static_cast<int>(v.cols());
  Eigen::MatrixXd psi = hidden_pre(p, v);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (int c = 0; c < m; ++c) {
    double f = 0.0;
    for (int j = 0; j < p.n_visible(); ++j) {
      if (p.unit_is_gaussian(j)) {
        const double d = v(j, c) - p.t.vis_field[j];
        f += 0.5 * d * d * p.inv_sigma2[j];
      } else {
        f -= p.t.vis_field[j] * v(j, c);
      }
    }
    for (int r = 0; r < p.n_hidden; ++r) {
      const double psi_rc = psi(r, c);
      if (p.hidden_kind == UnitKind::bernoulli) {
        f -= math::log1pexp(psi_rc);
      } else {
        // -log integral_0^inf exp(-(h - psi)^2 / (2 eps^2)) dh
        //   - (psi^2 - theta^2) / (2 eps^2)
        const double theta = p.t.hid_theta[r];
        const double e = p.eps[r];
        f -= 0.5 * (psi_rc * psi_rc - theta * theta) * p.inv_eps2[r];
        f -= std::log(e) + kLogSqrt2Pi + math::norm_logcdf(psi_rc / e);
      }
    }
    out[c] = f;
  }
  return out;
}

double free_energy(const CrbmParams& p, const Eigen::VectorXd& v) {
  validate_visible(p, v);
  return free_energy_batch(p, v)[0];
}

void accumulate_stats(const CrbmParams& p, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& hidden_mean,
                      const Eigen::MatrixXd& hidden_second,
                      const Eigen::MatrixXd& psi, const Eigen::MatrixXd& coupling,
                      const Eigen::VectorXd& weights, ParamTensors* acc) {
  const int n_vis = p.n_visible();
  const int n_hid = p.n_hidden;
  const Eigen::MatrixXd vs = p.inv_sigma2.asDiagonal() * v;        // v / sigma^2
  const Eigen::MatrixXd he = p.inv_eps2.asDiagonal() * hidden_mean;  // E h / eps^2
  acc->weights.noalias() += vs * weights.asDiagonal() * he.transpose();

  for (int j = 0; j < n_vis; ++j) {
    double sf = 0.0, sl = 0.0;
    const bool gaussian = p.unit_is_gaussian(j);
    for (int c = 0; c < v.cols(); ++c) {
      const double w = weights[c];
      if (gaussian) {
        const double d = v(j, c) - p.t.vis_field[j];
        sf += w * d * p.inv_sigma2[j];
        sl += w * (d * d * p.inv_sigma2[j] -
                   2.0 * v(j, c) * p.inv_sigma2[j] * coupling(j, c));
      } else {
        sf += w * v(j, c);
      }
    }
    acc->vis_field[j] += sf;
    if (gaussian) acc->vis_log_sigma[j] += sl;
  }

  for (int r = 0; r < n_hid; ++r) {
    double st = 0.0, se = 0.0;
    for (int c = 0; c < hidden_mean.cols(); ++c) {
      const double w = weights[c];
      if (p.hidden_kind == UnitKind::bernoulli) {
        st += w * hidden_mean(r, c);
      } else {
        const double theta = p.t.hid_theta[r];
        const double eh = hidden_mean(r, c);
        const double eh2 = hidden_second(r, c);
        st += w * (eh - theta) * p.inv_eps2[r];
        // E[(h - theta)^2] = E[h^2] - 2 theta E[h] + theta^2; the coupling
        // part of -dU/d(log eps) is -2 (E h / eps^2) * (psi - theta).
        const double s_lin = psi(r, c) - theta;
        se += w * ((eh2 - 2.0 * theta * eh + theta * theta) * p.inv_eps2[r] -
                   2.0 * eh * p.inv_eps2[r] * s_lin);
      }
    }
    acc->hid_theta[r] += st;
    if (p.hidden_kind == UnitKind::relu_hidden) acc->hid_log_eps[r] += se;
  }
}

Eigen::VectorXd bias_means(const CrbmParams& p) {
  Eigen::VectorXd out(p.n_visible());
  for (int j = 0; j < p.n_visible(); ++j) {
    switch (p.layout.unit(j).kind) {
      case UnitKind::bernoulli:
        out[j] = math::logistic(p.t.vis_field[j]);
        break;
      case UnitKind::gaussian:
        out[j] = p.t.vis_field[j];
        break;
      default:
        out[j] = 0.0;  // filled per group below
    }
  }
  for (const auto& [start, len] : p.layout.onehot_groups()) {
    double maxf = -1e300;
    for (int j = 0; j < len; ++j) maxf = std::max(maxf, p.t.vis_field[start + j]);
    double total = 0.0;
    for (int j = 0; j < len; ++j) {
      out[start + j] = std::exp(p.t.vis_field[start + j] - maxf);
      total += out[start + j];
    }
    for (int j = 0; j < len; ++j) out[start + j] /= total;
  }
  return out;
}

}  // namespace crbm
