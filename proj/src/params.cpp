#include "crbm/params.hpp"

#include "crbm/rng.hpp"

namespace crbm {

void ParamTensors::resize(int n_visible, int n_hidden) {
  weights.setZero(n_visible, n_hidden);
  vis_field.setZero(n_visible);
  vis_log_sigma.setZero(n_visible);
  hid_theta.setZero(n_hidden);
  hid_log_eps.setZero(n_hidden);
}

void ParamTensors::set_zero() {
  weights.setZero();
  vis_field.setZero();
  vis_log_sigma.setZero();
  hid_theta.setZero();
  hid_log_eps.setZero();
}

bool ParamTensors::all_finite() const {
  return weights.allFinite() && vis_field.allFinite() &&
         vis_log_sigma.allFinite() && hid_theta.allFinite() &&
         hid_log_eps.allFinite();
}

double ParamTensors::squared_norm() const {
  return weights.squaredNorm() + vis_field.squaredNorm() +
         vis_log_sigma.squaredNorm() + hid_theta.squaredNorm() +
         hid_log_eps.squaredNorm();
}

void ParamTensors::add_scaled(const ParamTensors& g, double scale) {
  weights += scale * g.weights;
  vis_field += scale * g.vis_field;
  vis_log_sigma += scale * g.vis_log_sigma;
  hid_theta += scale * g.hid_theta;
  hid_log_eps += scale * g.hid_log_eps;
}

void CrbmParams::refresh_scales() {
  sigma = t.vis_log_sigma.array().exp();
  inv_sigma2 = (-2.0 * t.vis_log_sigma.array()).exp();
  eps = t.hid_log_eps.array().exp();
  inv_eps2 = (-2.0 * t.hid_log_eps.array()).exp();
}

void CrbmParams::apply_pins(ParamTensors& grad) const {
  for (int j = 0; j < n_visible(); ++j) {
    if (!unit_is_gaussian(j)) grad.vis_log_sigma[j] = 0.0;
  }
  if (hidden_kind == UnitKind::bernoulli) grad.hid_log_eps.setZero();
}

CrbmParams init_params(const BlockLayout& layout, int n_hidden, UnitKind hidden_kind,
                       uint64_t seed, double weight_scale) {
  if (hidden_kind != UnitKind::relu_hidden && hidden_kind != UnitKind::bernoulli) {
    throw ConfigError("hidden units must be relu_hidden or bernoulli");
  }
  CrbmParams p;
  p.layout = layout;
  p.hidden_kind = hidden_kind;
  p.n_hidden = n_hidden;
  p.t.resize(layout.n_visible(), n_hidden);
  Rng rng(derive_seed(seed, 0x1217ULL));
  for (int j = 0; j < layout.n_visible(); ++j) {
    for (int m = 0; m < n_hidden; ++m) {
      p.t.weights(j, m) = weight_scale * rng.normal();
    }
  }
  p.refresh_scales();
  return p;
}

}  // namespace crbm
