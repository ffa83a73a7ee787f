#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "crbm/layout.hpp"

namespace crbm {

/// The learnable tensors of a CRBM, also reused for gradients and optimizer
/// moments. Scales are parameterized through logs so they stay positive.
struct ParamTensors {
  Eigen::MatrixXd weights;        // n_visible x n_hidden
  Eigen::VectorXd vis_field;      // bernoulli/onehot field, gaussian location
  Eigen::VectorXd vis_log_sigma;  // gaussian units; pinned at 0 for discrete
  Eigen::VectorXd hid_theta;      // relu location / bernoulli field
  Eigen::VectorXd hid_log_eps;    // relu scale; pinned at 0 for bernoulli

  void resize(int n_visible, int n_hidden);
  void set_zero();
  bool all_finite() const;
  double squared_norm() const;

  void add_scaled(const ParamTensors& g, double scale);
};

/// Full model: layout, hidden-layer kind and parameters, plus cached inverse
/// square scales (refreshed with refresh_scales() after every update).
struct CrbmParams {
  BlockLayout layout;
  UnitKind hidden_kind = UnitKind::relu_hidden;
  int n_hidden = 0;
  ParamTensors t;

  // Derived caches.
  Eigen::VectorXd inv_sigma2;  // n_visible
  Eigen::VectorXd sigma;       // n_visible
  Eigen::VectorXd inv_eps2;    // n_hidden
  Eigen::VectorXd eps;         // n_hidden

  int n_visible() const { return layout.n_visible(); }
  void refresh_scales();
  /// Zero gradient entries for pinned parameters (discrete sigma, bernoulli eps).
  void apply_pins(ParamTensors& grad) const;
  bool unit_is_gaussian(int j) const {
    return layout.unit(j).kind == UnitKind::gaussian;
  }
};

CrbmParams init_params(const BlockLayout& layout, int n_hidden, UnitKind hidden_kind,
                       uint64_t seed, double weight_scale = 0.01);

}  // namespace crbm
