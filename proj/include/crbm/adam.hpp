#pragma once

#include "crbm/params.hpp"

namespace crbm::train {

/// ADAM with bias correction over the model's parameter tensors.
class AdamOptimizer {
 public:
  struct Settings {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
  };

  AdamOptimizer(int n_visible, int n_hidden) : AdamOptimizer(n_visible, n_hidden, Settings{}) {}
  AdamOptimizer(int n_visible, int n_hidden, Settings settings)
      : settings_(settings) {
    m_.resize(n_visible, n_hidden);
    v_.resize(n_visible, n_hidden);
  }

  /// One descent step against the gradient of the loss.
  void step(ParamTensors* params, const ParamTensors& grad, double learning_rate);

  long step_count() const { return t_; }

 private:
  Settings settings_;
  ParamTensors m_, v_;
  long t_ = 0;
};

}  // namespace crbm::train
