#include "crbm/adam.hpp"

#include <cmath>

namespace crbm::train {

void AdamOptimizer::step(ParamTensors* params, const ParamTensors& grad,
                         double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(settings_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(settings_.beta2, static_cast<double>(t_));
  const double b1 = settings_.beta1;
  const double b2 = settings_.beta2;
  const double eps = settings_.epsilon;
  auto update = [&](Eigen::Ref<Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> gm,
                    Eigen::Ref<Eigen::VectorXd> gv,
                    Eigen::Ref<const Eigen::VectorXd> gg) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      gm[i] = b1 * gm[i] + (1.0 - b1) * gg[i];
      gv[i] = b2 * gv[i] + (1.0 - b2) * gg[i] * gg[i];
      const double mhat = gm[i] / c1;
      const double vhat = gv[i] / c2;
      x[i] -= learning_rate * mhat / (std::sqrt(vhat) + eps);
    }
  };
  auto flat = [](Eigen::MatrixXd& m) {
    return Eigen::Map<Eigen::VectorXd>(m.data(), m.size());
  };
  auto cflat = [](const Eigen::MatrixXd& m) {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
  };
  update(flat(params->weights), flat(m_.weights), flat(v_.weights),
         cflat(grad.weights));
  update(params->vis_field, m_.vis_field, v_.vis_field, grad.vis_field);
  update(params->vis_log_sigma, m_.vis_log_sigma, v_.vis_log_sigma,
         grad.vis_log_sigma);
  update(params->hid_theta, m_.hid_theta, v_.hid_theta, grad.hid_theta);
  update(params->hid_log_eps, m_.hid_log_eps, v_.hid_log_eps, grad.hid_log_eps);
}

}  // namespace crbm::train
