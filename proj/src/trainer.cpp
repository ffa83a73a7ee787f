#include "crbm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crbm/adam.hpp"

namespace crbm::train {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void Hyperparams::validate() const {
  if (n_hidden <= 0 || n_epochs <= 0 || batch_size <= 0) {
    throw ConfigError("hyperparams: sizes must be positive");
  }
  if (learning_rate <= 0.0) throw ConfigError("hyperparams: learning rate <= 0");
  if (sigma_beta < 0.0) throw ConfigError("hyperparams: sigma_beta < 0");
  if (l2_penalty < 0.0) throw ConfigError("hyperparams: l2 penalty < 0");
  if (adversary_weight < 0.0 || adversary_weight > 1.0) {
    throw ConfigError("hyperparams: adversary weight outside [0,1]");
  }
  if (mc_steps <= 0) throw ConfigError("hyperparams: mc_steps must be positive");
  if (optimizer != "adam") throw ConfigError("hyperparams: unknown optimizer");
}

void triplets_to_matrices(const std::vector<cohort::Triplet>& triplets,
                          MatrixXd* values, MatrixXd* mask) {
  if (triplets.empty()) throw RunError("no triplets");
  const int n = static_cast<int>(triplets[0].visible.size());
  values->resize(n, triplets.size());
  mask->resize(n, triplets.size());
  for (size_t i = 0; i < triplets.size(); ++i) {
    values->col(i) = triplets[i].visible;
    mask->col(i) = triplets[i].mask;
  }
}

PhaseStats positive_phase(const CrbmParams& params, const MatrixXd& batch_v,
                          const MatrixXd& batch_mask, int fill_sweeps, Rng& rng) {
  const int m = static_cast<int>(batch_v.cols());
  // Fill unobserved entries with bias means, then refresh them by Gibbs
  // sweeps with the observed coordinates clamped.
  const VectorXd fill = bias_means(params);
  MatrixXd v = batch_v;
  bool any_missing = false;
  for (int c = 0; c < m; ++c) {
    for (int j = 0; j < v.rows(); ++j) {
      if (batch_mask(j, c) == 0.0) {
        v(j, c) = fill[j];
        any_missing = true;
      }
    }
  }
  if (any_missing && fill_sweeps > 0) {
    Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic> cmask(v.rows(), m);
    for (int c = 0; c < m; ++c) {
      for (int j = 0; j < v.rows(); ++j) {
        cmask(j, c) = batch_mask(j, c) != 0.0 ? 1 : 0;
      }
    }
    ClampRef clamp{&batch_v, &cmask};
    MatrixXd h;
    for (int s = 0; s < fill_sweeps; ++s) {
      const MatrixXd psi = hidden_pre(params, v);
      sample_hidden(params, psi, nullptr, rng, &h);
      const MatrixXd coupling = visible_coupling(params, h);
      sample_visible(params, coupling, nullptr, clamp, rng, &v);
    }
  }

  PhaseStats out;
  out.moments.resize(params.n_visible(), params.n_hidden);
  const MatrixXd psi = hidden_pre(params, v);
  MatrixXd hmean, h2;
  hidden_moments(params, psi, &hmean, &h2);
  const MatrixXd coupling = visible_coupling(params, hmean);
  const VectorXd w = VectorXd::Constant(m, 1.0 / m);
  accumulate_stats(params, v, hmean, h2, psi, coupling, w, &out.moments);
  out.hidden_means = hmean;
  return out;
}

PhaseStats negative_phase(const CrbmParams& params, sampling::ChainSet& chains,
                          int mc_steps) {
  chains.run(params, mc_steps);
  const MatrixXd& v = chains.visible();
  const int m = chains.n_chains();
  PhaseStats out;
  out.moments.resize(params.n_visible(), params.n_hidden);
  const MatrixXd psi = hidden_pre(params, v);
  MatrixXd hmean, h2;
  hidden_moments(params, psi, &hmean, &h2);
  const MatrixXd coupling = visible_coupling(params, hmean);
  const VectorXd w = VectorXd::Constant(m, 1.0 / m);
  accumulate_stats(params, v, hmean, h2, psi, coupling, w, &out.moments);
  out.hidden_means = hmean;
  return out;
}

RandomForest critic_fit(const MatrixXd& data_hidden_means,
                        const MatrixXd& model_hidden_means, int n_trees,
                        int max_depth, uint64_t seed) {
  const int nd = static_cast<int>(data_hidden_means.cols());
  const int nm = static_cast<int>(model_hidden_means.cols());
  if (nd == 0 || nm == 0) throw RunError("critic_fit: empty inputs");
  MatrixXd x(nd + nm, data_hidden_means.rows());
  std::vector<int> y(nd + nm);
  for (int i = 0; i < nd; ++i) {
    x.row(i) = data_hidden_means.col(i).transpose();
    y[i] = 1;
  }
  for (int i = 0; i < nm; ++i) {
    x.row(nd + i) = model_hidden_means.col(i).transpose();
    y[nd + i] = 0;
  }
  RandomForest rf;
  rf.fit(x, y, {n_trees, max_depth, 4}, seed);
  return rf;
}

ParamTensors adversarial_gradient(const CrbmParams& params, const MatrixXd& chain_v,
                                  const MatrixXd& chain_hidden_means,
                                  const RandomForest& critic) {
  const int m = static_cast<int>(chain_v.cols());
  MatrixXd features(m, chain_hidden_means.rows());
  for (int c = 0; c < m; ++c) features.row(c) = chain_hidden_means.col(c).transpose();
  const VectorXd q = critic.predict_proba(features);
  const VectorXd t = 2.0 * q.array() - 1.0;
  const double t_mean = t.mean();

  const MatrixXd psi = hidden_pre(params, chain_v);
  MatrixXd hmean, h2;
  hidden_moments(params, psi, &hmean, &h2);
  const MatrixXd coupling = visible_coupling(params, hmean);

  ParamTensors weighted, plain;
  weighted.resize(params.n_visible(), params.n_hidden);
  plain.resize(params.n_visible(), params.n_hidden);
  accumulate_stats(params, chain_v, hmean, h2, psi, coupling,
                   t / static_cast<double>(m), &weighted);
  accumulate_stats(params, chain_v, hmean, h2, psi, coupling,
                   VectorXd::Constant(m, 1.0 / m), &plain);
  // grad A = -( E[T s] - E[T] E[s] )
  weighted.add_scaled(plain, -t_mean);
  ParamTensors out = std::move(weighted);
  out.weights *= -1.0;
  out.vis_field *= -1.0;
  out.vis_log_sigma *= -1.0;
  out.hid_theta *= -1.0;
  out.hid_log_eps *= -1.0;
  return out;
}

namespace {

/// One-step mean reconstruction error over observed coordinates.
double reconstruction_rmse(const CrbmParams& params, const MatrixXd& v,
                           const MatrixXd& mask) {
  const MatrixXd psi = hidden_pre(params, v);
  MatrixXd hmean;
  hidden_moments(params, psi, &hmean, nullptr);
  const MatrixXd coupling = visible_coupling(params, hmean);
  MatrixXd recon;
  mean_visible(params, coupling, {}, &recon);
  double se = 0.0;
  double n = 0.0;
  for (int c = 0; c < v.cols(); ++c) {
    for (int j = 0; j < v.rows(); ++j) {
      if (mask(j, c) != 0.0) {
        const double d = recon(j, c) - v(j, c);
        se += d * d;
        n += 1.0;
      }
    }
  }
  return n > 0 ? std::sqrt(se / n) : 0.0;
}

/// Mean free energy over bias-filled probe vectors.
double probe_free_energy(const CrbmParams& params, const MatrixXd& v,
                         const MatrixXd& mask) {
  const VectorXd fill = bias_means(params);
  MatrixXd filled = v;
  for (int c = 0; c < filled.cols(); ++c) {
    for (int j = 0; j < filled.rows(); ++j) {
      if (mask(j, c) == 0.0) filled(j, c) = fill[j];
    }
  }
  return free_energy_batch(params, filled).mean();
}

void init_fields_from_data(CrbmParams* params, const MatrixXd& v,
                           const MatrixXd& mask) {
  const int n = params->n_visible();
  for (int j = 0; j < n; ++j) {
    double sum = 0.0, sum2 = 0.0, cnt = 0.0;
    for (int c = 0; c < v.cols(); ++c) {
      if (mask(j, c) != 0.0) {
        sum += v(j, c);
        sum2 += v(j, c) * v(j, c);
        cnt += 1.0;
      }
    }
    const double mean = cnt > 0 ? sum / cnt : 0.0;
    switch (params->layout.unit(j).kind) {
      case UnitKind::bernoulli: {
        const double p = std::clamp(mean, 1e-3, 1.0 - 1e-3);
        params->t.vis_field[j] = std::log(p / (1.0 - p));
        break;
      }
      case UnitKind::onehot:
        params->t.vis_field[j] = std::log(std::max(mean, 1e-3));
        break;
      case UnitKind::gaussian:
        params->t.vis_field[j] = mean;
        break;
      default:
        break;
    }
    (void)sum2;
  }
}

}  // namespace

TrainResult train(const std::vector<cohort::Triplet>& triplets,
                  const BlockLayout& layout, const Hyperparams& hp, uint64_t seed,
                  const std::vector<cohort::Triplet>* heldout,
                  UnitKind hidden_kind) {
  hp.validate();
  if (triplets.empty()) throw RunError("train: no triplets");

  TrainResult result;
  MatrixXd data_v, data_mask;
  triplets_to_matrices(triplets, &data_v, &data_mask);

  CrbmParams params = init_params(layout, hp.n_hidden, hidden_kind,
                                  derive_seed(seed, 1));
  init_fields_from_data(&params, data_v, data_mask);
  params.refresh_scales();

  const int n_samples = static_cast<int>(triplets.size());
  const int n_chains = hp.n_chains > 0 ? hp.n_chains : hp.batch_size;
  sampling::BetaProcess proc(hp.sigma_beta, hp.driven_autocorr);
  sampling::ChainSet chains(params, n_chains, proc, derive_seed(seed, 2));

  AdamOptimizer opt(params.n_visible(), hp.n_hidden);
  Rng rng(derive_seed(seed, 3));
  RandomForest critic;
  const double gamma = 1.0 - hp.adversary_weight;

  // Fixed probes for the per-epoch objective proxies.
  const int probe_n = std::min(n_samples, 512);
  const MatrixXd probe_v = data_v.leftCols(probe_n);
  const MatrixXd probe_mask = data_mask.leftCols(probe_n);
  MatrixXd held_v, held_mask;
  if (heldout != nullptr && !heldout->empty()) {
    triplets_to_matrices(*heldout, &held_v, &held_mask);
    const int hn = std::min<int>(static_cast<int>(held_v.cols()), 512);
    held_v = held_v.leftCols(hn).eval();
    held_mask = held_mask.leftCols(hn).eval();
  }

  std::vector<int> order(n_samples);
  std::iota(order.begin(), order.end(), 0);
  const long total_updates =
      static_cast<long>(hp.n_epochs) *
      std::max(1L, static_cast<long>((n_samples + hp.batch_size - 1) / hp.batch_size));
  long update = 0;

  for (int epoch = 0; epoch < hp.n_epochs; ++epoch) {
    rng.shuffle(order);
    double grad_norm_acc = 0.0;
    double beta_acc = 0.0;
    long n_batches = 0;
    for (int start = 0; start < n_samples; start += hp.batch_size) {
      const int m = std::min(hp.batch_size, n_samples - start);
      MatrixXd bv(params.n_visible(), m), bm(params.n_visible(), m);
      for (int i = 0; i < m; ++i) {
        bv.col(i) = data_v.col(order[start + i]);
        bm.col(i) = data_mask.col(order[start + i]);
      }

      PhaseStats pos = positive_phase(params, bv, bm, hp.positive_fill_sweeps, rng);
      PhaseStats neg = negative_phase(params, chains, hp.mc_steps);

      ParamTensors grad;
      grad.resize(params.n_visible(), hp.n_hidden);
      grad.add_scaled(pos.moments, -gamma);
      grad.add_scaled(neg.moments, gamma);
      if (hp.adversary_weight > 0.0 && critic.fitted()) {
        const ParamTensors adv = adversarial_gradient(
            params, chains.visible(), neg.hidden_means, critic);
        grad.add_scaled(adv, hp.adversary_weight);
      }
      grad.weights += hp.l2_penalty * params.t.weights;
      params.apply_pins(grad);

      const double progress =
          total_updates > 1 ? static_cast<double>(update) / (total_updates - 1) : 0.0;
      const double lr =
          hp.learning_rate * (1.0 - (1.0 - hp.lr_decay_to) * progress);
      opt.step(&params.t, grad, lr);
      params.refresh_scales();
      ++update;

      grad_norm_acc += std::sqrt(grad.squared_norm());
      beta_acc += chains.beta().mean();
      ++n_batches;

      if (!params.t.all_finite()) {
        result.failure = "training diverged (non-finite parameters) at epoch " +
                         std::to_string(epoch);
        result.params = params;
        return result;
      }

      if (hp.adversary_weight > 0.0) {
        critic = critic_fit(pos.hidden_means, neg.hidden_means, hp.critic_trees,
                            hp.critic_depth, derive_seed(seed, 4, update));
      }
    }

    EpochLog log;
    log.epoch = epoch;
    log.reconstruction_rmse = reconstruction_rmse(params, probe_v, probe_mask);
    log.free_energy_train = probe_free_energy(params, probe_v, probe_mask);
    if (held_v.cols() > 0) {
      log.free_energy_heldout = probe_free_energy(params, held_v, held_mask);
      log.free_energy_gap = log.free_energy_train - log.free_energy_heldout;
    }
    log.grad_norm = n_batches > 0 ? grad_norm_acc / n_batches : 0.0;
    log.beta_mean = n_batches > 0 ? beta_acc / n_batches : 1.0;
    log.learning_rate =
        hp.learning_rate *
        (1.0 - (1.0 - hp.lr_decay_to) *
                   (total_updates > 1
                        ? static_cast<double>(std::min(update, total_updates - 1)) /
                              (total_updates - 1)
                        : 0.0));
    result.log.push_back(log);
  }

  result.params = params;
  result.ok = true;
  return result;
}

}  // namespace crbm::train
