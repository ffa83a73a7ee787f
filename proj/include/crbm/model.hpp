#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "crbm/params.hpp"
#include "crbm/rng.hpp"

namespace crbm {

// The joint density is p(v, h) = exp(-U(v, h)) / Z with
//   U = sum_j a_j(v_j) + sum_mu b_mu(h_mu)
//       - sum_{j,mu} W_{j,mu} (v_j / sigma_j^2) (h_mu / eps_mu^2),
// where a_j is a linear field for bernoulli/one-hot units and a Gaussian
// quadratic (v - m)^2 / (2 sigma^2) otherwise, and b_mu is a Gaussian
// quadratic restricted to h >= 0 for ReLU hiddens (linear field for the
// bernoulli-hidden oracle). Tempering by beta multiplies U in every
// conditional: discrete logits scale by beta, continuous stds by 1/sqrt(beta).

enum class CondMode { sample, mean };

/// Per-chain clamp: entries with mask 1 are held at the given values through
/// every visible update.
struct ClampRef {
  const Eigen::MatrixXd* values = nullptr;
  const Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic>* mask = nullptr;
  bool active() const { return values != nullptr && mask != nullptr; }
};

/// Throws DataError when a state is inconsistent with the layout (shape,
/// one-hot normalization, bernoulli support, hidden support).
void validate_visible(const CrbmParams& p, const Eigen::VectorXd& v);
void validate_hidden(const CrbmParams& p, const Eigen::VectorXd& h);

double energy(const CrbmParams& p, const Eigen::VectorXd& v,
              const Eigen::VectorXd& h);

/// Hidden pre-activation psi = theta + W^T (v / sigma^2), one column per chain.
Eigen::MatrixXd hidden_pre(const CrbmParams& p, const Eigen::MatrixXd& v);

/// Analytic conditional moments of the hidden units given psi at beta = 1.
void hidden_moments(const CrbmParams& p, const Eigen::MatrixXd& psi,
                    Eigen::MatrixXd* mean, Eigen::MatrixXd* second_moment);

void sample_hidden(const CrbmParams& p, const Eigen::MatrixXd& psi,
                   const Eigen::VectorXd* beta, Rng& rng, Eigen::MatrixXd* h);

/// Visible coupling c = W (h / eps^2), one column per chain.
Eigen::MatrixXd visible_coupling(const CrbmParams& p, const Eigen::MatrixXd& h);

void sample_visible(const CrbmParams& p, const Eigen::MatrixXd& coupling,
                    const Eigen::VectorXd* beta, const ClampRef& clamp, Rng& rng,
                    Eigen::MatrixXd* v);

/// Mean-mode visible reconstruction (one-hot entries become probabilities).
void mean_visible(const CrbmParams& p, const Eigen::MatrixXd& coupling,
                  const ClampRef& clamp, Eigen::MatrixXd* v);

/// Single-state wrappers matching the conditional-distribution contracts.
Eigen::VectorXd cond_hidden(const CrbmParams& p, const Eigen::VectorXd& v,
                            CondMode mode, Rng& rng, double beta = 1.0);
Eigen::VectorXd cond_visible(const CrbmParams& p, const Eigen::VectorXd& h,
                             CondMode mode, Rng& rng, double beta = 1.0,
                             const ClampRef& clamp = {});

/// F(v) = -log integral dh exp(-U(v, h)), up to the constant log Z.
double free_energy(const CrbmParams& p, const Eigen::VectorXd& v);
Eigen::VectorXd free_energy_batch(const CrbmParams& p, const Eigen::MatrixXd& v);

/// Accumulate weighted sufficient statistics s = -dU/dtheta over chains:
/// acc += sum_m w_m E[s(v_m, h) | h ~ p(h | v_m)]. `psi` and `coupling` are
/// the already-computed linear terms for the same states.
void accumulate_stats(const CrbmParams& p, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& hidden_mean,
                      const Eigen::MatrixXd& hidden_second,
                      const Eigen::MatrixXd& psi, const Eigen::MatrixXd& coupling,
                      const Eigen::VectorXd& weights, ParamTensors* acc);

/// Per-unit unconditional mean implied by the bias parameters alone (used to
/// fill unobserved entries before conditioning).
Eigen::VectorXd bias_means(const CrbmParams& p);

}  // namespace crbm
