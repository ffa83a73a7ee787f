#include "crbm/generate.hpp"

#include <mutex>

#include "crbm/parallel.hpp"

namespace crbm::sampling {

using cohort::CohortSchema;
using cohort::MaskedRow;
using cohort::Normalizers;
using cohort::SubjectRecord;

namespace {

using MaskMatrix = Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Force the baseline-indicator unit of every time block in a clamp: its
/// value is known a priori for any window position.
void clamp_indicator(const CrbmParams& params, const CohortSchema& schema,
                     int window_base_month, Eigen::MatrixXd* values,
                     MaskMatrix* mask) {
  const int indicator = schema.baseline_indicator_index();
  if (indicator < 0) return;
  const BlockLayout& layout = params.layout;
  const int off = layout.time_unit_offset(indicator);
  for (int j = 0; j <= layout.lag(); ++j) {
    const int month = window_base_month + j * schema.visit_interval_months;
    const int at = layout.time_block_start(j) + off;
    values->row(at).setConstant(month == 0 ? 1.0 : 0.0);
    mask->row(at).setOnes();
  }
}

struct Generator {
  const CrbmParams& params;
  const CohortSchema& schema;
  const Normalizers& norms;
  const GenerateConfig& config;

  int upb() const { return params.layout.units_per_time_block(); }

  /// Run an annealed chain batch under the given clamp and return final states.
  Eigen::MatrixXd draw(const Eigen::MatrixXd& clamp_values, const MaskMatrix& mask,
                       int n_chains, uint64_t seed) const {
    BetaProcess proc(config.schedule.sigma_beta, 0.0);
    ChainSet chains(params, n_chains, proc, seed);
    chains.set_clamp(clamp_values, mask);
    run_annealed(chains, params, config.schedule);
    return chains.visible();
  }

  /// Snap a sampled time block onto the data grid: decode to natural units
  /// and re-encode, so conditioning values match what training data look like.
  void snap_time_block(Eigen::MatrixXd* v, int block_start, int chain,
                       MaskedRow* decoded) const {
    *decoded = decode_time_row(v->col(chain).data() + block_start, schema, norms,
                               params.layout);
    Eigen::VectorXd values(upb()), mask(upb());
    encode_time_row(*decoded, schema, norms, params.layout, values.data(),
                    mask.data());
    v->col(chain).segment(block_start, upb()) = values;
  }
};

}  // namespace

SubjectRecord generate_digital_subject(const CrbmParams& params,
                                       const CohortSchema& schema,
                                       const Normalizers& norms,
                                       const GenerateConfig& config, int tau_months,
                                       uint64_t seed) {
  if (tau_months < 0 || tau_months % schema.visit_interval_months != 0) {
    throw ConfigError("tau must be a non-negative multiple of the visit interval");
  }
  Generator gen{params, schema, norms, config};
  const BlockLayout& layout = params.layout;
  const int n_vis = layout.n_visible();
  const int step = schema.visit_interval_months;
  const int k = layout.lag();
  const int upb = gen.upb();

  // Baseline: sample the full joint anchored at month 0, keep (x_0, static).
  Eigen::MatrixXd clamp_values = Eigen::MatrixXd::Zero(n_vis, 1);
  MaskMatrix clamp_mask = MaskMatrix::Zero(n_vis, 1);
  clamp_indicator(params, schema, 0, &clamp_values, &clamp_mask);
  Eigen::MatrixXd v = gen.draw(clamp_values, clamp_mask, 1, derive_seed(seed, 0));

  SubjectRecord rec;
  rec.subject_id = "digital";
  MaskedRow row;
  // x_0 sits in block index 0 (time t in a window based at month 0).
  Eigen::MatrixXd state = v;
  gen.snap_time_block(&state, layout.time_block_start(0), 0, &row);
  rec.visits[0] = row;
  rec.statics = decode_static_row(state.col(0).data() + layout.static_block_start(),
                                  schema, norms, layout);
  // Re-encode statics once; they are clamped in every later window.
  Eigen::VectorXd static_values(layout.n_static_units());
  Eigen::VectorXd static_mask(layout.n_static_units());
  encode_static_row(rec.statics, schema, norms, layout, static_values.data(),
                    static_mask.data());

  // Normalized generated visits, newest last.
  std::vector<Eigen::VectorXd> past;
  {
    Eigen::VectorXd block(upb), mask(upb);
    encode_time_row(row, schema, norms, layout, block.data(), mask.data());
    past.push_back(block);
  }

  for (int month = step; month <= tau_months; month += step) {
    const int n_known = std::min<int>(static_cast<int>(past.size()), k);
    const int base_month = month - n_known * step;
    Eigen::MatrixXd cv = Eigen::MatrixXd::Zero(n_vis, 1);
    MaskMatrix cm = MaskMatrix::Zero(n_vis, 1);
    for (int j = 0; j < n_known; ++j) {
      const int at = layout.time_block_start(j);
      cv.col(0).segment(at, upb) = past[past.size() - n_known + j];
      cm.col(0).segment(at, upb).setOnes();
    }
    cv.col(0).tail(layout.n_static_units()) = static_values;
    cm.col(0).tail(layout.n_static_units()).setOnes();
    clamp_indicator(params, schema, base_month, &cv, &cm);
    Eigen::MatrixXd out = gen.draw(cv, cm, 1, derive_seed(seed, month));
    gen.snap_time_block(&out, layout.time_block_start(n_known), 0, &row);
    rec.visits[month] = row;
    past.push_back(out.col(0).segment(layout.time_block_start(n_known), upb));
  }
  return rec;
}

std::vector<SubjectRecord> generate_digital_twins(
    const CrbmParams& params, const CohortSchema& schema, const Normalizers& norms,
    const SubjectRecord& subject, int tau_months, int k_twins,
    const GenerateConfig& config, uint64_t seed) {
  if (tau_months < 0 || tau_months % schema.visit_interval_months != 0) {
    throw ConfigError("tau must be a non-negative multiple of the visit interval");
  }
  if (k_twins <= 0) throw ConfigError("k_twins must be positive");
  const auto it = subject.visits.find(0);
  if (it == subject.visits.end()) {
    throw DataError("twin generation: subject " + subject.subject_id +
                    " has no baseline visit");
  }
  Generator gen{params, schema, norms, config};
  const BlockLayout& layout = params.layout;
  const int n_vis = layout.n_visible();
  const int step = schema.visit_interval_months;
  const int k = layout.lag();
  const int upb = gen.upb();

  // Encode the observed baseline + statics; these entries stay clamped.
  Eigen::VectorXd base_values(upb), base_mask(upb);
  encode_time_row(it->second, schema, norms, layout, base_values.data(),
                  base_mask.data());
  Eigen::VectorXd static_values(layout.n_static_units());
  Eigen::VectorXd static_mask(layout.n_static_units());
  encode_static_row(subject.statics, schema, norms, layout, static_values.data(),
                    static_mask.data());
  {
    const int indicator = schema.baseline_indicator_index();
    double observed = base_mask.sum();
    if (indicator >= 0) observed -= base_mask[layout.time_unit_offset(indicator)];
    if (observed <= 0.0) {
      throw DataError("twin generation: baseline entirely missing for subject " +
                      subject.subject_id);
    }
  }

  // First draw: baseline block observed entries + observed statics clamped;
  // the future blocks and any unobserved baseline entries are free.
  Eigen::MatrixXd cv = Eigen::MatrixXd::Zero(n_vis, k_twins);
  MaskMatrix cm = MaskMatrix::Zero(n_vis, k_twins);
  const int b0 = layout.time_block_start(0);
  for (int c = 0; c < k_twins; ++c) {
    cv.col(c).segment(b0, upb) = base_values;
    cv.col(c).tail(layout.n_static_units()) = static_values;
    for (int j = 0; j < upb; ++j) cm(b0 + j, c) = base_mask[j] > 0.0 ? 1 : 0;
    for (int j = 0; j < layout.n_static_units(); ++j) {
      cm(layout.static_block_start() + j, c) = static_mask[j] > 0.0 ? 1 : 0;
    }
  }
  clamp_indicator(params, schema, 0, &cv, &cm);
  Eigen::MatrixXd v = gen.draw(cv, cm, k_twins, derive_seed(seed, 0));

  std::vector<SubjectRecord> twins(k_twins);
  // Completed baseline per chain (observed coords intact, missing ones drawn).
  std::vector<std::vector<Eigen::VectorXd>> past(k_twins);
  std::vector<Eigen::VectorXd> chain_static(k_twins);
  for (int c = 0; c < k_twins; ++c) {
    MaskedRow row;
    gen.snap_time_block(&v, b0, c, &row);
    // Observed baseline values are carried over exactly (clamping already
    // guarantees it in model space; copying keeps natural units bit-identical).
    for (int var = 0; var < schema.n_variables(); ++var) {
      if (schema.variables[var].longitudinal && it->second.is_observed(var)) {
        row.set(var, it->second.values[var]);
      }
    }
    twins[c].subject_id = subject.subject_id + "-twin" + std::to_string(c);
    twins[c].visits[0] = row;
    twins[c].statics = decode_static_row(
        v.col(c).data() + layout.static_block_start(), schema, norms, layout);
    for (int var = 0; var < schema.n_variables(); ++var) {
      if (!schema.variables[var].longitudinal && subject.statics.is_observed(var)) {
        twins[c].statics.set(var, subject.statics.values[var]);
      }
    }
    Eigen::VectorXd block(upb), mask(upb);
    encode_time_row(row, schema, norms, layout, block.data(), mask.data());
    past[c].push_back(block);
    Eigen::VectorXd sv(layout.n_static_units()), sm(layout.n_static_units());
    encode_static_row(twins[c].statics, schema, norms, layout, sv.data(), sm.data());
    chain_static[c] = sv;
  }

  for (int month = step; month <= tau_months; month += step) {
    const int n_known = std::min<int>(static_cast<int>(past[0].size()), k);
    const int base_month = month - n_known * step;
    Eigen::MatrixXd cv2 = Eigen::MatrixXd::Zero(n_vis, k_twins);
    MaskMatrix cm2 = MaskMatrix::Zero(n_vis, k_twins);
    for (int c = 0; c < k_twins; ++c) {
      for (int j = 0; j < n_known; ++j) {
        const int at = layout.time_block_start(j);
        cv2.col(c).segment(at, upb) = past[c][past[c].size() - n_known + j];
        cm2.col(c).segment(at, upb).setOnes();
      }
      cv2.col(c).tail(layout.n_static_units()) = chain_static[c];
      cm2.col(c).tail(layout.n_static_units()).setOnes();
    }
    clamp_indicator(params, schema, base_month, &cv2, &cm2);
    Eigen::MatrixXd out = gen.draw(cv2, cm2, k_twins, derive_seed(seed, month));
    for (int c = 0; c < k_twins; ++c) {
      MaskedRow row;
      gen.snap_time_block(&out, layout.time_block_start(n_known), c, &row);
      twins[c].visits[month] = row;
      past[c].push_back(out.col(c).segment(layout.time_block_start(n_known), upb));
    }
  }
  return twins;
}

TwinSet generate_twinset(const CrbmParams& params, const CohortSchema& schema,
                         const Normalizers& norms,
                         const std::vector<SubjectRecord>& subjects, int k_twins,
                         const GenerateConfig& config, uint64_t seed,
                         int n_threads) {
  TwinSet out;
  out.schema = schema;
  out.subjects = subjects;
  out.twins.resize(subjects.size());
  parallel_for(static_cast<int>(subjects.size()), n_threads, [&](int i) {
    out.twins[i] = generate_digital_twins(
        params, schema, norms, subjects[i], subjects[i].duration_months(), k_twins,
        config, derive_seed(seed, 0x7719ULL, i));
  });
  return out;
}

}  // namespace crbm::sampling
