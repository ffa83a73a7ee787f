#pragma once

#include <Eigen/Core>
#include <vector>

#include "crbm/schema.hpp"
#include "crbm/transforms.hpp"

namespace crbm {

/// Visible unit kinds plus the hidden-layer kinds. Visible units are
/// bernoulli, onehot or gaussian; hidden layers are relu_hidden in production
/// and bernoulli in small enumeration oracles.
enum class UnitKind { bernoulli, onehot, gaussian, relu_hidden };

struct UnitInfo {
  UnitKind kind = UnitKind::bernoulli;
  int variable = -1;  // schema variable index
  int label = -1;     // one-hot label position, -1 otherwise
  int group = -1;     // one-hot group id within the block, -1 otherwise
};

/// Maps schema variables onto the concatenated visible vector of a lag-k
/// model: time blocks for offsets t+k, ..., t+3, t, then the static block.
/// Time blocks are identical in composition.
class BlockLayout {
 public:
  BlockLayout() = default;
  BlockLayout(const cohort::CohortSchema& schema, int lag);

  int lag() const { return lag_; }
  int units_per_time_block() const { return static_cast<int>(time_units_.size()); }
  int n_static_units() const { return static_cast<int>(static_units_.size()); }
  int n_visible() const {
    return (lag_ + 1) * units_per_time_block() + n_static_units();
  }

  /// Start index of the block for time offset t+3*j (j in 0..lag). Offset
  /// lag (the most recent visit) sits first in the vector.
  int time_block_start(int j) const { return (lag_ - j) * units_per_time_block(); }
  int static_block_start() const { return (lag_ + 1) * units_per_time_block(); }

  const std::vector<UnitInfo>& time_units() const { return time_units_; }
  const std::vector<UnitInfo>& static_units() const { return static_units_; }

  /// Unit metadata for an absolute visible index.
  const UnitInfo& unit(int absolute_index) const;
  /// Block of an absolute index: 0..lag for time blocks, lag+1 for static.
  int block_of(int absolute_index) const;

  /// One-hot groups as (start, length) pairs in absolute indices.
  const std::vector<std::pair<int, int>>& onehot_groups() const { return groups_; }

  /// First unit index of a longitudinal variable within a time block, or the
  /// absolute offset of a static variable within the static block; -1 if the
  /// variable is not encoded there.
  int time_unit_offset(int variable) const { return time_offset_[variable]; }
  int static_unit_offset(int variable) const { return static_offset_[variable]; }

 private:
  int lag_ = 2;
  std::vector<UnitInfo> time_units_;
  std::vector<UnitInfo> static_units_;
  std::vector<std::pair<int, int>> groups_;
  std::vector<int> time_offset_;
  std::vector<int> static_offset_;
};

/// Encode one visit row into a time block: normalized values plus unit mask.
/// `values`/`mask` must have room for units_per_time_block entries at `out`.
void encode_time_row(const cohort::MaskedRow& row, const cohort::CohortSchema& schema,
                     const cohort::Normalizers& norms, const BlockLayout& layout,
                     double* values, double* mask);

void encode_static_row(const cohort::MaskedRow& statics,
                       const cohort::CohortSchema& schema,
                       const cohort::Normalizers& norms, const BlockLayout& layout,
                       double* values, double* mask);

/// Decode one time block of model-space unit values back to a visit row in
/// natural units (one-hot by argmax, discrete rounding, domain clamping).
cohort::MaskedRow decode_time_row(const double* values,
                                  const cohort::CohortSchema& schema,
                                  const cohort::Normalizers& norms,
                                  const BlockLayout& layout);

cohort::MaskedRow decode_static_row(const double* values,
                                    const cohort::CohortSchema& schema,
                                    const cohort::Normalizers& norms,
                                    const BlockLayout& layout);

}  // namespace crbm
