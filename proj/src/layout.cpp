#include "crbm/layout.hpp"

#include <cmath>

namespace crbm {

using cohort::CohortSchema;
using cohort::MaskedRow;
using cohort::Normalizers;
using cohort::Transform;
using cohort::VarKind;

namespace {

UnitKind unit_kind_for(const cohort::VariableSpec& spec) {
  switch (spec.kind) {
    case VarKind::binary:
      return UnitKind::bernoulli;
    case VarKind::categorical:
      return UnitKind::onehot;
    case VarKind::ordinal:
    case VarKind::continuous:
      return UnitKind::gaussian;  // discrete grids are handled on decode
  }
  return UnitKind::bernoulli;
}

void append_units(const CohortSchema& schema, int var, std::vector<UnitInfo>* units,
                  std::vector<int>* offsets, int* group_counter) {
  const auto& spec = schema.variables[var];
  (*offsets)[var] = static_cast<int>(units->size());
  if (spec.kind == VarKind::categorical) {
    const int g = (*group_counter)++;
    for (int l = 0; l < static_cast<int>(spec.labels.size()); ++l) {
      units->push_back({UnitKind::onehot, var, l, g});
    }
  } else {
    units->push_back({unit_kind_for(spec), var, -1, -1});
  }
}

}  // namespace

BlockLayout::BlockLayout(const CohortSchema& schema, int lag) : lag_(lag) {
  if (lag < 1) throw ConfigError("layout: lag must be >= 1");
  schema.validate();
  time_offset_.assign(schema.n_variables(), -1);
  static_offset_.assign(schema.n_variables(), -1);
  int group_counter = 0;
  for (int v = 0; v < schema.n_variables(); ++v) {
    if (schema.variables[v].longitudinal) {
      append_units(schema, v, &time_units_, &time_offset_, &group_counter);
    }
  }
  for (int v = 0; v < schema.n_variables(); ++v) {
    if (!schema.variables[v].longitudinal) {
      append_units(schema, v, &static_units_, &static_offset_, &group_counter);
    }
  }
  if (time_units_.empty()) throw ConfigError("layout: no longitudinal variables");
  // Absolute one-hot group spans, repeated for each time block.
  auto scan = [&](const std::vector<UnitInfo>& units, int base) {
    int i = 0;
    const int n = static_cast<int>(units.size());
    while (i < n) {
      if (units[i].kind == UnitKind::onehot) {
        int j = i;
        while (j < n && units[j].kind == UnitKind::onehot &&
               units[j].group == units[i].group) {
          ++j;
        }
        groups_.emplace_back(base + i, j - i);
        i = j;
      } else {
        ++i;
      }
    }
  };
  for (int b = 0; b <= lag_; ++b) scan(time_units_, b * units_per_time_block());
  scan(static_units_, static_block_start());
}

const UnitInfo& BlockLayout::unit(int absolute_index) const {
  const int upb = units_per_time_block();
  const int time_total = (lag_ + 1) * upb;
  if (absolute_index < time_total) return time_units_[absolute_index % upb];
  return static_units_[absolute_index - time_total];
}

int BlockLayout::block_of(int absolute_index) const {
  const int upb = units_per_time_block();
  const int time_total = (lag_ + 1) * upb;
  if (absolute_index < time_total) return lag_ - absolute_index / upb;
  return lag_ + 1;
}

namespace {

void encode_units(const MaskedRow& row, const CohortSchema& schema,
                  const Normalizers& norms, const std::vector<UnitInfo>& units,
                  double* values, double* mask) {
  for (size_t i = 0; i < units.size(); ++i) {
    const UnitInfo& u = units[i];
    const auto& spec = schema.variables[u.variable];
    if (!row.is_observed(u.variable)) {
      values[i] = 0.0;
      mask[i] = 0.0;
      continue;
    }
    mask[i] = 1.0;
    const double raw = row.values[u.variable];
    if (u.kind == UnitKind::onehot) {
      values[i] = (static_cast<int>(raw) == u.label) ? 1.0 : 0.0;
    } else {
      values[i] = cohort::transform_value(raw, spec, norms.entries[u.variable],
                                          cohort::Direction::forward);
    }
  }
}

MaskedRow decode_units(const double* values, const CohortSchema& schema,
                       const Normalizers& norms, const std::vector<UnitInfo>& units) {
  MaskedRow row(schema.n_variables());
  for (size_t i = 0; i < units.size(); ++i) {
    const UnitInfo& u = units[i];
    const auto& spec = schema.variables[u.variable];
    if (u.kind == UnitKind::onehot) {
      if (u.label == 0) {
        int best = 0;
        for (size_t j = 1; j < spec.labels.size(); ++j) {
          if (values[i + j] > values[i + best]) best = static_cast<int>(j);
        }
        row.set(u.variable, best);
      }
    } else if (u.kind == UnitKind::bernoulli) {
      row.set(u.variable, values[i] < 0.5 ? 0.0 : 1.0);
    } else {
      row.set(u.variable,
              cohort::transform_value(values[i], spec, norms.entries[u.variable],
                                      cohort::Direction::inverse));
    }
  }
  return row;
}

}  // namespace

void encode_time_row(const MaskedRow& row, const CohortSchema& schema,
                     const Normalizers& norms, const BlockLayout& layout,
                     double* values, double* mask) {
  encode_units(row, schema, norms, layout.time_units(), values, mask);
}

void encode_static_row(const MaskedRow& statics, const CohortSchema& schema,
                       const Normalizers& norms, const BlockLayout& layout,
                       double* values, double* mask) {
  encode_units(statics, schema, norms, layout.static_units(), values, mask);
}

MaskedRow decode_time_row(const double* values, const CohortSchema& schema,
                          const Normalizers& norms, const BlockLayout& layout) {
  return decode_units(values, schema, norms, layout.time_units());
}

MaskedRow decode_static_row(const double* values, const CohortSchema& schema,
                            const Normalizers& norms, const BlockLayout& layout) {
  return decode_units(values, schema, norms, layout.static_units());
}

}  // namespace crbm
