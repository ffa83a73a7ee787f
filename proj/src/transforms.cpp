#include "crbm/transforms.hpp"

#include <cmath>

#include "crbm/math_util.hpp"

namespace crbm::cohort {

Normalizers fit_normalizers(const std::vector<SubjectRecord>& train,
                            const CohortSchema& schema) {
  if (train.empty()) throw RunError("fit_normalizers: empty training split");
  Normalizers out;
  out.entries.resize(schema.n_variables());
  for (int i = 0; i < schema.n_variables(); ++i) {
    const auto& spec = schema.variables[i];
    auto& e = out.entries[i];
    switch (spec.transform) {
      case Transform::none:
        break;
      case Transform::scale_by_reciprocal_max:
        e.scale = 1.0 / spec.ordinal_max;
        break;
      case Transform::logit_range:
        e.lo = spec.lo;
        e.hi = spec.hi;
        e.delta = spec.logit_delta;
        break;
      case Transform::standardize: {
        double sum = 0.0, sum2 = 0.0;
        long n = 0;
        auto take = [&](const MaskedRow& row) {
          if (row.is_observed(i)) {
            sum += row.values[i];
            sum2 += row.values[i] * row.values[i];
            ++n;
          }
        };
        for (const auto& rec : train) {
          if (spec.longitudinal) {
            for (const auto& [m, row] : rec.visits) take(row);
          } else {
            take(rec.statics);
          }
        }
        if (n == 0) throw RunError("fit_normalizers: no observed values for " + spec.name);
        e.mean = sum / n;
        const double var = sum2 / n - e.mean * e.mean;
        if (var <= 0.0) {
          throw RunError("fit_normalizers: zero variance for " + spec.name);
        }
        e.std = std::sqrt(var);
        break;
      }
    }
  }
  return out;
}

double transform_value(double value, const VariableSpec& spec,
                       const Normalizers::Entry& norm, Direction dir) {
  switch (spec.transform) {
    case Transform::none:
      if (dir == Direction::inverse) return spec.snap(value);
      return value;
    case Transform::scale_by_reciprocal_max:
      if (dir == Direction::forward) return value * norm.scale;
      return spec.snap(value / norm.scale);
    case Transform::standardize:
      if (dir == Direction::forward) return (value - norm.mean) / norm.std;
      return spec.snap(value * norm.std + norm.mean);
    case Transform::logit_range: {
      // log((x - (lo - d)) / ((hi + d) - x)): finite on [lo, hi], symmetric
      // about the midpoint of the buffered interval (lo - d, hi + d).
      const double a = norm.lo - norm.delta;
      const double b = norm.hi + norm.delta;
      if (dir == Direction::forward) {
        if (!(value > a && value < b)) {
          throw DataError(spec.name + ": value outside buffered logit interval");
        }
        return std::log((value - a) / (b - value));
      }
      const double x = a + (b - a) * math::logistic(value);
      return spec.snap(x);
    }
  }
  return value;
}

}  // namespace crbm::cohort
