#include "crbm/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace crbm::cohort {

void VariableSpec::validate() const {
  if (name.empty()) throw ConfigError("variable with empty name");
  switch (kind) {
    case VarKind::ordinal:
      if (ordinal_max < 1) throw ConfigError(name + ": ordinal max must be >= 1");
      break;
    case VarKind::categorical:
      if (labels.size() < 2) throw ConfigError(name + ": categorical needs >= 2 labels");
      break;
    case VarKind::continuous:
      if (!(lo < hi)) throw ConfigError(name + ": continuous needs lo < hi");
      break;
    case VarKind::binary:
      break;
  }
  const bool ok = (transform == Transform::none &&
                   (kind == VarKind::binary || kind == VarKind::categorical)) ||
                  (transform == Transform::scale_by_reciprocal_max &&
                   kind == VarKind::ordinal) ||
                  ((transform == Transform::standardize ||
                    transform == Transform::logit_range) &&
                   kind == VarKind::continuous);
  if (!ok) throw ConfigError(name + ": transform incompatible with variable kind");
  if (transform == Transform::logit_range && logit_delta <= 0.0) {
    throw ConfigError(name + ": logit delta must be > 0");
  }
  if (baseline_indicator && (kind != VarKind::binary || !longitudinal)) {
    throw ConfigError(name + ": baseline indicator must be a longitudinal binary");
  }
}

bool VariableSpec::in_domain(double v) const {
  if (!std::isfinite(v)) return false;
  switch (kind) {
    case VarKind::binary:
      return v == 0.0 || v == 1.0;
    case VarKind::ordinal:
      return v >= 0.0 && v <= ordinal_max && v == std::floor(v);
    case VarKind::categorical:
      return v >= 0.0 && v < static_cast<double>(labels.size()) && v == std::floor(v);
    case VarKind::continuous:
      return v >= lo && v <= hi;
  }
  return false;
}

double VariableSpec::snap(double v) const {
  switch (kind) {
    case VarKind::binary:
      return v < 0.5 ? 0.0 : 1.0;
    case VarKind::ordinal:
      return std::clamp(std::floor(v + 0.5), 0.0, static_cast<double>(ordinal_max));
    case VarKind::categorical:
      return std::clamp(std::floor(v + 0.5), 0.0,
                        static_cast<double>(labels.size() - 1));
    case VarKind::continuous: {
      double x = std::clamp(v, lo, hi);
      if (round_inverse) x = std::clamp(std::floor(x + 0.5), lo, hi);
      return x;
    }
  }
  return v;
}

void CohortSchema::validate() const {
  if (variables.empty()) throw ConfigError("schema has no variables");
  if (visit_interval_months <= 0) throw ConfigError("visit interval must be > 0");
  std::set<std::string> names;
  int n_indicator = 0;
  for (const auto& v : variables) {
    v.validate();
    if (!names.insert(v.name).second) {
      throw ConfigError("duplicate variable name: " + v.name);
    }
    if (v.baseline_indicator) ++n_indicator;
  }
  if (n_indicator > 1) throw ConfigError("at most one baseline indicator allowed");
}

int CohortSchema::index_of(const std::string& name) const {
  for (int i = 0; i < n_variables(); ++i) {
    if (variables[i].name == name) return i;
  }
  return -1;
}

std::vector<int> CohortSchema::longitudinal_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n_variables(); ++i) {
    if (variables[i].longitudinal) out.push_back(i);
  }
  return out;
}

std::vector<int> CohortSchema::static_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n_variables(); ++i) {
    if (!variables[i].longitudinal) out.push_back(i);
  }
  return out;
}

int CohortSchema::baseline_indicator_index() const {
  for (int i = 0; i < n_variables(); ++i) {
    if (variables[i].baseline_indicator) return i;
  }
  return -1;
}

uint64_t CohortSchema::hash() const {
  // FNV-1a over a canonical rendering.
  std::ostringstream os;
  os << visit_interval_months << '|' << max_visits << '|';
  for (const auto& v : variables) {
    os << v.name << ';' << static_cast<int>(v.kind) << ';' << v.longitudinal << ';'
       << v.ordinal_max << ';' << v.lo << ';' << v.hi << ';'
       << static_cast<int>(v.transform) << ';' << v.logit_delta << ';'
       << v.round_inverse << ';' << v.baseline_indicator << ';';
    for (const auto& l : v.labels) os << l << ',';
    os << '|';
  }
  const std::string s = os.str();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void validate_record(const SubjectRecord& rec, const CohortSchema& schema) {
  auto check = [&](int var, double v, const std::string& where) {
    const auto& spec = schema.variables[var];
    if (!spec.in_domain(v)) {
      std::ostringstream os;
      os << "subject " << rec.subject_id << ", variable " << spec.name << ", "
         << where << ": value " << v << " outside domain";
      throw DataError(os.str());
    }
  };
  for (int i = 0; i < schema.n_variables(); ++i) {
    if (!schema.variables[i].longitudinal && rec.statics.is_observed(i)) {
      check(i, rec.statics.values[i], "static");
    }
  }
  for (const auto& [month, row] : rec.visits) {
    if (month < 0 || month % schema.visit_interval_months != 0) {
      std::ostringstream os;
      os << "subject " << rec.subject_id << ": visit month " << month
         << " not a non-negative multiple of " << schema.visit_interval_months;
      throw DataError(os.str());
    }
    for (int i = 0; i < schema.n_variables(); ++i) {
      if (schema.variables[i].longitudinal && row.is_observed(i)) {
        check(i, row.values[i], "month " + std::to_string(month));
      }
    }
  }
}

}  // namespace crbm::cohort
