#include "crbm/tidy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace crbm::cohort {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, const VariableSpec& spec,
                  const std::string& context) {
  if (spec.kind == VarKind::categorical) {
    for (size_t l = 0; l < spec.labels.size(); ++l) {
      if (spec.labels[l] == cell) return static_cast<double>(l);
    }
    // Also accept a bare label index.
    try {
      size_t pos = 0;
      const int idx = std::stoi(cell, &pos);
      if (pos == cell.size() && idx >= 0 &&
          idx < static_cast<int>(spec.labels.size())) {
        return idx;
      }
    } catch (...) {
    }
    throw DataError(context + ": unknown label '" + cell + "' for " + spec.name);
  }
  try {
    size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw DataError("");
    return v;
  } catch (...) {
    throw DataError(context + ": cannot parse '" + cell + "' for " + spec.name);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::vector<SubjectRecord> load_tidy(const std::string& path,
                                     const CohortSchema& schema) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "subject_id" || header[1] != "visit_month") {
    throw DataError(path + ": header must start with subject_id,visit_month");
  }
  std::vector<int> col_var(header.size(), -1);
  for (size_t c = 2; c < header.size(); ++c) {
    const int idx = schema.index_of(header[c]);
    if (idx < 0) throw ConfigError(path + ": unknown column '" + header[c] + "'");
    col_var[c] = idx;
  }

  std::vector<SubjectRecord> records;
  std::map<std::string, size_t> by_id;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": wrong cell count");
    }
    const std::string& id = cells[0];
    int month = 0;
    try {
      month = std::stoi(cells[1]);
    } catch (...) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad visit_month");
    }
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      by_id.emplace(id, records.size());
      records.push_back(SubjectRecord{id, MaskedRow(schema.n_variables()), {}});
      it = by_id.find(id);
    }
    SubjectRecord& rec = records[it->second];
    MaskedRow& row = rec.visits.try_emplace(month, MaskedRow(schema.n_variables()))
                         .first->second;
    const std::string context =
        "subject " + id + ", visit month " + std::to_string(month);
    for (size_t c = 2; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      const int var = col_var[c];
      const double v = parse_cell(cells[c], schema.variables[var], context);
      if (schema.variables[var].longitudinal) {
        row.set(var, v);
      } else {
        if (rec.statics.is_observed(var) && rec.statics.values[var] != v) {
          throw DataError(context + ": conflicting static value for " +
                          schema.variables[var].name);
        }
        rec.statics.set(var, v);
      }
    }
  }
  for (auto& rec : records) validate_record(rec, schema);
  return records;
}

void save_tidy(const std::string& path, const std::vector<SubjectRecord>& records,
               const CohortSchema& schema) {
  std::ofstream out(path);
  if (!out) throw RunError("cannot write " + path);
  out << "subject_id,visit_month";
  for (const auto& v : schema.variables) out << ',' << v.name;
  out << '\n';
  auto write_cell = [&](const MaskedRow& row, int var) {
    out << ',';
    if (!row.is_observed(var)) return;
    const auto& spec = schema.variables[var];
    if (spec.kind == VarKind::categorical) {
      out << spec.labels[static_cast<int>(row.values[var])];
    } else {
      out << format_double(row.values[var]);
    }
  };
  for (const auto& rec : records) {
    for (const auto& [month, row] : rec.visits) {
      out << rec.subject_id << ',' << month;
      for (int v = 0; v < schema.n_variables(); ++v) {
        if (schema.variables[v].longitudinal) {
          write_cell(row, v);
        } else {
          write_cell(rec.statics, v);
        }
      }
      out << '\n';
    }
  }
}

std::vector<SubjectRecord> bin_visits(const std::vector<RawMeasurement>& raw,
                                      const CohortSchema& schema) {
  schema.validate();
  const int days_per_visit = 30 * schema.visit_interval_months;
  struct Acc {
    double sum = 0.0;
    long n = 0;
  };
  // subject -> (variable, month) -> accumulator; month -1 holds statics.
  std::map<std::string, std::map<std::pair<int, int>, Acc>> acc;
  std::vector<std::string> order;
  for (const auto& m : raw) {
    if (m.day < 0) {
      throw DataError("subject " + m.subject_id + ": negative day " +
                      std::to_string(m.day));
    }
    const int var = schema.index_of(m.variable);
    if (var < 0) throw ConfigError("unknown variable '" + m.variable + "'");
    const bool longitudinal = schema.variables[var].longitudinal;
    const int window = (m.day + days_per_visit / 2) / days_per_visit;
    const int month = longitudinal ? window * schema.visit_interval_months : -1;
    if (acc.find(m.subject_id) == acc.end()) order.push_back(m.subject_id);
    Acc& a = acc[m.subject_id][{var, month}];
    a.sum += m.value;
    a.n += 1;
  }
  std::vector<SubjectRecord> out;
  for (const auto& id : order) {
    SubjectRecord rec{id, MaskedRow(schema.n_variables()), {}};
    for (const auto& [key, a] : acc[id]) {
      const auto& [var, month] = key;
      const auto& spec = schema.variables[var];
      double mean = a.sum / a.n;
      if (spec.kind != VarKind::continuous) mean = spec.snap(mean);
      if (month < 0) {
        rec.statics.set(var, mean);
      } else {
        rec.visits.try_emplace(month, MaskedRow(schema.n_variables()))
            .first->second.set(var, mean);
      }
    }
    validate_record(rec, schema);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace crbm::cohort
