#include "crbm/edss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace crbm::ms {

void KfssVector::validate() const {
  for (int i = 0; i < 7; ++i) {
    if (grades[i] < 0 || grades[i] > kMaxima[i]) {
      throw DataError(std::string(kNames[i]) + ": grade " +
                      std::to_string(grades[i]) + " outside 0.." +
                      std::to_string(kMaxima[i]));
    }
  }
}

int ambulation_from_edss(double edss) {
  const double doubled = edss * 2.0;
  if (edss < 0.0 || edss > 10.0 || doubled != std::floor(doubled)) {
    throw DataError("EDSS " + std::to_string(edss) + " not on the half-point grid");
  }
  if (edss <= 4.5) return 0;
  return static_cast<int>(std::lround(2.0 * (edss - 4.5)));
}

double KfssRuleTable::evaluate(const KfssVector& kfss) const {
  kfss.validate();
  for (const auto& rule : rules) {
    bool ok = true;
    for (const auto& [grade, count] : rule.min_count_at_grade) {
      int have = 0;
      for (int g : kfss.grades) {
        if (g >= grade) ++have;
      }
      if (have < count) {
        ok = false;
        break;
      }
    }
    if (ok) return rule.edss;
  }
  return 0.0;
}

KfssRuleTable KfssRuleTable::default_table() {
  // Kurtzke-style rubric for the walking-unimpaired regime: EDSS 1.0 is one
  // functional system at grade 1, combinations of higher grades move the
  // score up, capped at 4.5. Every condition is a >=-count, so raising any
  // component grade never lowers the score.
  KfssRuleTable t;
  auto add = [&](double edss, std::vector<std::pair<int, int>> cond) {
    t.rules.push_back({edss, std::move(cond)});
  };
  add(4.5, {{4, 1}, {3, 2}});
  add(4.5, {{4, 2}});
  add(4.0, {{4, 1}});
  add(4.0, {{3, 3}});
  add(3.5, {{3, 2}});
  add(3.5, {{3, 1}, {2, 3}});
  add(3.5, {{2, 5}});
  add(3.0, {{3, 1}});
  add(3.0, {{2, 3}});
  add(2.5, {{2, 2}});
  add(2.0, {{2, 1}});
  add(1.5, {{1, 2}});
  add(1.0, {{1, 1}});
  return t;
}

KfssRuleTable KfssRuleTable::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule table " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  KfssRuleTable t;
  for (const auto& r : j.at("rules")) {
    KfssRule rule;
    rule.edss = r.at("edss").get<double>();
    if (rule.edss < 0.0 || rule.edss > 4.5) {
      throw ConfigError(path + ": rule table EDSS values must be in [0, 4.5]");
    }
    for (const auto& c : r.at("conditions")) {
      rule.min_count_at_grade.emplace_back(c.at("grade").get<int>(),
                                           c.at("count").get<int>());
    }
    t.rules.push_back(std::move(rule));
  }
  std::stable_sort(t.rules.begin(), t.rules.end(),
                   [](const KfssRule& a, const KfssRule& b) { return a.edss > b.edss; });
  return t;
}

void KfssRuleTable::save_json(const std::string& path) const {
  nlohmann::json j;
  j["rules"] = nlohmann::json::array();
  for (const auto& rule : rules) {
    nlohmann::json r;
    r["edss"] = rule.edss;
    r["conditions"] = nlohmann::json::array();
    for (const auto& [grade, count] : rule.min_count_at_grade) {
      r["conditions"].push_back({{"grade", grade}, {"count", count}});
    }
    j["rules"].push_back(std::move(r));
  }
  std::ofstream out(path);
  if (!out) throw RunError("cannot write " + path);
  out << j.dump(2) << '\n';
}

double edss_total(const KfssVector& kfss, int ambulation, const KfssRuleTable& table) {
  if (ambulation < 0 || ambulation > 11) {
    throw DataError("ambulation score outside 0..11");
  }
  if (ambulation > 0) return 4.5 + ambulation / 2.0;
  return std::min(table.evaluate(kfss), 4.5);
}

std::optional<double> EdssTrajectory::at(int month) const {
  for (size_t i = 0; i < months.size(); ++i) {
    if (months[i] == month && observed[i]) return edss[i];
  }
  return std::nullopt;
}

EdssTrajectory edss_trajectory(const cohort::SubjectRecord& rec,
                               const cohort::CohortSchema& schema,
                               const KfssRuleTable& table) {
  std::array<int, 7> kfss_idx;
  for (int i = 0; i < 7; ++i) {
    kfss_idx[i] = schema.index_of(KfssVector::kNames[i]);
  }
  const int amb_idx = schema.index_of("ambulation");
  EdssTrajectory out;
  for (const auto& [month, row] : rec.visits) {
    out.months.push_back(month);
    bool complete = amb_idx >= 0 && row.is_observed(amb_idx);
    KfssVector kfss;
    for (int i = 0; i < 7; ++i) {
      if (kfss_idx[i] < 0 || !row.is_observed(kfss_idx[i])) {
        complete = false;
        break;
      }
      kfss.grades[i] = static_cast<int>(row.values[kfss_idx[i]]);
    }
    if (complete) {
      const int amb = static_cast<int>(row.values[amb_idx]);
      out.edss.push_back(edss_total(kfss, amb, table));
      out.observed.push_back(1);
    } else {
      out.edss.push_back(0.0);
      out.observed.push_back(0);
    }
  }
  return out;
}

std::optional<double> edss_change_18m(const EdssTrajectory& traj) {
  const auto base = traj.at(0);
  const auto late = traj.at(18);
  if (!base || !late) return std::nullopt;
  return *late - *base;
}

EdssCrosscheck edss_crosscheck(const std::vector<cohort::SubjectRecord>& records,
                               const cohort::CohortSchema& schema,
                               const std::string& reported_edss_variable,
                               const KfssRuleTable& table) {
  const int edss_idx = schema.index_of(reported_edss_variable);
  if (edss_idx < 0) {
    throw ConfigError("crosscheck: unknown variable " + reported_edss_variable);
  }
  EdssCrosscheck out;
  for (const auto& rec : records) {
    const EdssTrajectory traj = edss_trajectory(rec, schema, table);
    for (size_t i = 0; i < traj.months.size(); ++i) {
      if (!traj.observed[i]) continue;
      const auto it = rec.visits.find(traj.months[i]);
      if (it == rec.visits.end() || !it->second.is_observed(edss_idx)) continue;
      const double reported = it->second.values[edss_idx];
      ++out.n_compared;
      if (std::abs(reported - traj.edss[i]) > 1e-9) {
        ++out.n_disagree;
        if (out.examples.size() < 20) {
          std::ostringstream os;
          os << rec.subject_id << "/m" << traj.months[i] << ": reported " << reported
             << " vs recomputed " << traj.edss[i];
          out.examples.push_back(os.str());
        }
      }
    }
  }
  return out;
}

}  // namespace crbm::ms
