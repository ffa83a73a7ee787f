#include <cstdio>
#include <fstream>

#include "crbm/synth.hpp"
#include "crbm/tidy.hpp"
#include "doctest.h"

using namespace crbm::cohort;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    path = std::string("tidy_test_") + std::to_string(rand()) + ".csv";
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_tidy maps rows, missing cells and labels") {
  const CohortSchema schema = synth_schema();
  TempFile f(
      "subject_id,visit_month,age,sex,ms_type,baseline_flag,relapse,"
      "kfss_bowel_bladder,kfss_brain_stem,kfss_cerebellar,kfss_mental,"
      "kfss_pyramidal,kfss_sensory,kfss_visual,ambulation,t25fw,pasat\n"
      "S1,0,44.5,1,RRMS,1,0,1,0,2,1,3,2,1,0,6.5,52\n"
      "S1,3,44.5,1,RRMS,0,1,1,0,2,,3,2,1,0,7.1,50\n"
      "S2,0,39,0,PPMS,1,0,0,0,1,0,2,1,6,3,9.9,44\n");
  const auto records = load_tidy(f.path, schema);
  REQUIRE(records.size() == 2);
  const auto& s1 = records[0];
  CHECK(s1.subject_id == "S1");
  CHECK(s1.statics.values[schema.index_of("age")] == doctest::Approx(44.5));
  CHECK(s1.statics.values[schema.index_of("ms_type")] == 0.0);  // RRMS
  CHECK(s1.visits.at(0).values[schema.index_of("kfss_pyramidal")] == 3.0);
  // Empty cell = missing.
  CHECK_FALSE(s1.visits.at(3).is_observed(schema.index_of("kfss_mental")));
  CHECK(s1.visits.at(3).is_observed(schema.index_of("kfss_cerebellar")));
  CHECK(records[1].statics.values[schema.index_of("ms_type")] == 2.0);  // PPMS
}

TEST_CASE("load_tidy error taxonomy") {
  const CohortSchema schema = synth_schema();
  SUBCASE("unknown column is a schema error") {
    TempFile f("subject_id,visit_month,not_a_variable\nS1,0,1\n");
    CHECK_THROWS_AS(load_tidy(f.path, schema), crbm::ConfigError);
  }
  SUBCASE("out-of-domain value is a validation error") {
    TempFile f("subject_id,visit_month,kfss_visual\nS1,0,9\n");
    CHECK_THROWS_AS(load_tidy(f.path, schema), crbm::DataError);
  }
  SUBCASE("EDSS-style domain check") {
    // A schema carrying a reported EDSS column rejects values above 10.
    CohortSchema with_edss = schema;
    VariableSpec edss;
    edss.name = "edss";
    edss.kind = VarKind::continuous;
    edss.lo = 0.0;
    edss.hi = 10.0;
    edss.longitudinal = true;
    edss.transform = Transform::standardize;
    with_edss.variables.push_back(edss);
    TempFile f("subject_id,visit_month,edss\nS1,0,12\n");
    CHECK_THROWS_AS(load_tidy(f.path, with_edss), crbm::DataError);
  }
  SUBCASE("conflicting statics rejected") {
    TempFile f("subject_id,visit_month,age\nS1,0,40\nS1,3,41\n");
    CHECK_THROWS_AS(load_tidy(f.path, schema), crbm::DataError);
  }
}

TEST_CASE("save and reload round trip") {
  const CohortSchema schema = synth_schema();
  SynthConfig cfg;
  cfg.n_subjects = 12;
  cfg.min_visits = 3;
  cfg.max_visits = 8;
  const auto records = synth_cohort(cfg, 99);
  TempFile f("");
  save_tidy(f.path, records, schema);
  const auto loaded = load_tidy(f.path, schema);
  REQUIRE(loaded.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].subject_id == records[i].subject_id);
    CHECK(loaded[i].visits.size() == records[i].visits.size());
    for (const auto& [month, row] : records[i].visits) {
      const auto& lrow = loaded[i].visits.at(month);
      for (int v = 0; v < schema.n_variables(); ++v) {
        CHECK(lrow.is_observed(v) == row.is_observed(v));
        if (row.is_observed(v)) CHECK(lrow.values[v] == row.values[v]);
      }
    }
  }
}

TEST_CASE("bin_visits windows, averaging and rounding") {
  const CohortSchema schema = synth_schema();
  SUBCASE("windowed averaging of a continuous variable") {
    std::vector<RawMeasurement> raw{{"S1", 85, "t25fw", 10.0},
                                    {"S1", 95, "t25fw", 14.0},
                                    {"S1", 0, "t25fw", 7.0}};
    const auto recs = bin_visits(raw, schema);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].visits.at(3).values[schema.index_of("t25fw")] ==
          doctest::Approx(12.0));
    CHECK(recs[0].visits.at(0).values[schema.index_of("t25fw")] ==
          doctest::Approx(7.0));
  }
  SUBCASE("ordinal average rounds to a valid level, ties up") {
    std::vector<RawMeasurement> raw{{"S1", 88, "kfss_visual", 2.0},
                                    {"S1", 92, "kfss_visual", 3.0}};
    const auto recs = bin_visits(raw, schema);
    CHECK(recs[0].visits.at(3).values[schema.index_of("kfss_visual")] == 3.0);
  }
  SUBCASE("window without measurements stays missing") {
    std::vector<RawMeasurement> raw{{"S1", 0, "pasat", 50.0},
                                    {"S1", 180, "pasat", 48.0}};
    const auto recs = bin_visits(raw, schema);
    CHECK_FALSE(recs[0].has_visit(3));
    CHECK(recs[0].has_visit(6));
  }
  SUBCASE("negative day is an input error") {
    std::vector<RawMeasurement> raw{{"S1", -5, "pasat", 50.0}};
    CHECK_THROWS_AS(bin_visits(raw, schema), crbm::DataError);
  }
  SUBCASE("idempotent on already-binned data") {
    std::vector<RawMeasurement> raw{{"S1", 0, "pasat", 50.0},
                                    {"S1", 90, "pasat", 48.0},
                                    {"S1", 180, "pasat", 42.0}};
    const auto once = bin_visits(raw, schema);
    std::vector<RawMeasurement> again;
    for (const auto& [month, row] : once[0].visits) {
      again.push_back({"S1", month * 30, "pasat",
                       row.values[schema.index_of("pasat")]});
    }
    const auto twice = bin_visits(again, schema);
    for (const auto& [month, row] : once[0].visits) {
      CHECK(twice[0].visits.at(month).values[schema.index_of("pasat")] ==
            row.values[schema.index_of("pasat")]);
    }
  }
}
