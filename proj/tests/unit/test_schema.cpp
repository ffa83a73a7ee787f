#include "crbm/schema.hpp"
#include "crbm/synth.hpp"
#include "doctest.h"

using namespace crbm::cohort;

namespace {

VariableSpec continuous(const std::string& name, double lo, double hi) {
  VariableSpec v;
  v.name = name;
  v.kind = VarKind::continuous;
  v.lo = lo;
  v.hi = hi;
  v.transform = Transform::standardize;
  return v;
}

}  // namespace

TEST_CASE("variable spec invariants") {
  VariableSpec v;
  v.name = "ord";
  v.kind = VarKind::ordinal;
  v.ordinal_max = 0;
  CHECK_THROWS_AS(v.validate(), crbm::ConfigError);
  v.ordinal_max = 6;
  v.transform = Transform::scale_by_reciprocal_max;
  CHECK_NOTHROW(v.validate());
  // standardize is only for continuous
  v.transform = Transform::standardize;
  CHECK_THROWS_AS(v.validate(), crbm::ConfigError);

  VariableSpec c = continuous("bad", 5.0, 5.0);
  CHECK_THROWS_AS(c.validate(), crbm::ConfigError);

  VariableSpec cat;
  cat.name = "cat";
  cat.kind = VarKind::categorical;
  cat.labels = {"only"};
  CHECK_THROWS_AS(cat.validate(), crbm::ConfigError);
}

TEST_CASE("schema rejects duplicate names and double indicators") {
  CohortSchema s;
  s.variables.push_back(continuous("age", 18, 80));
  s.variables.push_back(continuous("age", 18, 80));
  CHECK_THROWS_AS(s.validate(), crbm::ConfigError);

  CohortSchema s2 = synth_schema();
  CHECK_NOTHROW(s2.validate());
  VariableSpec flag2;
  flag2.name = "flag2";
  flag2.kind = VarKind::binary;
  flag2.longitudinal = true;
  flag2.baseline_indicator = true;
  s2.variables.push_back(flag2);
  CHECK_THROWS_AS(s2.validate(), crbm::ConfigError);
}

TEST_CASE("record validation names subject, variable and visit") {
  const CohortSchema schema = synth_schema();
  SubjectRecord rec;
  rec.subject_id = "S1";
  rec.statics = MaskedRow(schema.n_variables());
  MaskedRow row(schema.n_variables());
  row.set(schema.index_of("kfss_visual"), 9.0);  // max is 6
  rec.visits[0] = row;
  try {
    validate_record(rec, schema);
    CHECK(false);
  } catch (const crbm::DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("S1") != std::string::npos);
    CHECK(msg.find("kfss_visual") != std::string::npos);
    CHECK(msg.find("month 0") != std::string::npos);
  }

  SUBCASE("off-grid months rejected") {
    SubjectRecord rec2;
    rec2.subject_id = "S2";
    rec2.statics = MaskedRow(schema.n_variables());
    rec2.visits[4] = MaskedRow(schema.n_variables());
    CHECK_THROWS_AS(validate_record(rec2, schema), crbm::DataError);
  }
}

TEST_CASE("schema hash is content sensitive") {
  CohortSchema a = synth_schema();
  CohortSchema b = synth_schema();
  CHECK(a.hash() == b.hash());
  b.variables[0].lo += 1.0;
  CHECK(a.hash() != b.hash());
}
