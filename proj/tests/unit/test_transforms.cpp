#include <cmath>

#include "crbm/transforms.hpp"
#include "crbm/synth.hpp"
#include "doctest.h"

using namespace crbm::cohort;

namespace {

SubjectRecord with_ages(const CohortSchema& schema, std::vector<double> ages) {
  SubjectRecord rec;
  rec.subject_id = "S";
  rec.statics = MaskedRow(schema.n_variables());
  rec.statics.set(schema.index_of("age"), ages[0]);
  return rec;
}

}  // namespace

TEST_CASE("standardize fit from training values only") {
  const CohortSchema schema = synth_schema();
  std::vector<SubjectRecord> train;
  for (double age : {20.0, 40.0, 60.0}) {
    train.push_back(with_ages(schema, {age}));
  }
  const Normalizers norms = fit_normalizers(train, schema);
  const int age = schema.index_of("age");
  CHECK(norms.entries[age].mean == doctest::Approx(40.0));
  CHECK(norms.entries[age].std == doctest::Approx(std::sqrt(800.0 / 3.0)));

  SUBCASE("zero variance errors") {
    std::vector<SubjectRecord> degenerate{with_ages(schema, {50.0}),
                                          with_ages(schema, {50.0})};
    CHECK_THROWS_AS(fit_normalizers(degenerate, schema), crbm::RunError);
  }
}

TEST_CASE("ordinal scale and logit defaults come from the schema") {
  const CohortSchema schema = synth_schema();
  std::vector<SubjectRecord> train{with_ages(schema, {30.0}),
                                   with_ages(schema, {50.0})};
  const Normalizers norms = fit_normalizers(train, schema);
  CHECK(norms.entries[schema.index_of("kfss_pyramidal")].scale ==
        doctest::Approx(1.0 / 6.0));
  CHECK(norms.entries[schema.index_of("ambulation")].scale ==
        doctest::Approx(1.0 / 11.0));
  CHECK(norms.entries[schema.index_of("t25fw")].delta == doctest::Approx(0.5));
}

TEST_CASE("buffered logit transform") {
  const CohortSchema schema = synth_schema();
  const int walk = schema.index_of("t25fw");
  const auto& spec = schema.variables[walk];
  Normalizers::Entry e;
  e.lo = 2.0;
  e.hi = 300.0;
  e.delta = 0.5;

  // Midpoint of the buffered interval (1.5, 300.5) maps to 0.
  CHECK(transform_value(151.0, spec, e, Direction::forward) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Lower edge stays finite: log(0.5 / 298.5).
  CHECK(transform_value(2.0, spec, e, Direction::forward) ==
        doctest::Approx(std::log(0.5 / 298.5)).epsilon(1e-12));
  // Outside the buffered open interval errors.
  CHECK_THROWS_AS(transform_value(1.4, spec, e, Direction::forward),
                  crbm::DataError);
  // Inverse clamps to the domain.
  CHECK(transform_value(-100.0, spec, e, Direction::inverse) == doctest::Approx(2.0));
  CHECK(transform_value(100.0, spec, e, Direction::inverse) == doctest::Approx(300.0));
}

TEST_CASE("round trips") {
  const CohortSchema schema = synth_schema();
  std::vector<SubjectRecord> train{with_ages(schema, {30.0}),
                                   with_ages(schema, {50.0})};
  const Normalizers norms = fit_normalizers(train, schema);

  SUBCASE("continuous round trip within 1e-9 over the domain") {
    const int walk = schema.index_of("t25fw");
    const auto& spec = schema.variables[walk];
    for (int i = 0; i <= 1000; ++i) {
      const double x = spec.lo + (spec.hi - spec.lo) * i / 1000.0;
      const double y = transform_value(x, spec, norms.entries[walk],
                                       Direction::forward);
      const double back =
          transform_value(y, spec, norms.entries[walk], Direction::inverse);
      CHECK(std::abs(back - x) < 1e-9);
    }
  }
  SUBCASE("ordinal levels recovered exactly") {
    const int kfss = schema.index_of("kfss_visual");
    const auto& spec = schema.variables[kfss];
    for (int level = 0; level <= 6; ++level) {
      const double y = transform_value(level, spec, norms.entries[kfss],
                                       Direction::forward);
      CHECK(y == doctest::Approx(level / 6.0));
      CHECK(transform_value(y, spec, norms.entries[kfss], Direction::inverse) ==
            doctest::Approx(level));
    }
    // Inverse snaps to the grid.
    CHECK(transform_value(0.49, spec, norms.entries[kfss], Direction::inverse) ==
          doctest::Approx(3.0));
  }
  SUBCASE("integer-valued continuous rounds on inverse") {
    const int pasat = schema.index_of("pasat");
    const auto& spec = schema.variables[pasat];
    for (int level = 0; level <= 60; ++level) {
      const double y = transform_value(level, spec, norms.entries[pasat],
                                       Direction::forward);
      CHECK(transform_value(y, spec, norms.entries[pasat], Direction::inverse) ==
            doctest::Approx(level));
    }
  }
  SUBCASE("standardized training values have mean 0 and std 1") {
    std::vector<SubjectRecord> bigger;
    for (double age : {20.0, 25.0, 35.0, 44.0, 52.0, 61.0, 70.0}) {
      bigger.push_back(with_ages(schema, {age}));
    }
    const Normalizers n2 = fit_normalizers(bigger, schema);
    const int age = schema.index_of("age");
    double sum = 0.0, sum2 = 0.0;
    for (const auto& rec : bigger) {
      const double z = transform_value(rec.statics.values[age],
                                       schema.variables[age], n2.entries[age],
                                       Direction::forward);
      sum += z;
      sum2 += z * z;
    }
    CHECK(std::abs(sum / bigger.size()) < 1e-9);
    CHECK(std::abs(sum2 / bigger.size() - 1.0) < 1e-9);
  }
}
