#include <catch2/catch_amalgamated.hpp>

#include "gripcheck/catalog.hpp"

using namespace gripcheck;

TEST_CASE("builtin catalog holds exactly the expected requirement ids") {
  const SpecificationDoc doc = builtin_catalog();
  const std::vector<std::string> expected = {
      "RQ1.1", "RQ1.2", "RQ1.3", "RQ1.4", "RQ1.5", "RQ1.6", "RQ2.1", "RQ2.2", "RQ2.3", "RQ2.4",
      "RQ2.5", "RQ2.6", "RQ3.1", "RQ3.2", "RQ3.3", "RQ3.4", "RQ4.1", "RQ4.2", "RQ4.3", "RQ4.4",
      "RQ4.5", "RQ4.6", "RQ5.1", "RQ5.2", "RQ5.3", "RQ5.4", "RQ1.1r", "RQ4.2r"};
  REQUIRE(doc.requirements.size() == expected.size());
  std::vector<std::string> ids;
  for (const auto& r : doc.requirements) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> want = expected;
  std::sort(want.begin(), want.end());
  CHECK(ids == want);
}

TEST_CASE("builtin catalog validates cleanly") {
  CHECK(validate_doc(builtin_catalog()).empty());
}

TEST_CASE("catalog thresholds are the exact published numbers in SI") {
  const SpecificationDoc doc = builtin_catalog();

  const auto* rq15 = doc.get("RQ1.5").as<RangeParams>();
  REQUIRE(rq15);
  CHECK(rq15->signal == SignalName::Pressure);
  CHECK(rq15->lo == psi(3));
  CHECK(rq15->hi == psi(4));
  CHECK(rq15->lo.si() == Catch::Approx(20684.271).margin(1e-6));
  CHECK(rq15->hi.si() == Catch::Approx(27579.028).margin(1e-6));

  const auto* rq16 = doc.get("RQ1.6").as<RangeParams>();
  REQUIRE(rq16);
  CHECK(rq16->lo == liters_per_minute(2));
  CHECK(rq16->hi == liters_per_minute(3.2));

  const auto* rq22 = doc.get("RQ2.2").as<HoldDurationParams>();
  REQUIRE(rq22);
  CHECK(rq22->hold.si() == 10.0);
  CHECK(rq22->fraction == 0.95);

  const auto* rq23 = doc.get("RQ2.3").as<ThresholdParams>();
  REQUIRE(rq23);
  REQUIRE(rq23->bounds.size() == 2);
  CHECK(rq23->bounds[0].bound.si() == 0.03);
  CHECK(rq23->bounds[1].bound.si() == 0.15);
  CHECK(rq23->phase == Phase::Translation);

  const auto* rq25 = doc.get("RQ2.5").as<TrendParams>();
  REQUIRE(rq25);
  CHECK(rq25->max_increase == 0.05);
  CHECK(rq25->final_hi == hours(100));

  CHECK(doc.get("RQ3.1").applicability.max_size_ratio == 0.95);

  const auto* rq44 = doc.get("RQ4.4").as<ThresholdParams>();
  REQUIRE(rq44);
  CHECK(rq44->bounds[0].bound == newtons(2));
  const auto* rq45 = doc.get("RQ4.5").as<ThresholdParams>();
  REQUIRE(rq45);
  CHECK(rq45->bounds[0].bound == millimeters(3));
  const auto* rq46 = doc.get("RQ4.6").as<ThresholdParams>();
  REQUIRE(rq46);
  CHECK(rq46->bounds[0].bound == newtons(1));
  CHECK(rq46->bounds[1].bound == millimeters(1));

  const auto* rq11r = doc.get("RQ1.1r").as<ProportionalityParams>();
  REQUIRE(rq11r);
  CHECK(rq11r->reference_pressure == psi(3.5));
  CHECK(rq11r->target_band->first == per_meter(9.8));
  CHECK(rq11r->target_band->second == per_meter(10.2));
}

TEST_CASE("verification method tags reproduce the published mapping row for row") {
  const SpecificationDoc doc = builtin_catalog();
  auto kinds = [&](const char* id) {
    std::vector<MethodKind> out;
    for (const auto& m : doc.get(id).methods) out.push_back(m.kind);
    return out;
  };
  using MK = MethodKind;
  for (const char* id : {"RQ1.1", "RQ1.2", "RQ1.4", "RQ2.1", "RQ2.2", "RQ2.4"})
    CHECK(kinds(id) == std::vector<MK>{MK::Observation});
  for (const char* id : {"RQ1.3", "RQ1.5"})
    CHECK(kinds(id) == std::vector<MK>{MK::UnitTest});
  CHECK(kinds("RQ2.3") == std::vector<MK>{MK::EdgeCaseTest});
  for (const char* id : {"RQ2.5", "RQ2.6"})
    CHECK(kinds(id) == std::vector<MK>{MK::LifeCycleTest});
  for (const char* id : {"RQ3.1", "RQ3.2", "RQ3.3"})
    CHECK(kinds(id) == std::vector<MK>{MK::RepeatedTest, MK::Observation});
  CHECK(kinds("RQ4.1") == std::vector<MK>{MK::Measurement, MK::Observation});
  CHECK(doc.get("RQ4.1").methods[0].detail == "vision camera");
  CHECK(kinds("RQ4.2") == std::vector<MK>{MK::Measurement});
  CHECK(doc.get("RQ4.2").methods[0].detail == "force torque sensor");
  CHECK(kinds("RQ4.3") == std::vector<MK>{MK::Measurement});
  CHECK(doc.get("RQ4.3").methods[0].detail == "force torque sensor and vision camera");
  CHECK(kinds("RQ4.4") == std::vector<MK>{MK::FunctionalTest});
  CHECK(kinds("RQ4.5") == std::vector<MK>{MK::Measurement});
  CHECK(doc.get("RQ4.5").methods[0].detail == "displacement sensor");
  CHECK(kinds("RQ4.6") == std::vector<MK>{MK::FunctionalTest, MK::Measurement});
}

TEST_CASE("ethics requirements are manual; RQ4.1 is the only by-design-style safety entry") {
  const SpecificationDoc doc = builtin_catalog();
  for (const auto& r : doc.requirements) {
    if (r.category == Category::Ethics) {
      CHECK(r.kind() == ReqKind::Manual);
    } else {
      CHECK(r.kind() != ReqKind::Manual);
    }
  }
  const auto* rq41 = doc.get("RQ4.1").as<NoCollisionParams>();
  REQUIRE(rq41);
  CHECK(rq41->predicate == CollisionPredicate::ItemMotionless);
}

TEST_CASE("validate_doc flags the constructed violations") {
  SpecificationDoc doc = builtin_catalog();

  SECTION("duplicate id") {
    doc.requirements.push_back(doc.requirements.front());
    auto violations = validate_doc(doc);
    REQUIRE_FALSE(violations.empty());
    bool found = false;
    for (const auto& v : violations)
      if (v.rule == "duplicate-id" && v.requirement_id == "RQ1.1") found = true;
    CHECK(found);
  }

  SECTION("success fraction out of range") {
    for (auto& r : doc.requirements)
      if (auto* p = std::get_if<SuccessRateParams>(&r.params)) p->fraction = 1.2;
    auto violations = validate_doc(doc);
    bool found = false;
    for (const auto& v : violations)
      if (v.rule == "bound-out-of-range") found = true;
    CHECK(found);
  }

  SECTION("empty document") {
    SpecificationDoc empty;
    auto violations = validate_doc(empty);
    REQUIRE(violations.size() == 1);
    CHECK(violations.front().rule == "empty-document");
  }

  SECTION("inverted range") {
    for (auto& r : doc.requirements)
      if (auto* p = std::get_if<RangeParams>(&r.params)) std::swap(p->lo, p->hi);
    auto violations = validate_doc(doc);
    bool found = false;
    for (const auto& v : violations)
      if (v.rule == "empty-interval") found = true;
    CHECK(found);
  }

  SECTION("missing method") {
    doc.requirements.front().methods.clear();
    auto violations = validate_doc(doc);
    bool found = false;
    for (const auto& v : violations)
      if (v.rule == "no-method") found = true;
    CHECK(found);
  }
}
