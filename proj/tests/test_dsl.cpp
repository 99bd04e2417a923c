#include <catch2/catch_amalgamated.hpp>

#include "gripcheck/catalog.hpp"
#include "gripcheck/dsl.hpp"
#include "gripcheck/rng.hpp"

using namespace gripcheck;

TEST_CASE("single-line requirement parses with converted units") {
  auto result = parse_spec(
      "req RQ1.5 category predictability kind range signal pressure in [3 psi, 4 psi] "
      "method unit-test");
  REQUIRE(result.ok());
  REQUIRE(result.doc->requirements.size() == 1);
  const Requirement& r = result.doc->requirements.front();
  CHECK(r.id == "RQ1.5");
  CHECK(r.category == Category::Predictability);
  const auto* p = r.as<RangeParams>();
  REQUIRE(p);
  CHECK(p->lo.si() == Catch::Approx(20684.271).margin(1e-6));
  CHECK(p->hi.si() == Catch::Approx(27579.028).margin(1e-6));
}

TEST_CASE("empty document is a parse error") {
  auto result = parse_spec("");
  REQUIRE_FALSE(result.ok());
  REQUIRE_FALSE(result.errors.empty());
  CHECK(result.errors.front().message == "empty document");

  auto comment_only = parse_spec("# nothing here\n\n");
  CHECK_FALSE(comment_only.ok());
}

TEST_CASE("inverted interval is an empty-interval error") {
  auto result = parse_spec(
      "req R1 category predictability kind range signal pressure in [4 psi, 3 psi] "
      "method unit-test");
  REQUIRE_FALSE(result.ok());
  bool found = false;
  for (const auto& e : result.errors)
    if (e.message.find("empty interval") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("bare numbers on physical literals are rejected") {
  auto result = parse_spec(
      "req R1 category safety kind threshold max grip-force 2 method functional-test");
  REQUIRE_FALSE(result.ok());
  bool found = false;
  for (const auto& e : result.errors)
    if (e.message.find("unit") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("unknown unit is reported with a span") {
  auto result = parse_spec(
      "req R1 category safety kind threshold max grip-force 2 lbf method functional-test");
  REQUIRE_FALSE(result.ok());
  REQUIRE_FALSE(result.errors.empty());
  const auto& e = result.errors.front();
  CHECK(e.message.find("unknown unit") != std::string::npos);
  CHECK(e.span.line == 1);
  CHECK(e.span.column > 1);
}

TEST_CASE("duplicate requirement ids fail structural validation") {
  auto result = parse_spec(
      "req R1 category ethics kind manual method observation end\n"
      "req R1 category ethics kind manual method observation end\n");
  REQUIRE_FALSE(result.ok());
  bool found = false;
  for (const auto& e : result.errors)
    if (e.message.find("duplicate-id") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("print then parse is the identity on the builtin catalog") {
  const SpecificationDoc doc = builtin_catalog();
  const std::string text = print_spec(doc);
  auto result = parse_spec(text);
  REQUIRE(result.ok());
  CHECK(*result.doc == doc);
}

TEST_CASE("printed catalog keeps the original psi spelling") {
  const std::string text = print_spec(builtin_catalog());
  CHECK(text.find("in [3 psi, 4 psi]") != std::string::npos);
  CHECK(text.find("in [2 L/min, 3.2 L/min]") != std::string::npos);
  CHECK(text.find("max grip-force 2 N") != std::string::npos);
  CHECK(text.find("max fingertip-displacement 3 mm") != std::string::npos);
}

TEST_CASE("manual requirement keeps its prose text verbatim") {
  SpecificationDoc doc;
  doc.name = "t";
  Requirement r;
  r.id = "E1";
  r.category = Category::Ethics;
  r.params = ManualParams{};
  r.methods = {{MethodKind::Observation, "human review"}};
  r.text = "The gripper shall avoid \"distressing\" workers.";
  doc.requirements.push_back(r);
  const std::string text = print_spec(doc);
  CHECK(text.find("avoid \\\"distressing\\\" workers") != std::string::npos);
  auto result = parse_spec(text);
  REQUIRE(result.ok());
  CHECK(result.doc->requirements.front().text == r.text);
}

TEST_CASE("errors carry positions and parsing recovers to later requirements") {
  auto result = parse_spec(
      "req R1 category nonsense kind manual method observation end\n"
      "req R2 category ethics kind manual method observation end\n");
  REQUIRE_FALSE(result.ok());
  REQUIRE_FALSE(result.errors.empty());
  CHECK(result.errors.front().span.line == 1);
}

TEST_CASE("parser survives arbitrary byte soup") {
  SplitMix64 rng(0xFEED);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const int len = int(rng.next() % 160);
    for (int j = 0; j < len; ++j) s.push_back(char(rng.next() & 0xFF));
    auto result = parse_spec(s);  // must not crash nor loop
    if (!result.doc) CHECK_FALSE(result.errors.empty());
  }
}

TEST_CASE("parser survives keyword soup") {
  const char* words[] = {"req",    "end",  "category", "kind",   "signal", "in",  "max",
                         "min",    "for",  "fraction", "window", "phase",  "item", "method",
                         "text",   "[",    "]",        ",",      "3",      "psi", "\"x\"",
                         "range",  "0.95", "manual",   "1/m",    "drop",   "-2e9", "document"};
  SplitMix64 rng(0xBEEF);
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const int len = int(rng.next() % 40);
    for (int j = 0; j < len; ++j) {
      s += words[rng.next() % std::size(words)];
      s.push_back(rng.next() % 8 == 0 ? '\n' : ' ');
    }
    auto result = parse_spec(s);
    if (!result.doc) CHECK_FALSE(result.errors.empty());
  }
}

namespace {

// Random well-formed documents exercising every kind (used for the
// round-trip law).
SpecificationDoc random_doc(SplitMix64& rng) {
  SpecificationDoc doc;
  doc.name = "doc-" + std::to_string(rng.next() % 1000);
  if (rng.next() % 2) doc.metadata.emplace_back("note", "generated corpus file");
  const int n = 1 + int(rng.next() % 6);
  for (int i = 0; i < n; ++i) {
    Requirement r;
    r.id = "G" + std::to_string(i) + "." + std::to_string(rng.next() % 10);
    r.category = Category(rng.next() % 6);
    r.methods.push_back({MethodKind(rng.next() % 8), rng.next() % 2 ? "sensor" : ""});
    if (rng.next() % 3 == 0) r.text = "generated requirement " + std::to_string(i);
    switch (rng.next() % 9) {
      case 0:
        r.params = RangeParams{SignalName::Pressure, psi(2 + double(rng.next() % 3)),
                               psi(5 + double(rng.next() % 3)),
                               SampleWindow(rng.next() % 4), std::nullopt};
        break;
      case 1: {
        ThresholdParams p;
        p.bounds = {{SignalName::Velocity, true, meters_per_second(0.03)}};
        if (rng.next() % 2)
          p.bounds.push_back({SignalName::Acceleration, true, meters_per_second2(0.15)});
        p.window = SampleWindow(rng.next() % 4);
        if (rng.next() % 2) p.phase = Phase(rng.next() % 4);
        r.params = p;
        break;
      }
      case 2:
        r.params = EventResponseParams{PumpTrigger(rng.next() % 2), seconds(1 + double(rng.next() % 3))};
        break;
      case 3: {
        HoldDurationParams p{seconds(5 + double(rng.next() % 10)), std::nullopt};
        if (rng.next() % 2) p.fraction = 0.9 + 0.01 * double(rng.next() % 10);
        r.params = p;
        break;
      }
      case 4: {
        SuccessRateParams p{SuccessEvent(rng.next() % 3), 0.9, std::nullopt};
        if (rng.next() % 2)
          p.flow_condition = std::pair<Quantity, Quantity>{liters_per_minute(2), liters_per_minute(3.2)};
        r.params = p;
        break;
      }
      case 5:
        r.params = TrendParams{TrendEvent(rng.next() % 2), 0.05, hours(0), hours(10), hours(90),
                               hours(100)};
        break;
      case 6: {
        ProportionalityParams p;
        if (rng.next() % 2) {
          p.max_rel_residual = 0.05;
          p.max_intercept_frac = 0.05;
        } else {
          p.reference_pressure = psi(3.5);
          p.target_band = std::pair<Quantity, Quantity>{per_meter(9.8), per_meter(10.2)};
        }
        r.params = p;
        break;
      }
      case 7: r.params = NoCollisionParams{CollisionPredicate(rng.next() % 4)}; break;
      default: r.params = ManualParams{}; break;
    }
    if (rng.next() % 4 == 0) {
      r.applicability.classes = std::set<ItemClass>{ItemClass(rng.next() % 4)};
    }
    if (rng.next() % 5 == 0) r.applicability.max_size_ratio = 0.95;
    if (rng.next() % 6 == 0) r.applicability.orientation_sweep = true;
    if (rng.next() % 6 == 0)
      r.applicability.shapes = std::vector<Shape>{Shape::Sphere, Shape::Cube};
    doc.requirements.push_back(std::move(r));
  }
  return doc;
}

}  // namespace

TEST_CASE("round-trip law holds on generated documents") {
  SplitMix64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    SpecificationDoc doc = random_doc(rng);
    REQUIRE(validate_doc(doc).empty());
    const std::string text = print_spec(doc);
    auto result = parse_spec(text);
    REQUIRE(result.ok());
    CHECK(*result.doc == doc);
  }
}
