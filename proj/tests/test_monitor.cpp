#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "gripcheck/monitor.hpp"
#include "gripcheck/rng.hpp"

using namespace gripcheck;

namespace {

// Hand-built trial traces with explicit control of every signal.
struct TraceBuilder {
  Trace trace;
  double dt = 0.01;
  double t = 0.0;
  bool started = false;

  explicit TraceBuilder(ItemSpec item = {}, double opening = 0.08) {
    trace.meta.trial_id = 1;
    trace.meta.item = item;
    trace.meta.opening_width_m = opening;
    trace.meta.sample_period_s = dt;
  }

  TraceBuilder& event(EventKind k, EventPayload p = std::monostate{}) {
    if (!started) {
      TraceEvent start;
      start.t = 0;
      start.kind = EventKind::TrialStart;
      start.payload = trace.meta;
      trace.events.push_back(start);
      started = true;
    }
    TraceEvent e;
    e.t = t;
    e.kind = k;
    e.payload = std::move(p);
    trace.events.push_back(e);
    return *this;
  }

  TraceBuilder& samples(int n, const std::function<SamplePayload(double)>& f) {
    for (int i = 0; i < n; ++i) {
      SamplePayload s = f(t);
      if (s.gripper_body_positions_m.empty())
        s.gripper_body_positions_m = {{0, 0, 0.5}, {-0.04, 0, 0.37}, {0.04, 0, 0.37}};
      event(EventKind::Sample, s);
      t += dt;
    }
    return *this;
  }

  Trace finish() {
    event(EventKind::TrialEnd);
    Trace out = trace;
    trace = {};
    return out;
  }
};

ItemSpec hard_fragile_item() {
  ItemSpec item;
  item.item_class = ItemClass::HardFragile;
  item.width = meters(0.05);
  item.mass = kilograms(0.06);
  item.fragility_force_limit = newtons(2.0);
  return item;
}

ItemSpec plain_item(ItemClass cls = ItemClass::SoftNonFragile) {
  ItemSpec item;
  item.item_class = cls;
  item.width = meters(0.05);
  item.mass = kilograms(0.05);
  return item;
}

Requirement force_threshold_req() {
  return builtin_catalog().get("RQ4.4");
}

std::string result_bytes(const TrialResult& r) {
  std::ostringstream out;
  out << r.requirement_id << '|' << r.trial_id << '|' << int(r.outcome);
  for (const auto& e : r.evidence) out << '|' << e.t << ':' << e.line << ':' << e.message;
  return out.str();
}

}  // namespace

TEST_CASE("grip-force threshold: satisfied under the limit, applicability filtered") {
  auto make = [&](ItemSpec item, double peak_force) {
    TraceBuilder b(item);
    b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    b.samples(20, [&](double at) {
      SamplePayload s;
      s.grip_force_n = peak_force * at / 0.2;
      return s;
    });
    b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    return b.finish();
  };

  const Requirement req = force_threshold_req();
  SECTION("hard-fragile trace with 1.8 N peak is satisfied") {
    TrialResult r = check_trial(req, make(hard_fragile_item(), 1.8));
    CHECK(r.outcome == TrialOutcome::Satisfied);
  }
  SECTION("soft-non-fragile trace is not applicable") {
    TrialResult r = check_trial(req, make(plain_item(), 5.0));
    CHECK(r.outcome == TrialOutcome::NotApplicable);
  }
  SECTION("hard-fragile trace exceeding 2 N is violated with evidence") {
    TrialResult r = check_trial(req, make(hard_fragile_item(), 2.4));
    REQUIRE(r.outcome == TrialOutcome::Violated);
    REQUIRE_FALSE(r.evidence.empty());
    CHECK(r.evidence.front().message.find("grip-force") != std::string::npos);
  }
}

TEST_CASE("hold duration: drop at 4 s after grasp violates the 10 s hold") {
  const Requirement req = builtin_catalog().get("RQ2.2");
  TraceBuilder b(plain_item());
  b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
  b.samples(5, [](double) { return SamplePayload{}; });
  b.event(EventKind::ContactMade);
  b.event(EventKind::GraspEstablished);
  const double t_grasp = b.t;
  b.samples(400, [](double) { return SamplePayload{}; });
  b.t = t_grasp + 4.0;
  b.event(EventKind::ItemDropped, DropPayload{Phase::Translation});
  b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
  Trace trace = b.finish();

  TrialResult r = check_trial(req, trace);
  REQUIRE(r.outcome == TrialOutcome::Violated);
  REQUIRE_FALSE(r.evidence.empty());
  CHECK(r.evidence.front().t == Catch::Approx(t_grasp + 4.0));

  SECTION("placement before 10 s counts as satisfied") {
    TraceBuilder b2(plain_item());
    b2.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    b2.samples(5, [](double) { return SamplePayload{}; });
    b2.event(EventKind::ContactMade);
    b2.event(EventKind::GraspEstablished);
    b2.samples(100, [](double) { return SamplePayload{}; });
    b2.event(EventKind::ItemPlaced);
    b2.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    TrialResult r2 = check_trial(req, b2.finish());
    CHECK(r2.outcome == TrialOutcome::Satisfied);
  }

  SECTION("no grasp at all is not applicable") {
    TraceBuilder b3(plain_item());
    b3.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    b3.samples(5, [](double) { return SamplePayload{}; });
    b3.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    CHECK(check_trial(req, b3.finish()).outcome == TrialOutcome::NotApplicable);
  }
}

TEST_CASE("event response: curvature must rise after pump-on and decay after pump-off") {
  const Requirement rq11 = builtin_catalog().get("RQ1.1");
  const Requirement rq12 = builtin_catalog().get("RQ1.2");

  auto healthy = [&]() {
    TraceBuilder b(plain_item());
    b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    b.event(EventKind::PumpOn, PumpOnPayload{24000, 4.3e-5});
    b.samples(250, [&](double at) {
      SamplePayload s;
      s.pressure_pa = std::min(at * 10000.0, 24000.0);
      const double k = 4.14e-4 * s.pressure_pa;
      s.curvature_per_m = {k, k};
      s.flow_m3s = s.pressure_pa < 24000.0 ? 4.3e-5 : 0.0;
      return s;
    });
    b.event(EventKind::PumpOff);
    const double t_off = b.t;
    b.samples(250, [&](double at) {
      SamplePayload s;
      s.pressure_pa = 24000.0 * std::exp(-(at - t_off) / 0.2);
      const double k = 4.14e-4 * s.pressure_pa;
      s.curvature_per_m = {k, k};
      return s;
    });
    b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    return b.finish();
  };
  CHECK(check_trial(rq11, healthy()).outcome == TrialOutcome::Satisfied);
  CHECK(check_trial(rq12, healthy()).outcome == TrialOutcome::Satisfied);

  SECTION("flat curvature after pump-on is violated") {
    TraceBuilder b(plain_item());
    b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    b.event(EventKind::PumpOn, PumpOnPayload{24000, 4.3e-5});
    b.samples(250, [](double) { return SamplePayload{}; });
    b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    CHECK(check_trial(rq11, b.finish()).outcome == TrialOutcome::Violated);
  }

  SECTION("curvature stuck high after pump-off is violated") {
    TraceBuilder b(plain_item());
    b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    b.samples(10, [](double) {
      SamplePayload s;
      s.curvature_per_m = {10.0, 10.0};
      return s;
    });
    b.event(EventKind::PumpOff);
    b.samples(250, [](double) {
      SamplePayload s;
      s.curvature_per_m = {9.0, 9.0};
      return s;
    });
    b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    CHECK(check_trial(rq12, b.finish()).outcome == TrialOutcome::Violated);
  }
}

TEST_CASE("proportionality: exact linear data fits with zero residual") {
  TraceBuilder b(plain_item());
  b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
  b.event(EventKind::PumpOn, PumpOnPayload{24000, 4.3e-5});
  b.samples(40, [](double at) {
    SamplePayload s;
    s.pressure_pa = at * 8000.0;
    const double k = 4.8e-4 * s.pressure_pa;
    s.curvature_per_m = {k, k};
    s.flow_m3s = 4.3e-5;
    return s;
  });
  b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
  Trace trace = b.finish();

  ProportionalityFit fit = fit_proportionality(trace);
  CHECK(fit.slope == Catch::Approx(4.8e-4).epsilon(1e-12));
  CHECK(fit.max_rel_residual < 1e-9);
  CHECK(std::fabs(fit.intercept) < 1e-12);

  const Requirement rq13 = builtin_catalog().get("RQ1.3");
  CHECK(check_trial(rq13, trace).outcome == TrialOutcome::Satisfied);
}

TEST_CASE("proportionality: constant pressure is degenerate data") {
  TraceBuilder b(plain_item());
  b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
  b.event(EventKind::PumpOn, PumpOnPayload{24000, 4.3e-5});
  b.samples(40, [](double) {
    SamplePayload s;
    s.pressure_pa = 5000.0;
    s.flow_m3s = 4.3e-5;
    s.curvature_per_m = {2.0, 2.0};
    return s;
  });
  b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
  Trace trace = b.finish();
  try {
    fit_proportionality(trace);
    FAIL("expected DegenerateData");
  } catch (const MonitorError& e) {
    CHECK(e.code() == MonitorError::Code::DegenerateData);
  }
  // check_trial wraps degenerate data into NotApplicable (totality).
  CHECK(check_trial(builtin_catalog().get("RQ1.3"), trace).outcome ==
        TrialOutcome::NotApplicable);
}

TEST_CASE("manual requirements are unsupported by check_trial") {
  TraceBuilder b(plain_item());
  b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
  b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
  Trace trace = b.finish();
  CHECK_THROWS_AS(check_trial(builtin_catalog().get("RQ5.1"), trace), MonitorError);
}

TEST_CASE("check_trial is deterministic to the byte") {
  const Requirement req = force_threshold_req();
  TraceBuilder b(hard_fragile_item());
  b.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
  b.samples(30, [](double at) {
    SamplePayload s;
    s.grip_force_n = at * 12.0;
    return s;
  });
  b.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
  Trace trace = b.finish();
  CHECK(result_bytes(check_trial(req, trace)) == result_bytes(check_trial(req, trace)));
}

// ---------------------------------------------------------------------------
// aggregate
// ---------------------------------------------------------------------------

namespace {

std::vector<TrialResult> synthetic_results(const std::string& id, int satisfied, int violated,
                                           int not_applicable = 0) {
  std::vector<TrialResult> out;
  std::uint32_t trial = 0;
  for (int i = 0; i < satisfied; ++i) out.push_back({id, trial++, TrialOutcome::Satisfied, {}});
  for (int i = 0; i < violated; ++i)
    out.push_back({id, trial++, TrialOutcome::Violated, {{0.0, 0, "x"}}});
  for (int i = 0; i < not_applicable; ++i)
    out.push_back({id, trial++, TrialOutcome::NotApplicable, {}});
  return out;
}

}  // namespace

TEST_CASE("success-rate aggregation: 96/100 passes, 94/100 fails at the 0.95 bound") {
  const Requirement req = builtin_catalog().get("RQ1.4");
  Verdict pass = aggregate(req, synthetic_results("RQ1.4", 96, 4));
  CHECK(pass.status == VerdictStatus::Pass);
  CHECK(pass.point_estimate == Catch::Approx(0.96));
  CHECK(pass.ci_lower_95 == Catch::Approx(0.91080374984112011).margin(1e-9));

  Verdict fail = aggregate(req, synthetic_results("RQ1.4", 94, 6));
  CHECK(fail.status == VerdictStatus::Fail);
  CHECK(fail.point_estimate == Catch::Approx(0.94));

  Verdict thin = aggregate(req, synthetic_results("RQ1.4", 10, 0));
  CHECK(thin.status == VerdictStatus::InsufficientData);
}

TEST_CASE("aggregate rejects mixed requirement ids") {
  const Requirement req = builtin_catalog().get("RQ1.4");
  auto results = synthetic_results("RQ2.2", 5, 0);
  CHECK_THROWS_AS(aggregate(req, results), MonitorError);
}

TEST_CASE("non-statistical kinds pass only with zero violations") {
  const Requirement req = force_threshold_req();
  CHECK(aggregate(req, synthetic_results("RQ4.4", 7, 0, 3)).status == VerdictStatus::Pass);
  CHECK(aggregate(req, synthetic_results("RQ4.4", 6, 1, 3)).status == VerdictStatus::Fail);
  CHECK(aggregate(req, synthetic_results("RQ4.4", 0, 0, 10)).status ==
        VerdictStatus::InsufficientData);
}

TEST_CASE("manual aggregates to needs-human-review; pinned velocity gives by-design") {
  CHECK(aggregate(builtin_catalog().get("RQ5.2"), {}).status == VerdictStatus::NeedsHumanReview);

  AggregateOptions opts;
  opts.item_velocity_pinned = true;
  CHECK(aggregate(builtin_catalog().get("RQ4.1"), {}, opts).status == VerdictStatus::ByDesign);
  AggregateOptions unpinned;
  CHECK(aggregate(builtin_catalog().get("RQ4.1"), synthetic_results("RQ4.1", 1, 0), unpinned)
            .status == VerdictStatus::Pass);
}

TEST_CASE("monotonicity: extra satisfied trials never lower the point estimate") {
  const Requirement req = builtin_catalog().get("RQ1.4");
  SplitMix64 rng(5);
  for (int iter = 0; iter < 50; ++iter) {
    const int sat = 100 + int(rng.next() % 100);
    const int bad = int(rng.next() % 20);
    auto base = synthetic_results("RQ1.4", sat, bad);
    Verdict v1 = aggregate(req, base);
    auto more = synthetic_results("RQ1.4", sat + 1, bad);
    Verdict v2 = aggregate(req, more);
    CHECK(v2.point_estimate >= v1.point_estimate - 1e-15);
    if (v1.status == VerdictStatus::Pass) CHECK(v2.status == VerdictStatus::Pass);

    auto worse = synthetic_results("RQ1.4", sat, bad + 1);
    Verdict v3 = aggregate(req, worse);
    CHECK(v3.point_estimate <= v1.point_estimate + 1e-15);
    if (v1.status == VerdictStatus::Fail) CHECK(v3.status == VerdictStatus::Fail);
  }
}

TEST_CASE("trend verdicts compare baseline and final windows") {
  const Requirement req = builtin_catalog().get("RQ2.5");

  // 2% baseline vs 6% final: increase 0.04 <= 0.05 passes.
  Verdict pass = check_trend(req, synthetic_results("RQ2.5", 98, 2),
                             synthetic_results("RQ2.5", 94, 6));
  CHECK(pass.status == VerdictStatus::Pass);

  // 2% vs 9%: increase 0.07 fails.
  Verdict fail = check_trend(req, synthetic_results("RQ2.5", 98, 2),
                             synthetic_results("RQ2.5", 91, 9));
  CHECK(fail.status == VerdictStatus::Fail);
  double increase = 0;
  for (const auto& [k, v] : fail.detail)
    if (k == "increase") increase = v;
  CHECK(increase == Catch::Approx(0.07));

  // Thin windows give insufficient data (n_min/2 = 50 per window).
  Verdict thin = check_trend(req, synthetic_results("RQ2.5", 30, 0),
                             synthetic_results("RQ2.5", 60, 0));
  CHECK(thin.status == VerdictStatus::InsufficientData);
}

TEST_CASE("totality: every catalog requirement yields an outcome on any valid trace") {
  const SpecificationDoc doc = builtin_catalog();

  std::vector<Trace> traces;
  {
    TraceBuilder minimal(plain_item());
    minimal.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    minimal.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    traces.push_back(minimal.finish());
  }
  {
    TraceBuilder full(hard_fragile_item());
    full.event(EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
    full.event(EventKind::PumpOn, PumpOnPayload{24131.65, 4.333e-5});
    full.samples(60, [](double at) {
      SamplePayload s;
      s.pressure_pa = at * 9000.0;
      s.flow_m3s = 4.333e-5;
      const double k = 4.14e-4 * s.pressure_pa;
      s.curvature_per_m = {k, k};
      return s;
    });
    full.event(EventKind::ContactMade);
    full.event(EventKind::GraspEstablished);
    full.samples(40, [](double) {
      SamplePayload s;
      s.pressure_pa = 22000;
      s.curvature_per_m = {3.0, 3.0};
      s.grip_force_n = 1.5;
      return s;
    });
    full.event(EventKind::ItemPlaced);
    full.event(EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
    traces.push_back(full.finish());
  }

  for (const auto& trace : traces) {
    REQUIRE(validate_trace(trace).empty());
    for (const auto& req : doc.requirements) {
      if (req.kind() == ReqKind::Manual) continue;
      TrialResult r = check_trial(req, trace);
      const bool known = r.outcome == TrialOutcome::Satisfied ||
                         r.outcome == TrialOutcome::Violated ||
                         r.outcome == TrialOutcome::NotApplicable;
      CHECK(known);
      if (r.outcome == TrialOutcome::Violated) CHECK_FALSE(r.evidence.empty());
    }
  }
}

TEST_CASE("clopper-pearson detail stays below the point estimate") {
  const Requirement req = builtin_catalog().get("RQ1.4");
  for (int bad : {0, 1, 5, 20}) {
    Verdict v = aggregate(req, synthetic_results("RQ1.4", 180 - bad, bad));
    CHECK(v.ci_lower_95 <= v.point_estimate);
  }
}
