// The built-in requirement catalog for the pick-and-place soft gripper:
// six predictability, six reliability, four adaptability, six safety and four
// ethics requirements, plus the two refined checkable forms.
#pragma once

#include "gripcheck/spec_model.hpp"

namespace gripcheck {

namespace catalog_detail {

inline Requirement req(std::string id, Category cat, ReqParams params,
                       std::vector<VerificationMethod> methods, std::string text,
                       Applicability app = {}) {
  Requirement r;
  r.id = std::move(id);
  r.category = cat;
  r.params = std::move(params);
  r.applicability = std::move(app);
  r.methods = std::move(methods);
  r.text = std::move(text);
  return r;
}

}  // namespace catalog_detail

inline SpecificationDoc builtin_catalog() {
  using catalog_detail::req;
  const VerificationMethod observation{MethodKind::Observation, "during operation"};
  const VerificationMethod unit_test{MethodKind::UnitTest, ""};
  const VerificationMethod repeated{MethodKind::RepeatedTest, ""};

  SpecificationDoc doc;
  doc.name = "soft-gripper-pick-and-place";
  doc.metadata = {
      {"scope", "two-finger fluidic elastomer gripper, grocery pick-and-place"},
      {"standards", "ISO 14539:2000; ISO 10218-1/-2; ISO/TS 15066; ASTM F45.05"},
      {"success-bounds", "95% for success and 5% for failure"},
  };

  // -- Predictability -------------------------------------------------------
  doc.requirements.push_back(req(
      "RQ1.1", Category::Predictability,
      EventResponseParams{PumpTrigger::PumpOn, seconds(2.0)}, {observation},
      "The fingers of the gripper shall curve when inflated (pump turned on)."));
  doc.requirements.push_back(req(
      "RQ1.2", Category::Predictability,
      EventResponseParams{PumpTrigger::PumpOff, seconds(2.0)}, {observation},
      "The fingers of the gripper shall straighten when deflated (pump turned off)."));
  {
    ProportionalityParams p;
    p.max_rel_residual = 0.05;
    p.max_intercept_frac = 0.05;
    doc.requirements.push_back(req(
        "RQ1.3", Category::Predictability, p, {unit_test},
        "The curvature of a finger shall be proportional to its internal pressure."));
  }
  doc.requirements.push_back(req(
      "RQ1.4", Category::Predictability, SuccessRateParams{SuccessEvent::Placed, 0.95, {}},
      {observation},
      "The gripper shall grasp, transport, and place an item successfully with a "
      "repeatability of at least 95%."));
  doc.requirements.push_back(req(
      "RQ1.5", Category::Predictability,
      RangeParams{SignalName::Pressure, psi(3), psi(4), SampleWindow::Plateau, {}}, {unit_test},
      "The fingers shall be inflated with a pressure between 3 and 4 psi."));
  doc.requirements.push_back(req(
      "RQ1.6", Category::Predictability,
      RangeParams{SignalName::Flow, liters_per_minute(2), liters_per_minute(3.2),
                  SampleWindow::Filling, {}},
      {unit_test},
      "The fingers shall be inflated with a flow rate between 2 and 3.2 L/min."));

  // -- Reliability -----------------------------------------------------------
  doc.requirements.push_back(req(
      "RQ2.1", Category::Reliability, SuccessRateParams{SuccessEvent::Undamaged, 0.95, {}},
      {observation},
      "The gripper shall hold the item being gripped without damaging it."));
  doc.requirements.push_back(req(
      "RQ2.2", Category::Reliability, HoldDurationParams{seconds(10), 0.95}, {observation},
      "The gripper shall hold the item being gripped without dropping it for at "
      "least 10 seconds, 95% of the time."));
  {
    ThresholdParams p;
    p.bounds = {{SignalName::Velocity, true, meters_per_second(0.03)},
                {SignalName::Acceleration, true, meters_per_second2(0.15)}};
    p.window = SampleWindow::GraspHeld;
    p.phase = Phase::Translation;
    doc.requirements.push_back(req(
        "RQ2.3", Category::Reliability, p, {{MethodKind::EdgeCaseTest, ""}},
        "The gripper shall successfully maintain grasp during the translation of the "
        "gripped item for a maximum velocity and acceleration of 0.03 m/s and 0.15 m/s2."));
  }
  doc.requirements.push_back(req(
      "RQ2.4", Category::Reliability,
      SuccessRateParams{SuccessEvent::Grasped, 0.95,
                        std::pair<Quantity, Quantity>{liters_per_minute(2), liters_per_minute(3.2)}},
      {observation},
      "The gripper shall successfully grasp when the rate of inflation is in the "
      "range of 2-3.2 L/min."));
  doc.requirements.push_back(req(
      "RQ2.5", Category::Reliability, TrendParams{TrendEvent::Drop, 0.05, hours(0), hours(10),
                                                  hours(90), hours(100)},
      {{MethodKind::LifeCycleTest, ""}},
      "The gripper shall experience at most a 5% increase in the dropping of an "
      "item across 100 hours of operation (graceful degradation)."));
  doc.requirements.push_back(req(
      "RQ2.6", Category::Reliability, TrendParams{TrendEvent::Damage, 0.05, hours(0), hours(10),
                                                  hours(90), hours(100)},
      {{MethodKind::LifeCycleTest, ""}},
      "The gripper shall experience at most a 5% increase in the damaging of an "
      "item across 100 hours of operation (graceful degradation)."));

  // -- Adaptability ----------------------------------------------------------
  {
    Applicability app;
    app.max_size_ratio = 0.95;
    doc.requirements.push_back(req(
        "RQ3.1", Category::Adaptability, HoldDurationParams{seconds(10), 0.95},
        {repeated, observation},
        "The gripper shall hold items of different sizes up to a maximum of 95% of "
        "the opening width of the two fingers without dropping them for at least 10 "
        "seconds, 95% of the time.",
        app));
  }
  {
    Applicability app;
    app.shapes = std::vector<Shape>{Shape::Sphere, Shape::Cube, Shape::Cone, Shape::Pyramid,
                                    Shape::Cylinder};
    doc.requirements.push_back(req(
        "RQ3.2", Category::Adaptability, HoldDurationParams{seconds(10), 0.95},
        {repeated, observation},
        "The gripper shall hold items of different shapes (e.g. sphere, cube, cone, "
        "pyramid, cylinder) without dropping them for at least 10 seconds, 95% of the time.",
        app));
  }
  doc.requirements.push_back(req(
      "RQ3.3", Category::Adaptability, HoldDurationParams{seconds(10), 0.95},
      {repeated, observation},
      "The gripper shall hold items, which can be of regular or irregular shape "
      "(e.g. soft-fragile items like strawberry), without dropping them for at "
      "least 10 seconds, 95% of the time."));
  {
    Applicability app;
    app.orientation_sweep = true;
    doc.requirements.push_back(req(
        "RQ3.4", Category::Adaptability, HoldDurationParams{seconds(10), 0.95},
        {repeated, observation},
        "The gripper shall hold an item independent of its orientation without "
        "dropping it for at least 10 seconds, 95% of the time.",
        app));
  }

  // -- Safety ------------------------------------------------------------------
  doc.requirements.push_back(req(
      "RQ4.1", Category::Safety, NoCollisionParams{CollisionPredicate::ItemMotionless},
      {{MethodKind::Measurement, "vision camera"}, observation},
      "The item being gripped shall be motionless (to minimise harm) before "
      "contact with the gripper."));
  doc.requirements.push_back(req(
      "RQ4.2", Category::Safety, NoCollisionParams{CollisionPredicate::BodyClearance},
      {{MethodKind::Measurement, "force torque sensor"}},
      "The gripping system shall not collide with the item being gripped."));
  doc.requirements.push_back(req(
      "RQ4.3", Category::Safety, NoCollisionParams{CollisionPredicate::OnlyGripperContact},
      {{MethodKind::Measurement, "force torque sensor and vision camera"}},
      "The gripping system shall only make contact with the item using the gripper."));
  {
    Applicability app;
    app.classes = std::set<ItemClass>{ItemClass::HardFragile};
    ThresholdParams p;
    p.bounds = {{SignalName::GripForce, true, newtons(2)}};
    doc.requirements.push_back(req(
        "RQ4.4", Category::Safety, p, {{MethodKind::FunctionalTest, ""}},
        "When grasping a hard-fragile item (e.g. light bulb, egg), the soft actuator "
        "shall be inflated until the gripping force does not exceed 2 N.",
        app));
  }
  {
    Applicability app;
    app.classes = std::set<ItemClass>{ItemClass::SoftFragile};
    app.profile = FragilityProfile::CakeBread;
    ThresholdParams p;
    p.bounds = {{SignalName::FingertipDisplacement, true, millimeters(3)}};
    doc.requirements.push_back(req(
        "RQ4.5", Category::Safety, p, {{MethodKind::Measurement, "displacement sensor"}},
        "When grasping a soft-fragile item like cake or bread, the soft actuator "
        "shall be inflated until the fingertip displacement does not exceed 3 mm.",
        app));
  }
  {
    Applicability app;
    app.classes = std::set<ItemClass>{ItemClass::SoftFragile};
    app.profile = FragilityProfile::Berry;
    ThresholdParams p;
    p.bounds = {{SignalName::GripForce, true, newtons(1)},
                {SignalName::FingertipDisplacement, true, millimeters(1)}};
    doc.requirements.push_back(req(
        "RQ4.6", Category::Safety, p,
        {{MethodKind::FunctionalTest, ""}, {MethodKind::Measurement, "displacement sensor"}},
        "When grasping a soft-fragile item like strawberry or raspberry, the soft "
        "actuator shall be inflated until the gripping force does not exceed 1 N and "
        "the fingertip displacement does not exceed 1 mm.",
        app));
  }

  // -- Ethics (needs human review; no executable semantics) --------------------
  const VerificationMethod review{MethodKind::Observation, "human review"};
  doc.requirements.push_back(req("RQ5.1", Category::Ethics, ManualParams{}, {review},
                                 "The gripper shall be environmentally sustainable."));
  doc.requirements.push_back(req("RQ5.2", Category::Ethics, ManualParams{}, {review},
                                 "The gripper shall avoid distressing human workers."));
  doc.requirements.push_back(req("RQ5.3", Category::Ethics, ManualParams{}, {review},
                                 "The gripper shall avoid exploiting humans' trust heuristics."));
  doc.requirements.push_back(req(
      "RQ5.4", Category::Ethics, ManualParams{}, {review},
      "The gripper shall accommodate fair treatment of current human workers."));

  // -- Refined checkable forms --------------------------------------------------
  {
    // Curvature within 2% of a 0.10 m radius curve at the reference pressure.
    ProportionalityParams p;
    p.reference_pressure = psi(3.5);
    p.target_band = std::pair<Quantity, Quantity>{per_meter(9.8), per_meter(10.2)};
    doc.requirements.push_back(req(
        "RQ1.1r", Category::Predictability, p, {unit_test},
        "The fingers of the gripper shall curve within 2% of a curve of 10 cm radius "
        "when inflated."));
  }
  doc.requirements.push_back(req(
      "RQ4.2r", Category::Safety, NoCollisionParams{CollisionPredicate::BodyPositionDistinct},
      {{MethodKind::Measurement, "force torque sensor"}},
      "No part of the body of the gripping system shall have a position equal to "
      "the position of the item being grasped."));

  return doc;
}

}  // namespace gripcheck
