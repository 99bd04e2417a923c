// Domain model: items, verification methods, requirement kinds and the
// specification document that the DSL, the monitors and the report share.
#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gripcheck/quantity.hpp"

namespace gripcheck {

// ---------------------------------------------------------------------------
// Items
// ---------------------------------------------------------------------------

enum class ItemClass { SoftFragile, SoftNonFragile, HardFragile, HardNonFragile };
enum class Shape { Sphere, Cube, Cone, Pyramid, Cylinder, Irregular };

constexpr bool is_regular(Shape s) { return s != Shape::Irregular; }
constexpr bool is_soft(ItemClass c) {
  return c == ItemClass::SoftFragile || c == ItemClass::SoftNonFragile;
}

struct ItemSpec {
  ItemClass item_class = ItemClass::HardNonFragile;
  Shape shape = Shape::Sphere;
  Quantity width = meters(0.04);
  Quantity mass = kilograms(0.05);
  double orientation_rad = 0.0;
  // Fragile profiles are distinguished by which limits they carry:
  // hard-fragile has a force limit, the cake/bread profile a displacement
  // limit, the berry profile both.
  std::optional<Quantity> fragility_force_limit;
  std::optional<Quantity> fragility_displacement_limit;

  bool operator==(const ItemSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Verification methods (traceability tags)
// ---------------------------------------------------------------------------

enum class MethodKind {
  Observation,
  UnitTest,
  EdgeCaseTest,
  LifeCycleTest,
  RepeatedTest,
  Measurement,
  FunctionalTest,
  ByDesign,
};

struct VerificationMethod {
  MethodKind kind = MethodKind::Observation;
  std::string detail;  // e.g. the sensor used for a measurement

  bool operator==(const VerificationMethod&) const = default;
};

// ---------------------------------------------------------------------------
// Requirements
// ---------------------------------------------------------------------------

enum class Category { Predictability, Reliability, Adaptability, Safety, Ethics, Regulation };

enum class ReqKind {
  Range,
  Threshold,
  EventResponse,
  HoldDuration,
  SuccessRate,
  Trend,
  Proportionality,
  NoCollision,
  Manual,
};

// Pick-and-place pipeline phases, in traversal order.
enum class Phase { PreGrasp, Ascension, Translation, Descension };

enum class SignalName {
  Pressure,
  Flow,
  Curvature,
  FingertipDisplacement,
  GripForce,
  Velocity,
  Acceleration,
};

constexpr Dimension signal_dimension(SignalName s) {
  switch (s) {
    case SignalName::Pressure: return Dimension::Pressure;
    case SignalName::Flow: return Dimension::FlowRate;
    case SignalName::Curvature: return Dimension::Curvature;
    case SignalName::FingertipDisplacement: return Dimension::Length;
    case SignalName::GripForce: return Dimension::Force;
    case SignalName::Velocity: return Dimension::Speed;
    case SignalName::Acceleration: return Dimension::Acceleration;
  }
  return Dimension::Scalar;
}

// Which samples a range/threshold comparison applies to. "Filling" is pump on
// with positive flow, "Plateau" is pump on with the chamber full, "GraspHeld"
// runs from grasp establishment until venting, drop or trace end.
enum class SampleWindow { Always, Filling, Plateau, GraspHeld };

enum class PumpTrigger { PumpOn, PumpOff };
enum class SuccessEvent { Placed, Grasped, Undamaged };
enum class TrendEvent { Drop, Damage };
enum class CollisionPredicate {
  ItemMotionless,       // item velocity zero before first contact
  BodyClearance,        // no segment reaches the item surface before contact
  BodyPositionDistinct, // no segment position ever equals the item position
  OnlyGripperContact,   // non-finger segments never reach the item surface
};

struct SignalBound {
  SignalName signal = SignalName::GripForce;
  bool is_upper = true;  // max ... vs min ...
  Quantity bound;

  bool operator==(const SignalBound&) const = default;
};

struct RangeParams {
  SignalName signal = SignalName::Pressure;
  Quantity lo, hi;
  SampleWindow window = SampleWindow::Always;
  std::optional<Phase> phase;

  bool operator==(const RangeParams&) const = default;
};

struct ThresholdParams {
  std::vector<SignalBound> bounds;  // conjunction
  SampleWindow window = SampleWindow::Always;
  std::optional<Phase> phase;

  bool operator==(const ThresholdParams&) const = default;
};

struct EventResponseParams {
  PumpTrigger trigger = PumpTrigger::PumpOn;
  Quantity response_window = seconds(2.0);

  bool operator==(const EventResponseParams&) const = default;
};

struct HoldDurationParams {
  Quantity hold = seconds(10.0);
  std::optional<double> fraction;  // present => statistical aggregation

  bool operator==(const HoldDurationParams&) const = default;
};

struct SuccessRateParams {
  SuccessEvent event = SuccessEvent::Placed;
  double fraction = 0.95;
  // Conditional requirements ("shall grasp when flow is in range") restrict
  // applicability to trials operated inside this interval.
  std::optional<std::pair<Quantity, Quantity>> flow_condition;

  bool operator==(const SuccessRateParams&) const = default;
};

struct TrendParams {
  TrendEvent event = TrendEvent::Drop;
  double max_increase = 0.05;  // absolute percentage points
  Quantity baseline_lo = hours(0), baseline_hi = hours(10);
  Quantity final_lo = hours(90), final_hi = hours(100);

  bool operator==(const TrendParams&) const = default;
};

struct ProportionalityParams {
  // Linearity form (fit quality), used when set:
  std::optional<double> max_rel_residual;
  std::optional<double> max_intercept_frac;
  // Point-prediction form: fitted curvature at reference_pressure must land
  // inside target_band.
  std::optional<Quantity> reference_pressure;
  std::optional<std::pair<Quantity, Quantity>> target_band;

  bool operator==(const ProportionalityParams&) const = default;
};

struct NoCollisionParams {
  CollisionPredicate predicate = CollisionPredicate::BodyClearance;

  bool operator==(const NoCollisionParams&) const = default;
};

struct ManualParams {
  bool operator==(const ManualParams&) const = default;
};

using ReqParams = std::variant<RangeParams, ThresholdParams, EventResponseParams,
                               HoldDurationParams, SuccessRateParams, TrendParams,
                               ProportionalityParams, NoCollisionParams, ManualParams>;

constexpr ReqKind kind_of_params_index(std::size_t i) {
  constexpr ReqKind kinds[] = {ReqKind::Range,       ReqKind::Threshold,
                               ReqKind::EventResponse, ReqKind::HoldDuration,
                               ReqKind::SuccessRate, ReqKind::Trend,
                               ReqKind::Proportionality, ReqKind::NoCollision,
                               ReqKind::Manual};
  return kinds[i];
}

// Fragile sub-profiles within the soft-fragile class.
enum class FragilityProfile { CakeBread, Berry };

struct Applicability {
  std::optional<std::set<ItemClass>> classes;
  std::optional<FragilityProfile> profile;
  std::optional<std::vector<Shape>> shapes;
  std::optional<double> max_size_ratio;  // item width / opening width
  bool orientation_sweep = false;

  bool any() const {
    return classes || profile || shapes || max_size_ratio || orientation_sweep;
  }
  bool operator==(const Applicability&) const = default;
};

struct Requirement {
  std::string id;
  Category category = Category::Predictability;
  ReqParams params = ManualParams{};
  Applicability applicability;
  std::vector<VerificationMethod> methods;
  std::string text;

  ReqKind kind() const { return kind_of_params_index(params.index()); }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&params);
  }

  bool operator==(const Requirement&) const = default;
};

struct SpecificationDoc {
  std::string name;
  std::vector<Requirement> requirements;
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered

  const Requirement* find(std::string_view id) const {
    for (const auto& r : requirements)
      if (r.id == id) return &r;
    return nullptr;
  }
  const Requirement& get(std::string_view id) const {
    const Requirement* r = find(id);
    if (!r) throw std::out_of_range("no requirement with id " + std::string(id));
    return *r;
  }

  bool operator==(const SpecificationDoc&) const = default;
};

// ---------------------------------------------------------------------------
// Name tables (shared by the DSL, JSONL codec and report)
// ---------------------------------------------------------------------------

namespace names {

template <typename E>
struct Entry {
  E value;
  std::string_view name;
};

inline constexpr Entry<ItemClass> kItemClasses[] = {
    {ItemClass::SoftFragile, "soft_fragile"},
    {ItemClass::SoftNonFragile, "soft_non_fragile"},
    {ItemClass::HardFragile, "hard_fragile"},
    {ItemClass::HardNonFragile, "hard_non_fragile"},
};
inline constexpr Entry<Shape> kShapes[] = {
    {Shape::Sphere, "sphere"},     {Shape::Cube, "cube"},
    {Shape::Cone, "cone"},         {Shape::Pyramid, "pyramid"},
    {Shape::Cylinder, "cylinder"}, {Shape::Irregular, "irregular"},
};
inline constexpr Entry<Category> kCategories[] = {
    {Category::Predictability, "predictability"},
    {Category::Reliability, "reliability"},
    {Category::Adaptability, "adaptability"},
    {Category::Safety, "safety"},
    {Category::Ethics, "ethics"},
    {Category::Regulation, "regulation"},
};
inline constexpr Entry<ReqKind> kKinds[] = {
    {ReqKind::Range, "range"},
    {ReqKind::Threshold, "threshold"},
    {ReqKind::EventResponse, "event-response"},
    {ReqKind::HoldDuration, "hold-duration"},
    {ReqKind::SuccessRate, "success-rate"},
    {ReqKind::Trend, "trend"},
    {ReqKind::Proportionality, "proportionality"},
    {ReqKind::NoCollision, "no-collision"},
    {ReqKind::Manual, "manual"},
};
inline constexpr Entry<MethodKind> kMethods[] = {
    {MethodKind::Observation, "observation"},
    {MethodKind::UnitTest, "unit-test"},
    {MethodKind::EdgeCaseTest, "edge-case-test"},
    {MethodKind::LifeCycleTest, "life-cycle-test"},
    {MethodKind::RepeatedTest, "repeated-test"},
    {MethodKind::Measurement, "measurement"},
    {MethodKind::FunctionalTest, "functional-test"},
    {MethodKind::ByDesign, "by-design"},
};
inline constexpr Entry<SignalName> kSignals[] = {
    {SignalName::Pressure, "pressure"},
    {SignalName::Flow, "flow"},
    {SignalName::Curvature, "curvature"},
    {SignalName::FingertipDisplacement, "fingertip-displacement"},
    {SignalName::GripForce, "grip-force"},
    {SignalName::Velocity, "velocity"},
    {SignalName::Acceleration, "acceleration"},
};
inline constexpr Entry<SampleWindow> kWindows[] = {
    {SampleWindow::Always, "always"},
    {SampleWindow::Filling, "filling"},
    {SampleWindow::Plateau, "plateau"},
    {SampleWindow::GraspHeld, "grasp-held"},
};
inline constexpr Entry<Phase> kPhases[] = {
    {Phase::PreGrasp, "pre_grasp"},
    {Phase::Ascension, "ascension"},
    {Phase::Translation, "translation"},
    {Phase::Descension, "descension"},
};
inline constexpr Entry<PumpTrigger> kTriggers[] = {
    {PumpTrigger::PumpOn, "pump-on"},
    {PumpTrigger::PumpOff, "pump-off"},
};
inline constexpr Entry<SuccessEvent> kSuccessEvents[] = {
    {SuccessEvent::Placed, "placed"},
    {SuccessEvent::Grasped, "grasped"},
    {SuccessEvent::Undamaged, "undamaged"},
};
inline constexpr Entry<TrendEvent> kTrendEvents[] = {
    {TrendEvent::Drop, "drop"},
    {TrendEvent::Damage, "damage"},
};
inline constexpr Entry<CollisionPredicate> kCollisionPredicates[] = {
    {CollisionPredicate::ItemMotionless, "item-motionless"},
    {CollisionPredicate::BodyClearance, "body-clearance"},
    {CollisionPredicate::BodyPositionDistinct, "body-position-distinct"},
    {CollisionPredicate::OnlyGripperContact, "only-gripper-contact"},
};
inline constexpr Entry<FragilityProfile> kProfiles[] = {
    {FragilityProfile::CakeBread, "cake-bread"},
    {FragilityProfile::Berry, "berry"},
};

template <typename E, std::size_t N>
constexpr std::string_view to_name(const Entry<E> (&table)[N], E v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

template <typename E, std::size_t N>
constexpr std::optional<E> from_name(const Entry<E> (&table)[N], std::string_view s) {
  for (const auto& e : table)
    if (e.name == s) return e.value;
  return std::nullopt;
}

}  // namespace names

inline std::string_view to_name(ItemClass v) { return names::to_name(names::kItemClasses, v); }
inline std::string_view to_name(Shape v) { return names::to_name(names::kShapes, v); }
inline std::string_view to_name(Category v) { return names::to_name(names::kCategories, v); }
inline std::string_view to_name(ReqKind v) { return names::to_name(names::kKinds, v); }
inline std::string_view to_name(MethodKind v) { return names::to_name(names::kMethods, v); }
inline std::string_view to_name(SignalName v) { return names::to_name(names::kSignals, v); }
inline std::string_view to_name(SampleWindow v) { return names::to_name(names::kWindows, v); }
inline std::string_view to_name(Phase v) { return names::to_name(names::kPhases, v); }
inline std::string_view to_name(PumpTrigger v) { return names::to_name(names::kTriggers, v); }
inline std::string_view to_name(SuccessEvent v) { return names::to_name(names::kSuccessEvents, v); }
inline std::string_view to_name(TrendEvent v) { return names::to_name(names::kTrendEvents, v); }
inline std::string_view to_name(CollisionPredicate v) {
  return names::to_name(names::kCollisionPredicates, v);
}
inline std::string_view to_name(FragilityProfile v) { return names::to_name(names::kProfiles, v); }

// ---------------------------------------------------------------------------
// Well-formedness validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string requirement_id;  // empty for document-level rules
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

namespace detail {

inline void check_quantity(const Quantity& q, const std::string& id, const char* what,
                           std::vector<Violation>& out) {
  if (!q.finite())
    out.push_back({id, "nonfinite-quantity", std::string(what) + " is not finite"});
}

inline void check_dimension(const Quantity& q, Dimension want, const std::string& id,
                            const char* what, std::vector<Violation>& out) {
  if (q.dimension() != want)
    out.push_back({id, "dimension-mismatch",
                   std::string(what) + " has unit '" + std::string(unit_name(q.unit)) +
                       "' incompatible with the signal"});
}

}  // namespace detail

// Returns the list of broken well-formedness rules; empty means the document
// satisfies every structural invariant. Violations are data, not errors.
inline std::vector<Violation> validate_doc(const SpecificationDoc& doc) {
  std::vector<Violation> out;
  if (doc.requirements.empty()) {
    out.push_back({"", "empty-document", "specification has no requirements"});
    return out;
  }

  std::set<std::string> seen;
  for (const auto& r : doc.requirements) {
    if (r.id.empty()) out.push_back({r.id, "empty-id", "requirement id is empty"});
    if (!seen.insert(r.id).second)
      out.push_back({r.id, "duplicate-id", "id '" + r.id + "' appears more than once"});
    if (r.methods.empty())
      out.push_back({r.id, "no-method", "requirement carries no verification method"});

    if (const auto* p = r.as<RangeParams>()) {
      detail::check_quantity(p->lo, r.id, "range lower bound", out);
      detail::check_quantity(p->hi, r.id, "range upper bound", out);
      detail::check_dimension(p->lo, signal_dimension(p->signal), r.id, "range lower bound", out);
      detail::check_dimension(p->hi, signal_dimension(p->signal), r.id, "range upper bound", out);
      if (p->lo.si() > p->hi.si())
        out.push_back({r.id, "empty-interval", "range bounds are inverted"});
    } else if (const auto* p = r.as<ThresholdParams>()) {
      if (p->bounds.empty())
        out.push_back({r.id, "no-bounds", "threshold requirement has no signal bounds"});
      for (const auto& b : p->bounds) {
        detail::check_quantity(b.bound, r.id, "threshold bound", out);
        detail::check_dimension(b.bound, signal_dimension(b.signal), r.id, "threshold bound", out);
      }
    } else if (const auto* p = r.as<EventResponseParams>()) {
      detail::check_quantity(p->response_window, r.id, "response window", out);
      if (p->response_window.si() <= 0)
        out.push_back({r.id, "nonpositive-duration", "response window must be positive"});
    } else if (const auto* p = r.as<HoldDurationParams>()) {
      detail::check_quantity(p->hold, r.id, "hold duration", out);
      if (p->hold.si() <= 0)
        out.push_back({r.id, "nonpositive-duration", "hold duration must be positive"});
      if (p->fraction && (*p->fraction <= 0.0 || *p->fraction > 1.0))
        out.push_back({r.id, "bound-out-of-range",
                       "success fraction " + format_double(*p->fraction) + " outside (0,1]"});
    } else if (const auto* p = r.as<SuccessRateParams>()) {
      if (p->fraction <= 0.0 || p->fraction > 1.0)
        out.push_back({r.id, "bound-out-of-range",
                       "success fraction " + format_double(p->fraction) + " outside (0,1]"});
      if (p->flow_condition && p->flow_condition->first.si() > p->flow_condition->second.si())
        out.push_back({r.id, "empty-interval", "flow condition bounds are inverted"});
    } else if (const auto* p = r.as<TrendParams>()) {
      if (p->baseline_lo.si() > p->baseline_hi.si() || p->final_lo.si() > p->final_hi.si())
        out.push_back({r.id, "empty-interval", "trend window bounds are inverted"});
      if (p->baseline_hi.si() > p->final_lo.si())
        out.push_back({r.id, "overlapping-windows", "baseline window must precede final window"});
      if (!(p->max_increase >= 0))
        out.push_back({r.id, "bound-out-of-range", "max increase must be non-negative"});
    } else if (const auto* p = r.as<ProportionalityParams>()) {
      if (p->target_band && p->target_band->first.si() > p->target_band->second.si())
        out.push_back({r.id, "empty-interval", "target band bounds are inverted"});
      if (bool(p->reference_pressure) != bool(p->target_band))
        out.push_back({r.id, "incomplete-params",
                       "reference pressure and target band must be given together"});
      if (!p->reference_pressure && !p->max_rel_residual)
        out.push_back({r.id, "incomplete-params",
                       "proportionality needs a residual limit or a reference point"});
    }
  }
  return out;
}

}  // namespace gripcheck
