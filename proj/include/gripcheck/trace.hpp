// Trace schema for one pick-and-place trial: the boundary between the
// simulator (producer) and the monitor engine (consumer). The JSONL encoding
// lives in trace_jsonl.hpp; the byte-level schema is docs/trace-format.md.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gripcheck/spec_model.hpp"

namespace gripcheck {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  bool operator==(const Vec3&) const = default;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

enum class EventKind {
  TrialStart,
  PhaseStart,
  PhaseEnd,
  PumpOn,
  PumpOff,
  Sample,
  ContactMade,
  GraspEstablished,
  ItemDropped,
  ItemDamaged,
  ItemPlaced,
  Collision,
  TrialEnd,
};

inline constexpr names::Entry<EventKind> kEventKinds[] = {
    {EventKind::TrialStart, "trial_start"},
    {EventKind::PhaseStart, "phase_start"},
    {EventKind::PhaseEnd, "phase_end"},
    {EventKind::PumpOn, "pump_on"},
    {EventKind::PumpOff, "pump_off"},
    {EventKind::Sample, "sample"},
    {EventKind::ContactMade, "contact_made"},
    {EventKind::GraspEstablished, "grasp_established"},
    {EventKind::ItemDropped, "item_dropped"},
    {EventKind::ItemDamaged, "item_damaged"},
    {EventKind::ItemPlaced, "item_placed"},
    {EventKind::Collision, "collision"},
    {EventKind::TrialEnd, "trial_end"},
};
inline std::string_view to_name(EventKind k) { return names::to_name(kEventKinds, k); }

// Payload of TrialStart, duplicated on the Trace for direct access. Item
// quantities inside traces are always SI-constructed (meters, kilograms,
// newtons); the JSONL codec round-trips them exactly under that convention.
struct TrialMeta {
  std::uint32_t trial_id = 0;
  ItemSpec item;
  double operating_hours = 0.0;
  std::uint64_t rng_seed = 0;
  double opening_width_m = 0.08;
  double sample_period_s = 0.01;

  bool operator==(const TrialMeta&) const = default;
};

struct PhasePayload {
  Phase phase = Phase::PreGrasp;

  bool operator==(const PhasePayload&) const = default;
};

struct PumpOnPayload {
  double target_pa = 0.0;
  double flow_m3s = 0.0;

  bool operator==(const PumpOnPayload&) const = default;
};

// One fixed-rate sensor snapshot. gripper_body_positions_m[0] is the palm
// (the only non-finger segment); the remaining entries are fingertips.
struct SamplePayload {
  double pressure_pa = 0.0;
  double flow_m3s = 0.0;
  std::array<double, 2> curvature_per_m{0.0, 0.0};
  double fingertip_displacement_m = 0.0;
  double grip_force_n = 0.0;
  double gripper_velocity_ms = 0.0;
  double gripper_acceleration_ms2 = 0.0;
  std::vector<Vec3> gripper_body_positions_m;
  Vec3 item_position_m;
  double item_velocity_ms = 0.0;

  bool operator==(const SamplePayload&) const = default;
};

struct DropPayload {
  Phase phase = Phase::Translation;

  bool operator==(const DropPayload&) const = default;
};

struct DamagePayload {
  std::string mode;  // "force" or "displacement"
  double value = 0.0;
  double limit = 0.0;

  bool operator==(const DamagePayload&) const = default;
};

struct CollisionPayload {
  std::string segment;

  bool operator==(const CollisionPayload&) const = default;
};

using EventPayload = std::variant<std::monostate, TrialMeta, PhasePayload, PumpOnPayload,
                                  SamplePayload, DropPayload, DamagePayload, CollisionPayload>;

struct TraceEvent {
  double t = 0.0;
  EventKind kind = EventKind::TrialStart;
  EventPayload payload;
  // Source line when read from a file (0 when built in memory). Not part of
  // the event's identity.
  int line = 0;

  bool operator==(const TraceEvent& o) const {
    return t == o.t && kind == o.kind && payload == o.payload;
  }
};

struct Trace {
  std::vector<TraceEvent> events;
  TrialMeta meta;

  bool operator==(const Trace& o) const { return events == o.events && meta == o.meta; }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct TraceIssue {
  int event_index = -1;  // -1 for trace-level issues
  std::string message;
};

namespace trace_detail {

inline bool payload_matches(EventKind k, const EventPayload& p) {
  switch (k) {
    case EventKind::TrialStart: return std::holds_alternative<TrialMeta>(p);
    case EventKind::PhaseStart:
    case EventKind::PhaseEnd: return std::holds_alternative<PhasePayload>(p);
    case EventKind::PumpOn: return std::holds_alternative<PumpOnPayload>(p);
    case EventKind::Sample: return std::holds_alternative<SamplePayload>(p);
    case EventKind::ItemDropped: return std::holds_alternative<DropPayload>(p);
    case EventKind::ItemDamaged: return std::holds_alternative<DamagePayload>(p);
    case EventKind::Collision: return std::holds_alternative<CollisionPayload>(p);
    default: return std::holds_alternative<std::monostate>(p);
  }
}

inline bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace trace_detail

inline std::vector<TraceIssue> validate_trace(const Trace& trace) {
  std::vector<TraceIssue> issues;
  const auto& ev = trace.events;
  if (ev.empty()) {
    issues.push_back({-1, "trace has no events"});
    return issues;
  }
  if (ev.front().kind != EventKind::TrialStart)
    issues.push_back({0, "first event must be trial_start"});
  if (ev.back().kind != EventKind::TrialEnd)
    issues.push_back({int(ev.size()) - 1, "last event must be trial_end"});
  if (trace.meta.sample_period_s <= 0) issues.push_back({-1, "sample period must be positive"});
  if (trace.meta.opening_width_m <= 0) issues.push_back({-1, "opening width must be positive"});
  if (trace.meta.item.width.si() <= 0) issues.push_back({-1, "item width must be positive"});
  if (trace.meta.item.mass.si() <= 0) issues.push_back({-1, "item mass must be positive"});

  int n_start = 0, n_end = 0, n_drop = 0, n_place = 0, n_contact = 0, n_grasp = 0, n_damage = 0;
  bool contact_seen = false, grasp_seen = false;
  double prev_t = 0.0;
  double prev_sample_t = -1.0;
  int next_phase = 0;   // index into phase order
  bool phase_open = false;
  Phase open_phase = Phase::PreGrasp;

  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto& e = ev[i];
    const int idx = int(i);
    if (!std::isfinite(e.t) || e.t < 0) issues.push_back({idx, "timestamp must be finite and >= 0"});
    if (i > 0 && e.t < prev_t) issues.push_back({idx, "non-monotone t"});
    prev_t = e.t;
    if (!trace_detail::payload_matches(e.kind, e.payload))
      issues.push_back({idx, "payload does not match event kind"});

    switch (e.kind) {
      case EventKind::TrialStart:
        if (++n_start > 1) issues.push_back({idx, "duplicate trial_start"});
        if (i != 0) issues.push_back({idx, "trial_start not first"});
        break;
      case EventKind::TrialEnd:
        if (++n_end > 1) issues.push_back({idx, "duplicate trial_end"});
        if (i + 1 != ev.size()) issues.push_back({idx, "events after trial_end"});
        break;
      case EventKind::PhaseStart: {
        if (const auto* p = std::get_if<PhasePayload>(&e.payload)) {
          if (phase_open) issues.push_back({idx, "phase_start while a phase is open"});
          int want = static_cast<int>(p->phase);
          if (want < next_phase) issues.push_back({idx, "phase out of order or repeated"});
          next_phase = want;
          phase_open = true;
          open_phase = p->phase;
        }
        break;
      }
      case EventKind::PhaseEnd: {
        if (const auto* p = std::get_if<PhasePayload>(&e.payload)) {
          if (!phase_open || p->phase != open_phase)
            issues.push_back({idx, "phase_end without matching phase_start"});
          phase_open = false;
          next_phase = static_cast<int>(p->phase) + 1;
        }
        break;
      }
      case EventKind::Sample: {
        if (const auto* s = std::get_if<SamplePayload>(&e.payload)) {
          if (prev_sample_t >= 0 &&
              std::abs((e.t - prev_sample_t) - trace.meta.sample_period_s) > 1e-9)
            issues.push_back({idx, "sample period deviates from declared sample_period_s"});
          prev_sample_t = e.t;
          bool ok = std::isfinite(s->pressure_pa) && s->pressure_pa >= 0 &&
                    std::isfinite(s->flow_m3s) && std::isfinite(s->curvature_per_m[0]) &&
                    std::isfinite(s->curvature_per_m[1]) &&
                    std::isfinite(s->fingertip_displacement_m) && std::isfinite(s->grip_force_n) &&
                    std::isfinite(s->gripper_velocity_ms) &&
                    std::isfinite(s->gripper_acceleration_ms2) && std::isfinite(s->item_velocity_ms) &&
                    trace_detail::finite(s->item_position_m);
          for (const auto& v : s->gripper_body_positions_m) ok = ok && trace_detail::finite(v);
          if (s->gripper_body_positions_m.empty())
            issues.push_back({idx, "sample has no gripper body positions"});
          if (!ok) issues.push_back({idx, "sample contains non-finite or negative-pressure values"});
        }
        break;
      }
      case EventKind::ContactMade:
        if (++n_contact > 1) issues.push_back({idx, "duplicate contact_made"});
        contact_seen = true;
        break;
      case EventKind::GraspEstablished:
        if (++n_grasp > 1) issues.push_back({idx, "duplicate grasp_established"});
        if (!contact_seen) issues.push_back({idx, "grasp_established before contact_made"});
        grasp_seen = true;
        break;
      case EventKind::ItemDropped:
        ++n_drop;
        if (!grasp_seen) issues.push_back({idx, "item_dropped before grasp_established"});
        break;
      case EventKind::ItemPlaced: ++n_place; break;
      case EventKind::ItemDamaged:
        if (++n_damage > 1) issues.push_back({idx, "duplicate item_damaged"});
        break;
      default: break;
    }
  }
  if (n_start == 0) issues.push_back({-1, "missing trial_start"});
  if (n_end == 0) issues.push_back({-1, "missing trial_end"});
  if (n_drop > 1) issues.push_back({-1, "more than one item_dropped"});
  if (n_place > 1) issues.push_back({-1, "more than one item_placed"});
  if (n_drop > 0 && n_place > 0) issues.push_back({-1, "conflicting outcomes: dropped and placed"});
  if (phase_open) issues.push_back({-1, "unclosed phase"});
  if (n_start == 1) {
    if (const auto* m = std::get_if<TrialMeta>(&ev.front().payload)) {
      if (!(*m == trace.meta)) issues.push_back({0, "trial_start payload disagrees with trace meta"});
    }
  }
  return issues;
}

inline bool trace_valid(const Trace& t) { return validate_trace(t).empty(); }

}  // namespace gripcheck
