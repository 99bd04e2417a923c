// Monitor engine: compiles each requirement into a checker over traces,
// aggregates per-trial results into statistical verdicts and carries the
// evidence that pinpoints violations.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gripcheck/catalog.hpp"
#include "gripcheck/stats.hpp"
#include "gripcheck/trace.hpp"

namespace gripcheck {

// Curvature below this fraction of the trace peak counts as "straight".
inline constexpr double kStraightnessFraction = 0.05;
// Two positions closer than this are "equal" for collision predicates.
inline constexpr double kPositionEqualTol = 1e-6;
// Item velocity above this breaks the motionless predicate.
inline constexpr double kMotionlessTol = 1e-9;

enum class TrialOutcome { Satisfied, Violated, NotApplicable };

struct EvidenceItem {
  double t = 0.0;
  int line = 0;  // source line in the trace file, when known
  std::string message;

  bool operator==(const EvidenceItem&) const = default;
};

struct TrialResult {
  std::string requirement_id;
  std::uint32_t trial_id = 0;
  TrialOutcome outcome = TrialOutcome::NotApplicable;
  std::vector<EvidenceItem> evidence;

  bool operator==(const TrialResult&) const = default;
};

class MonitorError : public std::runtime_error {
 public:
  enum class Code { UnsupportedKind, MissingSignal, MixedRequirementIds, DegenerateData };

  MonitorError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

enum class VerdictStatus { Pass, Fail, ByDesign, NeedsHumanReview, InsufficientData };

inline constexpr names::Entry<VerdictStatus> kVerdictNames[] = {
    {VerdictStatus::Pass, "pass"},
    {VerdictStatus::Fail, "fail"},
    {VerdictStatus::ByDesign, "by-design"},
    {VerdictStatus::NeedsHumanReview, "needs-human-review"},
    {VerdictStatus::InsufficientData, "insufficient-data"},
};
inline std::string_view to_name(VerdictStatus v) { return names::to_name(kVerdictNames, v); }

struct Verdict {
  std::string requirement_id;
  VerdictStatus status = VerdictStatus::InsufficientData;
  int n_applicable = 0;
  int n_satisfied = 0;
  double point_estimate = 0.0;
  double ci_lower_95 = 0.0;
  std::vector<std::pair<std::string, double>> detail;  // kind-specific numbers
  std::vector<std::string> notes;

  bool operator==(const Verdict&) const = default;
};

// ---------------------------------------------------------------------------
// Trace digest
// ---------------------------------------------------------------------------

namespace monitor_detail {

struct SampleRef {
  double t;
  int line;
  const SamplePayload* s;
};

struct PhaseSpan {
  Phase phase;
  double start;
  double end;
};

// Everything the checkers need, extracted in one pass.
struct TraceDigest {
  const Trace* trace = nullptr;
  std::vector<SampleRef> samples;
  std::vector<PhaseSpan> phases;
  std::vector<std::pair<double, const PumpOnPayload*>> pump_ons;
  std::vector<double> pump_offs;
  std::optional<double> t_contact;
  std::optional<double> t_grasp;
  std::optional<double> t_drop;
  std::optional<double> t_place;
  std::vector<const TraceEvent*> damage_events;
  const TraceEvent* drop_event = nullptr;
  double t_end = 0.0;
  double curvature_peak = 0.0;

  static TraceDigest build(const Trace& trace) {
    TraceDigest d;
    d.trace = &trace;
    std::optional<std::pair<Phase, double>> open;
    for (const auto& e : trace.events) {
      d.t_end = e.t;
      switch (e.kind) {
        case EventKind::Sample: {
          const auto* s = std::get_if<SamplePayload>(&e.payload);
          if (s) {
            d.samples.push_back({e.t, e.line, s});
            d.curvature_peak = std::max(
                d.curvature_peak, std::max(s->curvature_per_m[0], s->curvature_per_m[1]));
          }
          break;
        }
        case EventKind::PhaseStart:
          if (const auto* p = std::get_if<PhasePayload>(&e.payload)) open = {{p->phase, e.t}};
          break;
        case EventKind::PhaseEnd:
          if (open) {
            d.phases.push_back({open->first, open->second, e.t});
            open.reset();
          }
          break;
        case EventKind::PumpOn:
          if (const auto* p = std::get_if<PumpOnPayload>(&e.payload)) d.pump_ons.push_back({e.t, p});
          break;
        case EventKind::PumpOff: d.pump_offs.push_back(e.t); break;
        case EventKind::ContactMade:
          if (!d.t_contact) d.t_contact = e.t;
          break;
        case EventKind::GraspEstablished:
          if (!d.t_grasp) d.t_grasp = e.t;
          break;
        case EventKind::ItemDropped:
          if (!d.t_drop) {
            d.t_drop = e.t;
            d.drop_event = &e;
          }
          break;
        case EventKind::ItemPlaced:
          if (!d.t_place) d.t_place = e.t;
          break;
        case EventKind::ItemDamaged: d.damage_events.push_back(&e); break;
        default: break;
      }
    }
    if (open) d.phases.push_back({open->first, open->second, d.t_end});
    return d;
  }

  bool pump_on_at(double t) const {
    bool on = false;
    std::size_t i = 0, j = 0;
    // Events are time-ordered; replay the switch state up to t.
    while (true) {
      double next_on = i < pump_ons.size() ? pump_ons[i].first : 1e300;
      double next_off = j < pump_offs.size() ? pump_offs[j] : 1e300;
      double next = std::min(next_on, next_off);
      if (next > t) break;
      on = next_on <= next_off;
      if (next_on <= next_off)
        ++i;
      else
        ++j;
    }
    return on;
  }

  std::optional<PhaseSpan> phase_span(Phase p) const {
    for (const auto& ps : phases)
      if (ps.phase == p) return ps;
    return std::nullopt;
  }

  // The instant the grasp stops being held: drop, venting or end of trace.
  double grasp_hold_end() const {
    double end = t_end;
    if (t_drop) end = std::min(end, *t_drop);
    if (t_grasp) {
      for (double off : pump_offs)
        if (off >= *t_grasp) {
          end = std::min(end, off);
          break;
        }
    }
    return end;
  }

  bool in_window(const SampleRef& s, SampleWindow w) const {
    switch (w) {
      case SampleWindow::Always: return true;
      case SampleWindow::Filling: return s.s->flow_m3s > 0.0 && pump_on_at(s.t);
      case SampleWindow::Plateau: return s.s->flow_m3s == 0.0 && pump_on_at(s.t);
      case SampleWindow::GraspHeld:
        return t_grasp && s.t >= *t_grasp && s.t < grasp_hold_end();
    }
    return false;
  }

  bool in_phase(const SampleRef& s, Phase p) const {
    auto ps = phase_span(p);
    // Boundary samples belong to the newly started phase.
    return ps && s.t >= ps->start && s.t < ps->end;
  }
};

inline double sample_signal(const SamplePayload& s, SignalName sig) {
  switch (sig) {
    case SignalName::Pressure: return s.pressure_pa;
    case SignalName::Flow: return s.flow_m3s;
    case SignalName::Curvature: return std::max(s.curvature_per_m[0], s.curvature_per_m[1]);
    case SignalName::FingertipDisplacement: return s.fingertip_displacement_m;
    case SignalName::GripForce: return s.grip_force_n;
    case SignalName::Velocity: return s.gripper_velocity_ms;
    case SignalName::Acceleration: return s.gripper_acceleration_ms2;
  }
  throw MonitorError(MonitorError::Code::MissingSignal, "unknown signal");
}

inline bool fragility_profile_matches(const ItemSpec& item, FragilityProfile p) {
  const bool has_force = item.fragility_force_limit.has_value();
  const bool has_disp = item.fragility_displacement_limit.has_value();
  switch (p) {
    case FragilityProfile::CakeBread: return has_disp && !has_force;
    case FragilityProfile::Berry: return has_disp && has_force;
  }
  return false;
}

inline bool applicable_to(const Requirement& req, const TrialMeta& meta) {
  const auto& a = req.applicability;
  if (a.classes && !a.classes->count(meta.item.item_class)) return false;
  if (a.profile && !fragility_profile_matches(meta.item, *a.profile)) return false;
  if (a.shapes &&
      std::find(a.shapes->begin(), a.shapes->end(), meta.item.shape) == a.shapes->end())
    return false;
  if (a.max_size_ratio &&
      meta.item.width.si() > *a.max_size_ratio * meta.opening_width_m + 1e-12)
    return false;
  return true;
}

}  // namespace monitor_detail

// ---------------------------------------------------------------------------
// Proportionality fit
// ---------------------------------------------------------------------------

struct ProportionalityFit {
  double slope = 0.0;           // (1/m) per Pa
  double intercept = 0.0;       // 1/m
  double max_rel_residual = 0.0;  // relative to the curvature span of the fit
  double curvature_max = 0.0;
  int n_samples = 0;
};

// Least-squares curvature-vs-pressure over the free-inflation samples
// (pump on, positive flow, before first contact). Throws DegenerateData when
// fewer than 10 samples or no pressure spread is available.
inline ProportionalityFit fit_proportionality(const Trace& trace) {
  using namespace monitor_detail;
  TraceDigest d = TraceDigest::build(trace);
  std::vector<std::pair<double, double>> pts;  // (pressure, curvature)
  for (const auto& s : d.samples) {
    if (d.t_contact && s.t >= *d.t_contact) break;
    if (!d.in_window(s, SampleWindow::Filling)) continue;
    const double kappa = 0.5 * (s.s->curvature_per_m[0] + s.s->curvature_per_m[1]);
    pts.emplace_back(s.s->pressure_pa, kappa);
  }
  if (pts.size() < 10)
    throw MonitorError(MonitorError::Code::DegenerateData,
                       "proportionality fit needs at least 10 inflation samples, got " +
                           std::to_string(pts.size()));
  double p_lo = pts.front().first, p_hi = pts.front().first;
  for (const auto& [p, k] : pts) {
    p_lo = std::min(p_lo, p);
    p_hi = std::max(p_hi, p);
  }
  if (p_hi - p_lo <= 1e-9 * std::max(1.0, p_hi))
    throw MonitorError(MonitorError::Code::DegenerateData,
                       "proportionality fit needs pressure variation");

  double pm = 0, km = 0;
  for (const auto& [p, k] : pts) {
    pm += p;
    km += k;
  }
  pm /= double(pts.size());
  km /= double(pts.size());
  double sxx = 0, sxy = 0;
  for (const auto& [p, k] : pts) {
    sxx += (p - pm) * (p - pm);
    sxy += (p - pm) * (k - km);
  }
  ProportionalityFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = km - fit.slope * pm;
  fit.n_samples = int(pts.size());
  double k_lo = pts.front().second, k_hi = pts.front().second;
  for (const auto& [p, k] : pts) {
    k_lo = std::min(k_lo, k);
    k_hi = std::max(k_hi, k);
  }
  fit.curvature_max = k_hi;
  const double span = std::max(k_hi - k_lo, 1e-300);
  for (const auto& [p, k] : pts) {
    const double resid = std::fabs(k - (fit.slope * p + fit.intercept));
    fit.max_rel_residual = std::max(fit.max_rel_residual, resid / span);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Per-trial checking
// ---------------------------------------------------------------------------

namespace monitor_detail {

inline TrialResult make_result(const Requirement& req, const TrialMeta& meta, TrialOutcome o) {
  return {req.id, meta.trial_id, o, {}};
}

inline void add_evidence(TrialResult& r, double t, int line, std::string msg) {
  r.evidence.push_back({t, line, std::move(msg)});
}

inline TrialResult check_bounds(const Requirement& req, const TraceDigest& d,
                                const std::vector<SignalBound>& bounds, SampleWindow window,
                                std::optional<Phase> phase) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  bool any = false;
  for (const auto& s : d.samples) {
    if (!d.in_window(s, window)) continue;
    if (phase && !d.in_phase(s, *phase)) continue;
    any = true;
    for (const auto& b : bounds) {
      const double v = sample_signal(*s.s, b.signal);
      const double lim = b.bound.si();
      const bool bad = b.is_upper ? v > lim : v < lim;
      if (bad) {
        r.outcome = TrialOutcome::Violated;
        add_evidence(r, s.t, s.line,
                     std::string(to_name(b.signal)) + " = " + format_double(v) +
                         (b.is_upper ? " exceeds " : " is below ") + format_double(lim));
        return r;
      }
    }
  }
  r.outcome = any ? TrialOutcome::Satisfied : TrialOutcome::NotApplicable;
  return r;
}

inline TrialResult check_range(const Requirement& req, const TraceDigest& d,
                               const RangeParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  bool any = false;
  const double lo = p.lo.si(), hi = p.hi.si();
  for (const auto& s : d.samples) {
    if (!d.in_window(s, p.window)) continue;
    if (p.phase && !d.in_phase(s, *p.phase)) continue;
    any = true;
    const double v = sample_signal(*s.s, p.signal);
    if (v < lo || v > hi) {
      r.outcome = TrialOutcome::Violated;
      add_evidence(r, s.t, s.line,
                   std::string(to_name(p.signal)) + " = " + format_double(v) + " outside [" +
                       format_double(lo) + ", " + format_double(hi) + "]");
      return r;
    }
  }
  r.outcome = any ? TrialOutcome::Satisfied : TrialOutcome::NotApplicable;
  return r;
}

inline TrialResult check_event_response(const Requirement& req, const TraceDigest& d,
                                        const EventResponseParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  const double window = p.response_window.si();
  auto curvature = [](const SampleRef& s) {
    return std::max(s.s->curvature_per_m[0], s.s->curvature_per_m[1]);
  };

  std::vector<double> triggers;
  if (p.trigger == PumpTrigger::PumpOn)
    for (const auto& [t, _] : d.pump_ons) triggers.push_back(t);
  else
    triggers = d.pump_offs;
  if (triggers.empty()) return r;

  bool judged = false;
  for (double t0 : triggers) {
    std::vector<const SampleRef*> win;
    for (const auto& s : d.samples)
      if (s.t >= t0 && s.t <= t0 + window) win.push_back(&s);
    if (win.size() < 2) continue;  // window truncated; nothing to judge
    judged = true;

    if (p.trigger == PumpTrigger::PumpOn) {
      for (std::size_t i = 1; i < win.size(); ++i) {
        if (curvature(*win[i]) < curvature(*win[i - 1]) - 1e-12) {
          r.outcome = TrialOutcome::Violated;
          add_evidence(r, win[i]->t, win[i]->line, "curvature decreased while inflating");
          return r;
        }
      }
      if (!(curvature(*win.back()) > curvature(*win.front()))) {
        r.outcome = TrialOutcome::Violated;
        add_evidence(r, win.back()->t, win.back()->line,
                     "curvature did not increase within " + format_double(window) +
                         " s of pump-on");
        return r;
      }
    } else {
      const double threshold = kStraightnessFraction * d.curvature_peak;
      for (std::size_t i = 1; i < win.size(); ++i) {
        if (curvature(*win[i]) > curvature(*win[i - 1]) + 1e-12) {
          r.outcome = TrialOutcome::Violated;
          add_evidence(r, win[i]->t, win[i]->line, "curvature increased while venting");
          return r;
        }
      }
      if (curvature(*win.back()) > threshold) {
        r.outcome = TrialOutcome::Violated;
        add_evidence(r, win.back()->t, win.back()->line,
                     "curvature " + format_double(curvature(*win.back())) +
                         " still above straightness threshold " + format_double(threshold));
        return r;
      }
    }
  }
  r.outcome = judged ? TrialOutcome::Satisfied : TrialOutcome::NotApplicable;
  return r;
}

inline TrialResult check_hold_duration(const Requirement& req, const TraceDigest& d,
                                       const HoldDurationParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  if (!d.t_grasp) return r;
  const double hold = p.hold.si();
  if (d.t_drop) {
    const double held = *d.t_drop - *d.t_grasp;
    // An intentional early placement ends the hold; a drop before the hold
    // duration violates it.
    if (held < hold) {
      r.outcome = TrialOutcome::Violated;
      int line = d.drop_event ? d.drop_event->line : 0;
      add_evidence(r, *d.t_drop, line,
                   "item dropped " + format_double(held) + " s after grasp, before the " +
                       format_double(hold) + " s hold");
      return r;
    }
  }
  r.outcome = TrialOutcome::Satisfied;
  return r;
}

inline TrialResult check_success(const Requirement& req, const TraceDigest& d,
                                 const SuccessRateParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  if (p.flow_condition) {
    if (d.pump_ons.empty()) return r;
    const double flow = d.pump_ons.front().second->flow_m3s;
    if (flow < p.flow_condition->first.si() || flow > p.flow_condition->second.si()) return r;
  }
  switch (p.event) {
    case SuccessEvent::Placed:
      if (d.t_place) {
        r.outcome = TrialOutcome::Satisfied;
      } else {
        r.outcome = TrialOutcome::Violated;
        if (d.t_drop) {
          int line = d.drop_event ? d.drop_event->line : 0;
          add_evidence(r, *d.t_drop, line, "item was dropped instead of placed");
        } else {
          add_evidence(r, d.t_end, 0, "trial ended without placing the item");
        }
      }
      break;
    case SuccessEvent::Grasped:
      if (d.t_grasp) {
        r.outcome = TrialOutcome::Satisfied;
      } else {
        r.outcome = TrialOutcome::Violated;
        add_evidence(r, d.t_end, 0, "grasp was never established");
      }
      break;
    case SuccessEvent::Undamaged:
      if (d.damage_events.empty()) {
        r.outcome = TrialOutcome::Satisfied;
      } else {
        r.outcome = TrialOutcome::Violated;
        const auto* e = d.damage_events.front();
        const auto* dmg = std::get_if<DamagePayload>(&e->payload);
        add_evidence(r, e->t, e->line,
                     dmg ? "item damaged: " + dmg->mode + " " + format_double(dmg->value) +
                               " exceeded limit " + format_double(dmg->limit)
                         : "item damaged");
      }
      break;
  }
  return r;
}

inline TrialResult check_no_collision(const Requirement& req, const TraceDigest& d,
                                      const NoCollisionParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  if (d.samples.empty()) return r;
  const double radius = 0.5 * d.trace->meta.item.width.si();
  const double t_contact = d.t_contact.value_or(1e300);

  for (const auto& s : d.samples) {
    if (s.s->gripper_body_positions_m.empty())
      throw MonitorError(MonitorError::Code::MissingSignal,
                         "sample lacks gripper body positions");
    switch (p.predicate) {
      case CollisionPredicate::ItemMotionless:
        if (s.t < t_contact && s.s->item_velocity_ms > kMotionlessTol) {
          r.outcome = TrialOutcome::Violated;
          add_evidence(r, s.t, s.line,
                       "item moving at " + format_double(s.s->item_velocity_ms) +
                           " m/s before contact");
          return r;
        }
        break;
      case CollisionPredicate::BodyClearance:
        if (s.t < t_contact) {
          for (std::size_t i = 0; i < s.s->gripper_body_positions_m.size(); ++i) {
            const double dist = norm(s.s->gripper_body_positions_m[i] - s.s->item_position_m) - radius;
            if (dist <= 0.0) {
              r.outcome = TrialOutcome::Violated;
              add_evidence(r, s.t, s.line,
                           "segment " + std::to_string(i) + " reached the item surface before contact");
              return r;
            }
          }
        }
        break;
      case CollisionPredicate::BodyPositionDistinct:
        for (std::size_t i = 0; i < s.s->gripper_body_positions_m.size(); ++i) {
          if (norm(s.s->gripper_body_positions_m[i] - s.s->item_position_m) <= kPositionEqualTol) {
            r.outcome = TrialOutcome::Violated;
            add_evidence(r, s.t, s.line,
                         "segment " + std::to_string(i) + " position equals the item position");
            return r;
          }
        }
        break;
      case CollisionPredicate::OnlyGripperContact: {
        // Segment 0 is the palm; only finger segments may touch.
        const double dist = norm(s.s->gripper_body_positions_m[0] - s.s->item_position_m) - radius;
        if (dist <= 0.0) {
          r.outcome = TrialOutcome::Violated;
          add_evidence(r, s.t, s.line, "non-finger segment touched the item");
          return r;
        }
        break;
      }
    }
  }
  r.outcome = TrialOutcome::Satisfied;
  return r;
}

inline TrialResult check_proportionality(const Requirement& req, const TraceDigest& d,
                                         const ProportionalityParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  ProportionalityFit fit;
  try {
    fit = fit_proportionality(*d.trace);
  } catch (const MonitorError& e) {
    if (e.code() == MonitorError::Code::DegenerateData) return r;  // nothing to judge
    throw;
  }
  if (p.max_rel_residual && fit.max_rel_residual > *p.max_rel_residual) {
    r.outcome = TrialOutcome::Violated;
    add_evidence(r, 0.0, 0,
                 "max relative residual " + format_double(fit.max_rel_residual) +
                     " exceeds " + format_double(*p.max_rel_residual));
    return r;
  }
  if (p.max_intercept_frac &&
      std::fabs(fit.intercept) > *p.max_intercept_frac * fit.curvature_max) {
    r.outcome = TrialOutcome::Violated;
    add_evidence(r, 0.0, 0,
                 "fit intercept " + format_double(fit.intercept) +
                     " exceeds allowed fraction of peak curvature");
    return r;
  }
  if (p.reference_pressure && p.target_band) {
    const double predicted = fit.slope * p.reference_pressure->si() + fit.intercept;
    if (predicted < p.target_band->first.si() || predicted > p.target_band->second.si()) {
      r.outcome = TrialOutcome::Violated;
      add_evidence(r, 0.0, 0,
                   "fitted curvature " + format_double(predicted) + " at " +
                       to_string(*p.reference_pressure) + " outside [" +
                       format_double(p.target_band->first.si()) + ", " +
                       format_double(p.target_band->second.si()) + "] 1/m");
      return r;
    }
  }
  r.outcome = TrialOutcome::Satisfied;
  return r;
}

inline TrialResult check_trend_trial(const Requirement& req, const TraceDigest& d,
                                     const TrendParams& p) {
  TrialResult r = make_result(req, d.trace->meta, TrialOutcome::NotApplicable);
  const double h = d.trace->meta.operating_hours * kSecondsPerHour;
  const bool in_baseline = h >= p.baseline_lo.si() && h <= p.baseline_hi.si();
  const bool in_final = h >= p.final_lo.si() && h <= p.final_hi.si();
  if (!in_baseline && !in_final) return r;
  const bool event_happened =
      p.event == TrendEvent::Drop ? d.t_drop.has_value() : !d.damage_events.empty();
  if (event_happened) {
    r.outcome = TrialOutcome::Violated;
    if (p.event == TrendEvent::Drop && d.drop_event)
      add_evidence(r, *d.t_drop, d.drop_event->line, "item dropped");
    else if (!d.damage_events.empty())
      add_evidence(r, d.damage_events.front()->t, d.damage_events.front()->line, "item damaged");
  } else {
    r.outcome = TrialOutcome::Satisfied;
  }
  return r;
}

}  // namespace monitor_detail

// Evaluates one non-manual requirement over one valid trace. Deterministic:
// identical inputs give identical results, and every valid trace yields one
// of the three outcomes.
inline TrialResult check_trial(const Requirement& req, const Trace& trace) {
  using namespace monitor_detail;
  if (req.kind() == ReqKind::Manual)
    throw MonitorError(MonitorError::Code::UnsupportedKind,
                       "manual requirements have no executable semantics");
  TraceDigest d = TraceDigest::build(trace);
  if (!applicable_to(req, trace.meta))
    return make_result(req, trace.meta, TrialOutcome::NotApplicable);

  if (const auto* p = req.as<RangeParams>()) return check_range(req, d, *p);
  if (const auto* p = req.as<ThresholdParams>())
    return check_bounds(req, d, p->bounds, p->window, p->phase);
  if (const auto* p = req.as<EventResponseParams>()) return check_event_response(req, d, *p);
  if (const auto* p = req.as<HoldDurationParams>()) return check_hold_duration(req, d, *p);
  if (const auto* p = req.as<SuccessRateParams>()) return check_success(req, d, *p);
  if (const auto* p = req.as<TrendParams>()) return check_trend_trial(req, d, *p);
  if (const auto* p = req.as<ProportionalityParams>()) return check_proportionality(req, d, *p);
  if (const auto* p = req.as<NoCollisionParams>()) return check_no_collision(req, d, *p);
  throw MonitorError(MonitorError::Code::UnsupportedKind, "unhandled requirement kind");
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct AggregateOptions {
  int n_min = 100;  // minimum applicable trials for statistical verdicts
  // Declared by the campaign manifest: item initial velocity pinned to zero,
  // which turns the motionless predicate into a by-design verdict.
  bool item_velocity_pinned = false;
  // Orientation per trial id, needed only for orientation-sweep requirements.
  std::map<std::uint32_t, double> trial_orientation;
};

namespace monitor_detail {

inline bool statistical_kind(const Requirement& req) {
  if (req.kind() == ReqKind::SuccessRate) return true;
  if (const auto* p = req.as<HoldDurationParams>()) return p->fraction.has_value();
  return false;
}

inline double required_fraction(const Requirement& req) {
  if (const auto* p = req.as<SuccessRateParams>()) return p->fraction;
  if (const auto* p = req.as<HoldDurationParams>()) return p->fraction.value_or(1.0);
  return 1.0;
}

}  // namespace monitor_detail

// Folds per-trial results into a verdict. Statistical kinds (success rates
// and fraction-carrying hold durations) gate on the point estimate with at
// least n_min applicable trials; the Clopper-Pearson lower bound is reported
// as advisory detail. Other kinds pass only with zero violations.
inline Verdict aggregate(const Requirement& req, const std::vector<TrialResult>& results,
                         const AggregateOptions& opts = {}) {
  using namespace monitor_detail;
  Verdict v;
  v.requirement_id = req.id;

  for (const auto& r : results)
    if (r.requirement_id != req.id)
      throw MonitorError(MonitorError::Code::MixedRequirementIds,
                         "result for '" + r.requirement_id + "' mixed into '" + req.id + "'");

  if (req.kind() == ReqKind::Manual) {
    v.status = VerdictStatus::NeedsHumanReview;
    v.notes.push_back("no executable semantics; requires human review");
    return v;
  }
  if (req.kind() == ReqKind::Trend)
    throw MonitorError(MonitorError::Code::UnsupportedKind,
                       "trend requirements aggregate through check_trend");

  if (const auto* p = req.as<NoCollisionParams>();
      p && p->predicate == CollisionPredicate::ItemMotionless && opts.item_velocity_pinned) {
    v.status = VerdictStatus::ByDesign;
    v.notes.push_back("campaign declares item initial velocity pinned to zero");
    return v;
  }

  for (const auto& r : results) {
    if (r.outcome == TrialOutcome::NotApplicable) continue;
    ++v.n_applicable;
    if (r.outcome == TrialOutcome::Satisfied) ++v.n_satisfied;
  }
  if (v.n_applicable > 0) {
    v.point_estimate = double(v.n_satisfied) / double(v.n_applicable);
    v.ci_lower_95 = clopper_pearson_lower(unsigned(v.n_satisfied), unsigned(v.n_applicable));
  }

  if (statistical_kind(req)) {
    const double bound = required_fraction(req);
    if (req.applicability.orientation_sweep) {
      // Same bound per orientation bucket; the sweep passes only when every
      // bucket does.
      std::map<double, std::pair<int, int>> buckets;  // orientation -> (n, sat)
      for (const auto& r : results) {
        if (r.outcome == TrialOutcome::NotApplicable) continue;
        auto it = opts.trial_orientation.find(r.trial_id);
        const double key = it != opts.trial_orientation.end() ? it->second : 0.0;
        auto& b = buckets[key];
        ++b.first;
        if (r.outcome == TrialOutcome::Satisfied) ++b.second;
      }
      if (buckets.empty()) {
        v.status = VerdictStatus::InsufficientData;
        v.notes.push_back("no applicable trials");
        return v;
      }
      const int per_bucket_min = std::max(1, opts.n_min / int(buckets.size()));
      bool insufficient = false, fail = false;
      for (const auto& [orient, b] : buckets) {
        const double rate = double(b.second) / double(b.first);
        v.detail.emplace_back("rate@" + format_double(orient), rate);
        if (b.first < per_bucket_min) insufficient = true;
        if (rate < bound) fail = true;
      }
      if (insufficient) {
        v.status = VerdictStatus::InsufficientData;
        v.notes.push_back("an orientation bucket has fewer than " +
                          std::to_string(per_bucket_min) + " trials");
      } else {
        v.status = fail ? VerdictStatus::Fail : VerdictStatus::Pass;
      }
      return v;
    }
    if (v.n_applicable < opts.n_min) {
      v.status = VerdictStatus::InsufficientData;
      v.notes.push_back("needs at least " + std::to_string(opts.n_min) +
                        " applicable trials, saw " + std::to_string(v.n_applicable));
      return v;
    }
    v.status = v.point_estimate >= bound ? VerdictStatus::Pass : VerdictStatus::Fail;
    v.detail.emplace_back("required_fraction", bound);
    return v;
  }

  // Non-statistical: zero tolerance over the applicable trials.
  if (v.n_applicable == 0) {
    v.status = VerdictStatus::InsufficientData;
    v.notes.push_back("no applicable trials");
    return v;
  }
  v.status = v.n_satisfied == v.n_applicable ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

// Compares event rates between the baseline and final operating-hour windows.
// Pass when rate(final) - rate(baseline) stays within max_increase, measured
// in absolute percentage points.
inline Verdict check_trend(const Requirement& req, const std::vector<TrialResult>& baseline,
                           const std::vector<TrialResult>& final_window,
                           const AggregateOptions& opts = {}) {
  const auto* p = req.as<TrendParams>();
  if (!p)
    throw MonitorError(MonitorError::Code::UnsupportedKind,
                       "check_trend requires a trend requirement");
  for (const auto* set : {&baseline, &final_window})
    for (const auto& r : *set)
      if (r.requirement_id != req.id)
        throw MonitorError(MonitorError::Code::MixedRequirementIds,
                           "result for '" + r.requirement_id + "' mixed into '" + req.id + "'");

  Verdict v;
  v.requirement_id = req.id;
  auto count = [](const std::vector<TrialResult>& rs) {
    int n = 0, bad = 0;
    for (const auto& r : rs) {
      if (r.outcome == TrialOutcome::NotApplicable) continue;
      ++n;
      if (r.outcome == TrialOutcome::Violated) ++bad;
    }
    return std::pair<int, int>{n, bad};
  };
  const auto [n_b, bad_b] = count(baseline);
  const auto [n_f, bad_f] = count(final_window);
  v.n_applicable = n_b + n_f;
  v.n_satisfied = (n_b - bad_b) + (n_f - bad_f);
  if (v.n_applicable > 0) {
    v.point_estimate = double(v.n_satisfied) / double(v.n_applicable);
    v.ci_lower_95 = clopper_pearson_lower(unsigned(v.n_satisfied), unsigned(v.n_applicable));
  }
  const int window_min = std::max(1, opts.n_min / 2);
  if (n_b < window_min || n_f < window_min) {
    v.status = VerdictStatus::InsufficientData;
    v.notes.push_back("each hour window needs at least " + std::to_string(window_min) +
                      " trials (baseline " + std::to_string(n_b) + ", final " +
                      std::to_string(n_f) + ")");
    return v;
  }
  const double rate_b = double(bad_b) / double(n_b);
  const double rate_f = double(bad_f) / double(n_f);
  const double increase = rate_f - rate_b;
  v.detail.emplace_back("baseline_rate", rate_b);
  v.detail.emplace_back("final_rate", rate_f);
  v.detail.emplace_back("increase", increase);
  v.status = increase <= p->max_increase ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

// ---------------------------------------------------------------------------
// Campaign evaluation
// ---------------------------------------------------------------------------

struct EvidenceRef {
  std::string trace_file;
  int line = 0;
  double t = 0.0;
  std::string message;
};

struct RequirementEvaluation {
  Verdict verdict;
  std::vector<EvidenceRef> evidence;  // first violations, capped
};

// Feeds traces one at a time (constant memory in the campaign size) and
// produces one verdict per requirement in document order.
class SpecEvaluator {
 public:
  SpecEvaluator(const SpecificationDoc& doc, AggregateOptions opts = {})
      : doc_(&doc), opts_(std::move(opts)), per_req_(doc.requirements.size()) {}

  void add_trace(const Trace& trace, const std::string& file_name = "") {
    opts_.trial_orientation[trace.meta.trial_id] = trace.meta.item.orientation_rad;
    hours_[trace.meta.trial_id] = trace.meta.operating_hours;
    for (std::size_t i = 0; i < doc_->requirements.size(); ++i) {
      const auto& req = doc_->requirements[i];
      if (req.kind() == ReqKind::Manual) continue;
      TrialResult r = check_trial(req, trace);
      auto& acc = per_req_[i];
      if (r.outcome == TrialOutcome::Violated && acc.evidence.size() < kMaxEvidence) {
        const auto& e = r.evidence.front();
        acc.evidence.push_back({file_name, e.line, e.t, e.message});
      }
      acc.results.push_back(std::move(r));
    }
  }

  std::vector<RequirementEvaluation> finish() const {
    std::vector<RequirementEvaluation> out;
    out.reserve(doc_->requirements.size());
    for (std::size_t i = 0; i < doc_->requirements.size(); ++i) {
      const auto& req = doc_->requirements[i];
      RequirementEvaluation ev;
      ev.evidence = per_req_[i].evidence;
      if (req.kind() == ReqKind::Manual) {
        ev.verdict = aggregate(req, {}, opts_);
      } else if (const auto* p = req.as<TrendParams>()) {
        std::vector<TrialResult> baseline, final_window;
        for (const auto& r : per_req_[i].results) {
          auto it = hours_.find(r.trial_id);
          if (it == hours_.end()) continue;
          const double h = it->second;
          if (h >= p->baseline_lo.si() / kSecondsPerHour &&
              h <= p->baseline_hi.si() / kSecondsPerHour)
            baseline.push_back(r);
          else if (h >= p->final_lo.si() / kSecondsPerHour &&
                   h <= p->final_hi.si() / kSecondsPerHour)
            final_window.push_back(r);
        }
        ev.verdict = check_trend(req, baseline, final_window, opts_);
      } else {
        ev.verdict = aggregate(req, per_req_[i].results, opts_);
      }
      out.push_back(std::move(ev));
    }
    return out;
  }

 private:
  static constexpr std::size_t kMaxEvidence = 3;

  struct PerRequirement {
    std::vector<TrialResult> results;
    std::vector<EvidenceRef> evidence;
  };

  const SpecificationDoc* doc_;
  AggregateOptions opts_;
  std::vector<PerRequirement> per_req_;
  std::map<std::uint32_t, double> hours_;
};

}  // namespace gripcheck
