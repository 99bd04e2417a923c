// Quasi-static, seeded simulator of the two-finger fluidic gripper running
// the four-phase pick-and-place pipeline over item scenarios. Trials are
// evaluated from closed-form piecewise state so replays are byte-identical;
// the only stochastic element is the drop model, driven by a per-trial
// splitmix64 stream.
//
// Model summary:
//   - fill: linear pressure rise, rate = fill_pressure_scale * flow / volume
//   - curvature = curvature_gain * pressure until contact, frozen afterwards
//   - fingertips close as arcs: lateral sweep y(k) = (1 - cos(kL)) / k;
//     contact when the tip gap reaches the item width
//   - past contact, surplus pressure turns into grip force and fingertip
//     squeeze through per-hardness contact gains
//   - grasp stop rule: commanded pressure, or the fragility limits scaled by
//     fragility_stop_fraction, whichever comes first
//   - venting: exponential decay, curvature = min(frozen, gain * pressure)
//   - drops: one Bernoulli per trial, logistic in size ratio and grip force,
//     plus an additive per-hour degradation increment when injected
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gripcheck/rng.hpp"
#include "gripcheck/trace.hpp"

namespace gripcheck {

struct FaultInjection {
  bool overpressure = false;
  double degradation_slope_per_h = 0.0;  // additive drop-probability per hour
  bool collision_bug = false;
  bool speed_violation = false;

  bool any() const {
    return overpressure || degradation_slope_per_h != 0.0 || collision_bug || speed_violation;
  }
  bool operator==(const FaultInjection&) const = default;
};

struct GripperConfig {
  // Geometry (finger 12 x 134 x 6 mm, 30% recycled elastomer).
  double finger_length_m = 0.134;
  double finger_width_m = 0.012;
  double finger_thickness_m = 0.006;
  double recycled_fraction = 0.30;
  double opening_width_m = 0.08;

  // Pneumatics. curvature_gain is calibrated so that the free finger reaches
  // curvature 10 1/m (0.10 m radius) at the commanded 3.5 psi.
  double curvature_gain = 10.0 / (3.5 * kPascalPerPsi);  // (1/m) per Pa
  double commanded_pressure_pa = 3.5 * kPascalPerPsi;
  double nominal_flow_m3s = 2.6 * kM3sPerLpm;
  double pressure_limit_lo_pa = 0.0;
  double pressure_limit_hi_pa = 14.0 * kPascalPerPsi;  // hard clamp
  double flow_limit_lo_m3s = 0.0;
  double flow_limit_hi_m3s = 6.0 * kM3sPerLpm;
  double chamber_volume_m3 = 8e-6;
  double fill_pressure_scale_pa = 1600.0;  // Pa per chamber volume supplied
  double vent_time_constant_s = 0.2;

  // Contact response, split by item hardness.
  double force_gain_hard_n_per_pa = 8.8e-5;
  double force_gain_soft_n_per_pa = 4.4e-5;
  double displacement_gain_hard_m_per_pa = 1.0e-8;
  double displacement_gain_soft_m_per_pa = 4.0e-8;
  double grasp_force_threshold_n = 0.1;
  double release_force_threshold_n = 0.05;
  double fragility_stop_fraction = 0.9;  // stop at this fraction of a limit

  // Motion (translation honours the 0.03 m/s / 0.15 m/s2 catalog caps).
  double approach_speed_ms = 0.1;
  double approach_accel_ms2 = 0.5;
  double travel_speed_ms = 0.03;
  double travel_accel_ms2 = 0.15;
  double approach_distance_m = 0.10;
  double hover_clearance_m = 0.05;
  double lift_height_m = 0.05;
  double translate_distance_m = 0.20;
  double pregrasp_settle_s = 0.3;
  double plateau_settle_s = 0.2;
  double vent_tail_s = 2.4;

  // Drop model: p = sigmoid(bias + size * (w/W) + force * F), target base
  // rate about 0.02 across the default scenario library.
  double drop_logit_bias = -4.0;
  double drop_logit_size = 0.8;
  double drop_logit_force = -0.5;
  double drop_time_horizon_s = 9.5;  // drops land inside the hold-check span

  // Fault parameters.
  double overpressure_target_pa = 12.5 * kPascalPerPsi;
  double violation_speed_ms = 0.05;
  double violation_accel_ms2 = 0.25;
};

// Spec-level state of the pneumatic stepper (one shared supply line, two
// symmetric fingers).
struct GripperState {
  double pressure_pa = 0.0;
  std::array<double, 2> curvature_per_m{0.0, 0.0};
  double fingertip_displacement_m = 0.0;
  std::array<bool, 2> contact{false, false};
  double grip_force_n = 0.0;
  Vec3 position_m;
  double velocity_ms = 0.0;
  double acceleration_ms2 = 0.0;
  bool pump_on = false;
  double commanded_pressure_pa = 0.0;
  double contact_pressure_pa = 0.0;
  double force_gain_n_per_pa = 0.0;
  double displacement_gain_m_per_pa = 0.0;
};

struct Scenario {
  ItemSpec item;
  double operating_hours = 0.0;
  Vec3 item_position_m{0.25, 0.0, 0.0};  // z filled from the item width
  Vec3 target_position_m{0.25, 0.20, 0.0};
  FaultInjection faults;
};

struct Campaign {
  std::vector<Scenario> scenarios;
  std::uint64_t rng_seed = 42;
  double sample_period_s = 0.01;
  double hours_horizon = 100.0;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Pneumatic stepper (public op; the trial builder uses the same laws in
// closed form)
// ---------------------------------------------------------------------------

// Advances the fill model by one step: pressure rises linearly with supplied
// volume, clamped at the commanded pressure and the hard limit; curvature
// follows gain * pressure before contact; past contact the surplus pressure
// becomes grip force and fingertip displacement.
inline GripperState step_inflation(GripperState s, const GripperConfig& c, double flow_m3s,
                                   double dt) {
  if (dt <= 0) throw std::invalid_argument("step_inflation: dt must be positive");
  if (flow_m3s < 0) throw std::invalid_argument("step_inflation: flow must be >= 0");
  const double rate = c.fill_pressure_scale_pa * flow_m3s / c.chamber_volume_m3;
  double target = s.pump_on ? s.commanded_pressure_pa : s.pressure_pa;
  target = std::min(target, c.pressure_limit_hi_pa);
  s.pressure_pa = std::min(s.pressure_pa + rate * dt, std::max(target, s.pressure_pa));
  const bool in_contact = s.contact[0] && s.contact[1];
  for (int f = 0; f < 2; ++f) {
    if (!in_contact) s.curvature_per_m[std::size_t(f)] = c.curvature_gain * s.pressure_pa;
  }
  if (in_contact) {
    const double surplus = std::max(0.0, s.pressure_pa - s.contact_pressure_pa);
    s.grip_force_n = s.force_gain_n_per_pa * surplus;
    s.fingertip_displacement_m = s.displacement_gain_m_per_pa * surplus;
  } else {
    s.grip_force_n = 0.0;
    s.fingertip_displacement_m = 0.0;
  }
  return s;
}

// Time for the linear fill model to first reach `pressure_pa` at a constant
// flow, interpolated between steps.
inline double fill_time_to(const GripperConfig& c, double flow_m3s, double pressure_pa) {
  const double rate = c.fill_pressure_scale_pa * flow_m3s / c.chamber_volume_m3;
  if (rate <= 0) throw std::invalid_argument("fill_time_to: flow must be positive");
  return pressure_pa / rate;
}

// ---------------------------------------------------------------------------
// Finger arc geometry
// ---------------------------------------------------------------------------

namespace sim_detail {

// Lateral sweep of an arc fingertip of length L at curvature k.
inline double tip_sweep(double kappa, double finger_length) {
  if (kappa < 1e-9) return 0.5 * kappa * finger_length * finger_length;  // small-angle limit
  return (1.0 - std::cos(kappa * finger_length)) / kappa;
}

// Vertical chord of the curled finger (distance palm -> tip along z).
inline double tip_chord(double kappa, double finger_length) {
  if (kappa < 1e-9) return finger_length * (1.0 - kappa * kappa * finger_length * finger_length / 6.0);
  return std::sin(kappa * finger_length) / kappa;
}

// Curvature at which the fingertip gap closes onto the item width. The sweep
// is monotone up to kappa * L ~ 2.1, well past any contact curvature here.
inline double contact_curvature(const GripperConfig& c, double item_width) {
  const double y_needed = 0.5 * (c.opening_width_m - item_width);
  if (y_needed <= 0) return 0.0;
  double lo = 0.0, hi = 16.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tip_sweep(mid, c.finger_length_m) < y_needed)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Symmetric trapezoidal (or triangular) motion profile over distance d.
struct MotionProfile {
  double distance = 0.0;
  double vmax = 0.0;
  double amax = 0.0;
  double t_ramp = 0.0;
  double t_cruise = 0.0;

  static MotionProfile plan(double distance, double vmax, double amax) {
    MotionProfile p;
    p.distance = distance;
    p.amax = amax;
    const double d_full_ramps = vmax * vmax / amax;
    if (distance >= d_full_ramps) {
      p.vmax = vmax;
      p.t_ramp = vmax / amax;
      p.t_cruise = (distance - d_full_ramps) / vmax;
    } else {
      p.t_ramp = std::sqrt(distance / amax);
      p.vmax = amax * p.t_ramp;
      p.t_cruise = 0.0;
    }
    return p;
  }

  double total() const { return 2.0 * t_ramp + t_cruise; }

  // Position along the path and signed speed/acceleration at local time u.
  void eval(double u, double& pos, double& vel, double& acc) const {
    if (u <= 0) {
      pos = 0;
      vel = 0;
      acc = 0;
      return;
    }
    if (u >= total()) {
      pos = distance;
      vel = 0;
      acc = 0;
      return;
    }
    if (u < t_ramp) {
      pos = 0.5 * amax * u * u;
      vel = amax * u;
      acc = amax;
    } else if (u < t_ramp + t_cruise) {
      pos = 0.5 * amax * t_ramp * t_ramp + vmax * (u - t_ramp);
      vel = vmax;
      acc = 0.0;
    } else {
      const double w = total() - u;
      pos = distance - 0.5 * amax * w * w;
      vel = amax * w;
      acc = -amax;
    }
  }
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace sim_detail

// ---------------------------------------------------------------------------
// Trial
// ---------------------------------------------------------------------------

namespace sim_detail {

// All trial instants and derived quantities, fixed before emission.
struct TrialPlan {
  // pneumatics
  double fill_rate = 0.0;
  double contact_pressure = 0.0;
  double contact_curvature_v = 0.0;
  double stop_pressure = 0.0;
  double grasp_pressure = 0.0;
  double force_gain = 0.0, disp_gain = 0.0;
  // motion
  MotionProfile approach_x, descend_z, lift_z, translate_y, lower_z;
  double t_pump_on = 0.0, t_contact = 0.0, t_grasp = 0.0, t_fill_end = 0.0;
  double t_lift_start = 0.0, t_asc_end = 0.0, t_trans_end = 0.0, t_pump_off = 0.0;
  double t_place = 0.0, t_end = 0.0;
  double t_pregrasp_end = 0.0, t_descend_end = 0.0, t_dip_start = -1.0, t_dip_end = -1.0;
  // outcomes
  bool will_drop = false;
  double t_drop = -1.0;
  bool damage_force = false, damage_displacement = false;
  double drop_probability = 0.0;
  // geometry
  double z_hover = 0.0, z_grasp = 0.0;
  Vec3 start;
};

}  // namespace sim_detail

// Runs one trial and emits its trace. Throws ScenarioError when the item
// cannot fit between the open fingers.
inline Trace run_trial(const Scenario& scenario, const GripperConfig& config,
                       std::uint64_t trial_seed, std::uint32_t trial_id,
                       double sample_period_s) {
  using namespace sim_detail;
  const ItemSpec& item = scenario.item;
  const double w = item.width.si();
  if (w <= 0) throw ScenarioError("item width must be positive");
  if (w > config.opening_width_m)
    throw ScenarioError("item width " + format_double(w) + " m exceeds gripper opening " +
                        format_double(config.opening_width_m) + " m");
  const double dt = sample_period_s;
  if (dt <= 0) throw ScenarioError("sample period must be positive");

  TrialPlan plan;
  plan.force_gain =
      is_soft(item.item_class) ? config.force_gain_soft_n_per_pa : config.force_gain_hard_n_per_pa;
  plan.disp_gain = is_soft(item.item_class) ? config.displacement_gain_soft_m_per_pa
                                            : config.displacement_gain_hard_m_per_pa;

  // --- pneumatic plan --------------------------------------------------------
  const double flow =
      std::clamp(config.nominal_flow_m3s, config.flow_limit_lo_m3s, config.flow_limit_hi_m3s);
  plan.fill_rate = config.fill_pressure_scale_pa * flow / config.chamber_volume_m3;
  plan.contact_curvature_v = contact_curvature(config, w);
  plan.contact_pressure = plan.contact_curvature_v / config.curvature_gain;

  const double commanded = scenario.faults.overpressure
                               ? std::min(config.overpressure_target_pa, config.pressure_limit_hi_pa)
                               : std::min(config.commanded_pressure_pa, config.pressure_limit_hi_pa);
  double stop = commanded;
  if (!scenario.faults.overpressure) {
    // Class-specific stop rule: approach each fragility limit only up to the
    // configured fraction.
    if (item.fragility_force_limit) {
      const double dp =
          config.fragility_stop_fraction * item.fragility_force_limit->si() / plan.force_gain;
      stop = std::min(stop, plan.contact_pressure + dp);
    }
    if (item.fragility_displacement_limit) {
      const double dp = config.fragility_stop_fraction * item.fragility_displacement_limit->si() /
                        plan.disp_gain;
      stop = std::min(stop, plan.contact_pressure + dp);
    }
  }
  plan.stop_pressure = stop;
  plan.grasp_pressure =
      std::min(plan.contact_pressure + config.grasp_force_threshold_n / plan.force_gain, stop);

  // --- motion plan -----------------------------------------------------------
  plan.approach_x =
      MotionProfile::plan(config.approach_distance_m, config.approach_speed_ms, config.approach_accel_ms2);
  plan.descend_z =
      MotionProfile::plan(config.hover_clearance_m, config.approach_speed_ms, config.approach_accel_ms2);
  const double travel_v =
      scenario.faults.speed_violation ? config.violation_speed_ms : config.travel_speed_ms;
  const double travel_a =
      scenario.faults.speed_violation ? config.violation_accel_ms2 : config.travel_accel_ms2;
  plan.lift_z = MotionProfile::plan(config.lift_height_m, config.travel_speed_ms, config.travel_accel_ms2);
  const double translate_dist = std::fabs(scenario.target_position_m.y - scenario.item_position_m.y);
  plan.translate_y = MotionProfile::plan(translate_dist, travel_v, travel_a);
  plan.lower_z = MotionProfile::plan(config.lift_height_m, config.travel_speed_ms, config.travel_accel_ms2);

  const double item_z = 0.5 * w;
  const Vec3 item_home{scenario.item_position_m.x, scenario.item_position_m.y, item_z};
  const Vec3 place_home{scenario.target_position_m.x, scenario.target_position_m.y, item_z};
  plan.z_grasp = item_z + config.finger_length_m;
  plan.z_hover = plan.z_grasp + config.hover_clearance_m;
  plan.start = {item_home.x - config.approach_distance_m, item_home.y, plan.z_hover};

  // --- timeline --------------------------------------------------------------
  plan.t_descend_end = plan.approach_x.total() + plan.descend_z.total();
  double t = plan.t_descend_end;
  if (scenario.faults.collision_bug) {
    plan.t_dip_start = t;
    plan.t_dip_end = t + 3.0 * dt;
    t = plan.t_dip_end;
  }
  plan.t_pregrasp_end = t + config.pregrasp_settle_s;
  plan.t_pump_on = plan.t_pregrasp_end;
  plan.t_contact = plan.t_pump_on + plan.contact_pressure / plan.fill_rate;
  plan.t_grasp = plan.t_pump_on + plan.grasp_pressure / plan.fill_rate;
  plan.t_fill_end = plan.t_pump_on + plan.stop_pressure / plan.fill_rate;
  plan.t_lift_start = plan.t_fill_end + config.plateau_settle_s;
  plan.t_asc_end = plan.t_lift_start + plan.lift_z.total();
  plan.t_trans_end = plan.t_asc_end + plan.translate_y.total();
  plan.t_pump_off = plan.t_trans_end + plan.lower_z.total();
  const double p_release = plan.contact_pressure + config.release_force_threshold_n / plan.force_gain;
  plan.t_place = p_release < plan.stop_pressure
                     ? plan.t_pump_off +
                           config.vent_time_constant_s * std::log(plan.stop_pressure / p_release)
                     : plan.t_pump_off;
  plan.t_end = plan.t_pump_off + config.vent_tail_s;

  // --- stochastic drop -------------------------------------------------------
  const double stop_force = plan.force_gain * (plan.stop_pressure - plan.contact_pressure);
  const double size_ratio = w / config.opening_width_m;
  double p_drop = logistic(config.drop_logit_bias + config.drop_logit_size * size_ratio +
                           config.drop_logit_force * stop_force);
  p_drop = std::clamp(p_drop + scenario.faults.degradation_slope_per_h * scenario.operating_hours,
                      0.0, 1.0);
  plan.drop_probability = p_drop;
  SplitMix64 rng(trial_seed);
  const double drop_draw = rng.next_unit();
  const double when_draw = rng.next_unit();
  plan.will_drop = drop_draw < p_drop;
  const double drop_span =
      std::min(config.drop_time_horizon_s, plan.t_trans_end - plan.t_grasp - 0.05);
  plan.t_drop = plan.will_drop ? plan.t_grasp + when_draw * std::max(drop_span, 0.0) : -1.0;

  // --- damage (fragility limits exceeded; reachable only with the stop rule
  // bypassed) -----------------------------------------------------------------
  const double peak_force = plan.force_gain * (plan.stop_pressure - plan.contact_pressure);
  const double peak_disp = plan.disp_gain * (plan.stop_pressure - plan.contact_pressure);
  plan.damage_force =
      item.fragility_force_limit && peak_force > item.fragility_force_limit->si();
  plan.damage_displacement = item.fragility_displacement_limit &&
                             peak_disp > item.fragility_displacement_limit->si();

  // --- emission ---------------------------------------------------------------
  Trace trace;
  trace.meta = {trial_id, item, scenario.operating_hours, trial_seed, config.opening_width_m, dt};

  struct Pending {
    double t;
    TraceEvent ev;
  };
  std::vector<Pending> pending;
  auto schedule = [&](double when, EventKind kind, EventPayload payload = std::monostate{}) {
    TraceEvent e;
    e.t = when;
    e.kind = kind;
    e.payload = std::move(payload);
    pending.push_back({when, std::move(e)});
  };

  schedule(0.0, EventKind::TrialStart, trace.meta);
  schedule(0.0, EventKind::PhaseStart, PhasePayload{Phase::PreGrasp});
  schedule(plan.t_pregrasp_end, EventKind::PhaseEnd, PhasePayload{Phase::PreGrasp});
  schedule(plan.t_pregrasp_end, EventKind::PhaseStart, PhasePayload{Phase::Ascension});
  schedule(plan.t_pump_on, EventKind::PumpOn, PumpOnPayload{plan.stop_pressure, flow});
  schedule(plan.t_contact, EventKind::ContactMade);
  schedule(plan.t_grasp, EventKind::GraspEstablished);
  schedule(plan.t_asc_end, EventKind::PhaseEnd, PhasePayload{Phase::Ascension});
  schedule(plan.t_asc_end, EventKind::PhaseStart, PhasePayload{Phase::Translation});
  schedule(plan.t_trans_end, EventKind::PhaseEnd, PhasePayload{Phase::Translation});
  schedule(plan.t_trans_end, EventKind::PhaseStart, PhasePayload{Phase::Descension});
  schedule(plan.t_pump_off, EventKind::PumpOff);
  if (scenario.faults.collision_bug)
    schedule(plan.t_dip_start, EventKind::Collision, CollisionPayload{"palm"});
  if (plan.will_drop) {
    Phase drop_phase = plan.t_drop < plan.t_asc_end ? Phase::Ascension : Phase::Translation;
    schedule(plan.t_drop, EventKind::ItemDropped, DropPayload{drop_phase});
  } else if (plan.t_place <= plan.t_end) {
    schedule(plan.t_place, EventKind::ItemPlaced);
  }
  if (plan.damage_force || plan.damage_displacement) {
    const bool force_first =
        plan.damage_force &&
        (!plan.damage_displacement ||
         item.fragility_force_limit->si() / plan.force_gain <=
             item.fragility_displacement_limit->si() / plan.disp_gain);
    if (force_first) {
      const double p_dmg = plan.contact_pressure + item.fragility_force_limit->si() / plan.force_gain;
      const double t_dmg = plan.t_pump_on + p_dmg / plan.fill_rate;
      schedule(std::nextafter(t_dmg, 1e300), EventKind::ItemDamaged,
               DamagePayload{"force", plan.force_gain * (plan.stop_pressure - plan.contact_pressure),
                             item.fragility_force_limit->si()});
    } else {
      const double p_dmg =
          plan.contact_pressure + item.fragility_displacement_limit->si() / plan.disp_gain;
      const double t_dmg = plan.t_pump_on + p_dmg / plan.fill_rate;
      schedule(std::nextafter(t_dmg, 1e300), EventKind::ItemDamaged,
               DamagePayload{"displacement",
                             plan.disp_gain * (plan.stop_pressure - plan.contact_pressure),
                             item.fragility_displacement_limit->si()});
    }
  }
  schedule(plan.t_end, EventKind::PhaseEnd, PhasePayload{Phase::Descension});
  schedule(plan.t_end, EventKind::TrialEnd);
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) { return a.t < b.t; });

  // Closed-form state evaluation at a sample instant.
  auto palm_at = [&](double at, double& vel, double& acc) -> Vec3 {
    Vec3 p = plan.start;
    vel = 0;
    acc = 0;
    double pos_d, v_d, a_d;
    // approach along +x
    plan.approach_x.eval(at, pos_d, v_d, a_d);
    p.x += pos_d;
    if (at < plan.approach_x.total()) {
      vel = v_d;
      acc = a_d;
      return p;
    }
    // descend to grasp height
    plan.descend_z.eval(at - plan.approach_x.total(), pos_d, v_d, a_d);
    p.z -= pos_d;
    if (at < plan.t_descend_end) {
      vel = v_d;
      acc = a_d;
      return p;
    }
    // collision-bug dip: the palm trajectory erroneously passes through the
    // item position
    if (plan.t_dip_start >= 0 && at >= plan.t_dip_start && at < plan.t_dip_end) {
      vel = 0;
      acc = 0;
      return item_home;
    }
    if (at < plan.t_lift_start) return p;  // settled at grasp pose
    plan.lift_z.eval(at - plan.t_lift_start, pos_d, v_d, a_d);
    p.z += pos_d;
    if (at < plan.t_asc_end) {
      vel = v_d;
      acc = a_d;
      return p;
    }
    plan.translate_y.eval(at - plan.t_asc_end, pos_d, v_d, a_d);
    p.y += pos_d;
    if (at < plan.t_trans_end) {
      vel = v_d;
      acc = a_d;
      return p;
    }
    plan.lower_z.eval(at - plan.t_trans_end, pos_d, v_d, a_d);
    p.z -= pos_d;
    if (at < plan.t_pump_off) {
      vel = v_d;
      acc = a_d;
    }
    return p;
  };

  auto pressure_at = [&](double at) -> double {
    if (at < plan.t_pump_on) return 0.0;
    if (at <= plan.t_pump_off)
      return std::min(plan.fill_rate * (at - plan.t_pump_on), plan.stop_pressure);
    return plan.stop_pressure * std::exp(-(at - plan.t_pump_off) / config.vent_time_constant_s);
  };

  const double vent_flow_cut = plan.t_fill_end;
  auto sample_at = [&](double at) -> SamplePayload {
    SamplePayload s;
    s.pressure_pa = pressure_at(at);
    s.flow_m3s = (at >= plan.t_pump_on && at < vent_flow_cut) ? flow : 0.0;
    const bool dropped = plan.will_drop && at >= plan.t_drop;
    const bool placed = !plan.will_drop && at >= plan.t_place;
    double kappa;
    if (at < plan.t_contact || dropped) {
      kappa = config.curvature_gain * s.pressure_pa;
    } else {
      kappa = std::min(plan.contact_curvature_v, config.curvature_gain * s.pressure_pa);
      // While filling past contact the pressure exceeds the contact pressure,
      // so the frozen contact curvature applies.
      if (at <= plan.t_pump_off) kappa = plan.contact_curvature_v;
    }
    s.curvature_per_m = {kappa, kappa};
    const bool holding = at >= plan.t_contact && !dropped && !placed;
    if (holding) {
      const double surplus = std::max(0.0, s.pressure_pa - plan.contact_pressure);
      s.grip_force_n = plan.force_gain * surplus;
      s.fingertip_displacement_m = plan.disp_gain * surplus;
    }
    double vel, acc;
    const Vec3 palm = palm_at(at, vel, acc);
    s.gripper_velocity_ms = vel;
    s.gripper_acceleration_ms2 = std::fabs(acc);
    const double sweep = tip_sweep(kappa, config.finger_length_m);
    const double chord = tip_chord(kappa, config.finger_length_m);
    const double half_gap = 0.5 * config.opening_width_m - sweep;
    s.gripper_body_positions_m = {
        palm,
        {palm.x - half_gap, palm.y, palm.z - chord},
        {palm.x + half_gap, palm.y, palm.z - chord},
    };
    // Item: at rest until grasped, attached to the fingertips while held,
    // frozen where it lands after a drop or a placement.
    const bool attached = at >= plan.t_grasp && !dropped && !placed;
    if (attached) {
      s.item_position_m = {palm.x, palm.y, palm.z - tip_chord(plan.contact_curvature_v,
                                                              config.finger_length_m)};
      s.item_velocity_ms = vel;
    } else if (dropped) {
      double vdrop, adrop;
      const Vec3 at_drop = palm_at(plan.t_drop, vdrop, adrop);
      s.item_position_m = {at_drop.x, at_drop.y, item_z};
      s.item_velocity_ms = 0.0;
    } else if (placed) {
      s.item_position_m = place_home;
      s.item_velocity_ms = 0.0;
    } else {
      s.item_position_m = item_home;
      s.item_velocity_ms = 0.0;
    }
    return s;
  };

  std::size_t next_pending = 0;
  const long n_steps = long(std::floor(plan.t_end / dt + 1e-9));
  for (long i = 0; i <= n_steps; ++i) {
    const double at = double(i) * dt;
    while (next_pending < pending.size() && pending[next_pending].t <= at + 1e-12) {
      trace.events.push_back(std::move(pending[next_pending].ev));
      ++next_pending;
    }
    TraceEvent e;
    e.t = at;
    e.kind = EventKind::Sample;
    e.payload = sample_at(at);
    trace.events.push_back(std::move(e));
  }
  while (next_pending < pending.size()) {
    trace.events.push_back(std::move(pending[next_pending].ev));
    ++next_pending;
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

struct CampaignRun {
  std::vector<Trace> traces;
  std::vector<std::pair<std::uint32_t, std::string>> skipped;  // (trial, reason)
};

// Deterministic replay: per-trial seeds derive from the campaign seed and the
// trial index, so the same seed reproduces byte-identical traces and adding
// scenarios never changes earlier trials.
inline CampaignRun run_campaign(const Campaign& campaign, const GripperConfig& config) {
  CampaignRun run;
  run.traces.reserve(campaign.scenarios.size());
  for (std::size_t i = 0; i < campaign.scenarios.size(); ++i) {
    const std::uint64_t seed = derive_stream(campaign.rng_seed, i);
    try {
      run.traces.push_back(run_trial(campaign.scenarios[i], config, seed, std::uint32_t(i),
                                     campaign.sample_period_s));
    } catch (const ScenarioError& e) {
      run.skipped.emplace_back(std::uint32_t(i), e.what());
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Scenario library
// ---------------------------------------------------------------------------

struct CampaignSpec {
  int trials_per_class = 100;
  std::uint64_t seed = 42;
  double sample_period_s = 0.01;
  double hours_horizon = 100.0;
  FaultInjection faults;
};

// Builds the default scenario library: four item classes round-robined so
// operating hours stratify evenly, widths/shapes/masses cycled per class,
// orientations swept over {0, pi/4, pi/2, 3pi/4}, and a quarter of the
// trials in each of the life-cycle baseline/final hour windows.
inline std::vector<Scenario> build_scenarios(const CampaignSpec& spec,
                                             const GripperConfig& config) {
  struct ClassProfile {
    ItemClass cls;
    std::vector<double> widths;
    std::vector<double> masses;
    std::vector<Shape> shapes;
  };
  const std::vector<ClassProfile> profiles = {
      {ItemClass::SoftFragile, {}, {}, {}},  // split into cake/berry below
      {ItemClass::SoftNonFragile,
       {0.05, 0.06, 0.07},
       {0.015, 0.025},
       {Shape::Sphere, Shape::Cube, Shape::Cone, Shape::Pyramid, Shape::Cylinder}},
      {ItemClass::HardFragile,
       {0.045, 0.05, 0.055, 0.06},
       {0.035, 0.06},
       {Shape::Sphere, Shape::Cube, Shape::Cone, Shape::Pyramid, Shape::Cylinder}},
      {ItemClass::HardNonFragile,
       {0.03, 0.04, 0.05, 0.06, 0.95 * config.opening_width_m},
       {0.01, 0.02},
       {Shape::Sphere, Shape::Cube, Shape::Cone, Shape::Pyramid, Shape::Cylinder}},
  };
  constexpr double kOrientations[] = {0.0, 0.25 * 3.14159265358979323846,
                                      0.5 * 3.14159265358979323846,
                                      0.75 * 3.14159265358979323846};

  const int n = spec.trials_per_class;
  const int total = 4 * n;
  std::vector<Scenario> out;
  out.reserve(std::size_t(total));
  for (int j = 0; j < n; ++j) {
    for (const auto& prof : profiles) {
      Scenario sc;
      sc.faults = spec.faults;
      ItemSpec item;
      item.item_class = prof.cls;
      if (prof.cls == ItemClass::SoftFragile) {
        if (j % 2 == 0) {
          // cake/bread profile: displacement-limited
          const double widths[] = {0.05, 0.06, 0.07};
          item.width = meters(widths[(j / 2) % 3]);
          item.mass = kilograms(j % 4 == 0 ? 0.25 : 0.4);
          item.shape = (j / 2) % 2 == 0 ? Shape::Cube : Shape::Cylinder;
          item.fragility_displacement_limit = meters(0.003);
        } else {
          // berry profile: force- and displacement-limited, irregular
          const double widths[] = {0.015, 0.02, 0.025};
          item.width = meters(widths[(j / 2) % 3]);
          item.mass = kilograms(j % 4 == 1 ? 0.01 : 0.015);
          item.shape = Shape::Irregular;
          item.fragility_force_limit = newtons(1.0);
          item.fragility_displacement_limit = meters(0.001);
        }
      } else {
        item.width = meters(prof.widths[std::size_t(j) % prof.widths.size()]);
        item.mass = kilograms(prof.masses[std::size_t(j) % prof.masses.size()]);
        item.shape = prof.shapes[std::size_t(j) % prof.shapes.size()];
        if (prof.cls == ItemClass::HardFragile) item.fragility_force_limit = newtons(2.0);
      }
      item.orientation_rad = kOrientations[std::size_t(j) % 4];
      sc.item = item;
      out.push_back(sc);
    }
  }
  // Operating hours, stratified: first quarter in the baseline window
  // [0, 10), half mid-life, last quarter in the final window [90, 100).
  const int quarter = total / 4;
  for (int i = 0; i < total; ++i) {
    double h;
    if (i < quarter)
      h = 10.0 * double(i) / double(std::max(1, quarter));
    else if (i < total - quarter)
      h = 10.0 + 80.0 * (double(i - quarter) + 0.5) / double(std::max(1, total - 2 * quarter));
    else
      h = 90.0 + 10.0 * double(i - (total - quarter)) / double(std::max(1, quarter));
    out[std::size_t(i)].operating_hours = h;
  }
  return out;
}

inline Campaign build_campaign(const CampaignSpec& spec, const GripperConfig& config) {
  Campaign c;
  c.scenarios = build_scenarios(spec, config);
  c.rng_seed = spec.seed;
  c.sample_period_s = spec.sample_period_s;
  c.hours_horizon = spec.hours_horizon;
  return c;
}

}  // namespace gripcheck
