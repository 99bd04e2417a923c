// Config file loader for simulation runs: a small TOML subset with
// [section] headers, `key = value` lines and '#' comments. The key set is
// closed and documented in docs/config-format.md; unknown keys are errors so
// unit typos cannot pass silently. All values are SI.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gripcheck/sim.hpp"

namespace gripcheck {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct SimSetup {
  GripperConfig gripper;
  CampaignSpec campaign;
};

namespace config_detail {

struct Binding {
  enum class Type { Double, Int, U64, Bool } type;
  void* target;
};

inline std::map<std::string, Binding> bindings(SimSetup& s) {
  using T = Binding::Type;
  auto& g = s.gripper;
  auto& c = s.campaign;
  return {
      {"gripper.finger_length_m", {T::Double, &g.finger_length_m}},
      {"gripper.finger_width_m", {T::Double, &g.finger_width_m}},
      {"gripper.finger_thickness_m", {T::Double, &g.finger_thickness_m}},
      {"gripper.recycled_fraction", {T::Double, &g.recycled_fraction}},
      {"gripper.opening_width_m", {T::Double, &g.opening_width_m}},
      {"gripper.curvature_gain", {T::Double, &g.curvature_gain}},
      {"gripper.commanded_pressure_pa", {T::Double, &g.commanded_pressure_pa}},
      {"gripper.nominal_flow_m3s", {T::Double, &g.nominal_flow_m3s}},
      {"gripper.pressure_limit_lo_pa", {T::Double, &g.pressure_limit_lo_pa}},
      {"gripper.pressure_limit_hi_pa", {T::Double, &g.pressure_limit_hi_pa}},
      {"gripper.flow_limit_lo_m3s", {T::Double, &g.flow_limit_lo_m3s}},
      {"gripper.flow_limit_hi_m3s", {T::Double, &g.flow_limit_hi_m3s}},
      {"gripper.chamber_volume_m3", {T::Double, &g.chamber_volume_m3}},
      {"gripper.fill_pressure_scale_pa", {T::Double, &g.fill_pressure_scale_pa}},
      {"gripper.vent_time_constant_s", {T::Double, &g.vent_time_constant_s}},
      {"gripper.force_gain_hard_n_per_pa", {T::Double, &g.force_gain_hard_n_per_pa}},
      {"gripper.force_gain_soft_n_per_pa", {T::Double, &g.force_gain_soft_n_per_pa}},
      {"gripper.displacement_gain_hard_m_per_pa", {T::Double, &g.displacement_gain_hard_m_per_pa}},
      {"gripper.displacement_gain_soft_m_per_pa", {T::Double, &g.displacement_gain_soft_m_per_pa}},
      {"gripper.grasp_force_threshold_n", {T::Double, &g.grasp_force_threshold_n}},
      {"gripper.release_force_threshold_n", {T::Double, &g.release_force_threshold_n}},
      {"gripper.fragility_stop_fraction", {T::Double, &g.fragility_stop_fraction}},
      {"gripper.approach_speed_ms", {T::Double, &g.approach_speed_ms}},
      {"gripper.approach_accel_ms2", {T::Double, &g.approach_accel_ms2}},
      {"gripper.travel_speed_ms", {T::Double, &g.travel_speed_ms}},
      {"gripper.travel_accel_ms2", {T::Double, &g.travel_accel_ms2}},
      {"gripper.approach_distance_m", {T::Double, &g.approach_distance_m}},
      {"gripper.hover_clearance_m", {T::Double, &g.hover_clearance_m}},
      {"gripper.lift_height_m", {T::Double, &g.lift_height_m}},
      {"gripper.translate_distance_m", {T::Double, &g.translate_distance_m}},
      {"gripper.pregrasp_settle_s", {T::Double, &g.pregrasp_settle_s}},
      {"gripper.plateau_settle_s", {T::Double, &g.plateau_settle_s}},
      {"gripper.vent_tail_s", {T::Double, &g.vent_tail_s}},
      {"gripper.drop_logit_bias", {T::Double, &g.drop_logit_bias}},
      {"gripper.drop_logit_size", {T::Double, &g.drop_logit_size}},
      {"gripper.drop_logit_force", {T::Double, &g.drop_logit_force}},
      {"gripper.drop_time_horizon_s", {T::Double, &g.drop_time_horizon_s}},
      {"gripper.overpressure_target_pa", {T::Double, &g.overpressure_target_pa}},
      {"gripper.violation_speed_ms", {T::Double, &g.violation_speed_ms}},
      {"gripper.violation_accel_ms2", {T::Double, &g.violation_accel_ms2}},
      {"campaign.trials_per_class", {T::Int, &c.trials_per_class}},
      {"campaign.seed", {T::U64, &c.seed}},
      {"campaign.sample_period_s", {T::Double, &c.sample_period_s}},
      {"campaign.hours_horizon_h", {T::Double, &c.hours_horizon}},
      {"faults.overpressure", {T::Bool, &c.faults.overpressure}},
      {"faults.degradation_slope_per_h", {T::Double, &c.faults.degradation_slope_per_h}},
      {"faults.collision_bug", {T::Bool, &c.faults.collision_bug}},
      {"faults.speed_violation", {T::Bool, &c.faults.speed_violation}},
  };
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace config_detail

inline SimSetup parse_config(std::istream& in) {
  using namespace config_detail;
  SimSetup setup;
  auto table = bindings(setup);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section != "gripper" && section != "campaign" && section != "faults")
        throw ConfigError(line_no, "unknown section '" + section + "'");
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (section.empty()) throw ConfigError(line_no, "key outside any section");
    auto it = table.find(section + "." + key);
    if (it == table.end())
      throw ConfigError(line_no, "unknown key '" + key + "' in section [" + section + "]");
    const auto& binding = it->second;
    const char* b = value.data();
    const char* e = b + value.size();
    switch (binding.type) {
      case Binding::Type::Double: {
        double v;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || p != e) throw ConfigError(line_no, "expected a number");
        *static_cast<double*>(binding.target) = v;
        break;
      }
      case Binding::Type::Int: {
        int v;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || p != e) throw ConfigError(line_no, "expected an integer");
        *static_cast<int*>(binding.target) = v;
        break;
      }
      case Binding::Type::U64: {
        std::uint64_t v;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || p != e) throw ConfigError(line_no, "expected an unsigned integer");
        *static_cast<std::uint64_t*>(binding.target) = v;
        break;
      }
      case Binding::Type::Bool: {
        if (value == "true")
          *static_cast<bool*>(binding.target) = true;
        else if (value == "false")
          *static_cast<bool*>(binding.target) = false;
        else
          throw ConfigError(line_no, "expected 'true' or 'false'");
        break;
      }
    }
  }
  if (setup.campaign.trials_per_class <= 0)
    throw ConfigError(line_no, "campaign.trials_per_class must be positive");
  if (setup.campaign.sample_period_s <= 0)
    throw ConfigError(line_no, "campaign.sample_period_s must be positive");
  return setup;
}

// Canonical serialization of the effective setup; hashed into the campaign
// manifest so a report can be traced back to its exact configuration.
inline std::string canonical_config(const SimSetup& setup) {
  SimSetup copy = setup;
  auto table = config_detail::bindings(copy);
  std::string out;
  for (const auto& [key, binding] : table) {  // std::map: sorted, stable
    out += key;
    out += '=';
    switch (binding.type) {
      case config_detail::Binding::Type::Double:
        out += format_double(*static_cast<double*>(binding.target));
        break;
      case config_detail::Binding::Type::Int:
        out += std::to_string(*static_cast<int*>(binding.target));
        break;
      case config_detail::Binding::Type::U64:
        out += std::to_string(*static_cast<std::uint64_t*>(binding.target));
        break;
      case config_detail::Binding::Type::Bool:
        out += *static_cast<bool*>(binding.target) ? "true" : "false";
        break;
    }
    out += '\n';
  }
  return out;
}

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gripcheck
