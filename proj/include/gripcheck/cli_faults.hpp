// Parsing for repeatable --fault k[=v] flags.
#pragma once

#include <charconv>
#include <optional>
#include <string>

#include "gripcheck/sim.hpp"

namespace gripcheck {

// Applies one --fault flag to the injection config. Returns an error message
// on bad input, nothing on success. Supported knobs:
//   overpressure[=true|false]
//   degradation=<slope per hour>        (alias: degradation_slope_per_h)
//   collision_bug[=true|false]
//   speed_violation[=true|false]
inline std::optional<std::string> parse_fault_flag(const std::string& flag, FaultInjection& out) {
  std::string key = flag, value;
  if (auto eq = flag.find('='); eq != std::string::npos) {
    key = flag.substr(0, eq);
    value = flag.substr(eq + 1);
  }
  auto as_bool = [&](bool& target) -> std::optional<std::string> {
    if (value.empty() || value == "true" || value == "1")
      target = true;
    else if (value == "false" || value == "0")
      target = false;
    else
      return "fault '" + key + "' takes true/false, got '" + value + "'";
    return std::nullopt;
  };
  if (key == "overpressure") return as_bool(out.overpressure);
  if (key == "collision_bug") return as_bool(out.collision_bug);
  if (key == "speed_violation") return as_bool(out.speed_violation);
  if (key == "degradation" || key == "degradation_slope_per_h") {
    if (value.empty()) return std::string("fault 'degradation' needs a per-hour slope value");
    double v;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      return "fault 'degradation' needs a numeric slope, got '" + value + "'";
    out.degradation_slope_per_h = v;
    return std::nullopt;
  }
  return "unknown fault '" + key + "'";
}

}  // namespace gripcheck
