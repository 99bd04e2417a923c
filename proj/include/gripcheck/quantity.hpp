// Physical quantities with explicit display units and SI storage conversion.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace gripcheck {

// Exact conversion constants. Everything downstream of the parser works in SI.
inline constexpr double kPascalPerPsi = 6894.757;
inline constexpr double kM3sPerLpm = 1.0 / 60000.0;
inline constexpr double kSecondsPerHour = 3600.0;

enum class Dimension {
  Scalar,
  Pressure,
  Length,
  Time,
  Force,
  FlowRate,
  Speed,
  Acceleration,
  Curvature,
  Mass,
};

// A unit carries both its dimension and the factor to SI. Non-SI spellings
// (psi, L/min, mm, h) are kept so that documents print back the way they
// were written.
enum class Unit {
  Scalar,
  Pascal_,
  Psi,
  Meter,
  Millimeter,
  Second,
  Hour,
  Newton,
  CubicMeterPerSecond,
  LiterPerMinute,
  MeterPerSecond,
  MeterPerSecondSquared,
  PerMeter,
  Kilogram,
};

constexpr Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::Scalar: return Dimension::Scalar;
    case Unit::Pascal_:
    case Unit::Psi: return Dimension::Pressure;
    case Unit::Meter:
    case Unit::Millimeter: return Dimension::Length;
    case Unit::Second:
    case Unit::Hour: return Dimension::Time;
    case Unit::Newton: return Dimension::Force;
    case Unit::CubicMeterPerSecond:
    case Unit::LiterPerMinute: return Dimension::FlowRate;
    case Unit::MeterPerSecond: return Dimension::Speed;
    case Unit::MeterPerSecondSquared: return Dimension::Acceleration;
    case Unit::PerMeter: return Dimension::Curvature;
    case Unit::Kilogram: return Dimension::Mass;
  }
  return Dimension::Scalar;
}

constexpr double si_factor(Unit u) {
  switch (u) {
    case Unit::Psi: return kPascalPerPsi;
    case Unit::Millimeter: return 1e-3;
    case Unit::Hour: return kSecondsPerHour;
    case Unit::LiterPerMinute: return kM3sPerLpm;
    default: return 1.0;
  }
}

constexpr std::string_view unit_name(Unit u) {
  switch (u) {
    case Unit::Scalar: return "";
    case Unit::Pascal_: return "Pa";
    case Unit::Psi: return "psi";
    case Unit::Meter: return "m";
    case Unit::Millimeter: return "mm";
    case Unit::Second: return "s";
    case Unit::Hour: return "h";
    case Unit::Newton: return "N";
    case Unit::CubicMeterPerSecond: return "m3/s";
    case Unit::LiterPerMinute: return "L/min";
    case Unit::MeterPerSecond: return "m/s";
    case Unit::MeterPerSecondSquared: return "m/s2";
    case Unit::PerMeter: return "1/m";
    case Unit::Kilogram: return "kg";
  }
  return "";
}

inline std::optional<Unit> parse_unit(std::string_view s) {
  if (s == "Pa") return Unit::Pascal_;
  if (s == "psi") return Unit::Psi;
  if (s == "m") return Unit::Meter;
  if (s == "mm") return Unit::Millimeter;
  if (s == "s") return Unit::Second;
  if (s == "h") return Unit::Hour;
  if (s == "N") return Unit::Newton;
  if (s == "m3/s") return Unit::CubicMeterPerSecond;
  if (s == "L/min" || s == "l/min") return Unit::LiterPerMinute;
  if (s == "m/s") return Unit::MeterPerSecond;
  if (s == "m/s2" || s == "m/s^2") return Unit::MeterPerSecondSquared;
  if (s == "1/m") return Unit::PerMeter;
  if (s == "kg") return Unit::Kilogram;
  return std::nullopt;
}

// value is stored in the display unit; si() converts on read.
struct Quantity {
  double value = 0.0;
  Unit unit = Unit::Scalar;

  constexpr double si() const { return value * si_factor(unit); }
  constexpr Dimension dimension() const { return dimension_of(unit); }
  bool finite() const { return std::isfinite(value); }

  bool operator==(const Quantity&) const = default;
};

constexpr Quantity scalar(double v) { return {v, Unit::Scalar}; }
constexpr Quantity pascals(double v) { return {v, Unit::Pascal_}; }
constexpr Quantity psi(double v) { return {v, Unit::Psi}; }
constexpr Quantity meters(double v) { return {v, Unit::Meter}; }
constexpr Quantity millimeters(double v) { return {v, Unit::Millimeter}; }
constexpr Quantity seconds(double v) { return {v, Unit::Second}; }
constexpr Quantity hours(double v) { return {v, Unit::Hour}; }
constexpr Quantity newtons(double v) { return {v, Unit::Newton}; }
constexpr Quantity liters_per_minute(double v) { return {v, Unit::LiterPerMinute}; }
constexpr Quantity meters_per_second(double v) { return {v, Unit::MeterPerSecond}; }
constexpr Quantity meters_per_second2(double v) { return {v, Unit::MeterPerSecondSquared}; }
constexpr Quantity per_meter(double v) { return {v, Unit::PerMeter}; }
constexpr Quantity kilograms(double v) { return {v, Unit::Kilogram}; }

// Shortest decimal form that round-trips exactly through parsing; used by the
// DSL printer, the JSONL writer and the report so output is deterministic.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string to_string(const Quantity& q) {
  std::string out = format_double(q.value);
  auto name = unit_name(q.unit);
  if (!name.empty()) {
    out.push_back(' ');
    out.append(name);
  }
  return out;
}

}  // namespace gripcheck
