// JSONL codec for traces: one JSON object per line, field names fixed by
// docs/trace-format.md, all quantities in SI with the unit in the field name.
// The writer emits shortest round-tripping decimals so that write -> read is
// the identity and repeated runs are byte-identical.
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gripcheck/trace.hpp"

namespace gripcheck {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(int line, std::string reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}

  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

namespace jsonl_detail {

inline void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
}

inline void field_str(std::string& out, const char* key, std::string_view v) {
  out += '"';
  out += key;
  out += "\":\"";
  append_escaped(out, v);
  out += '"';
}

inline void field_num(std::string& out, const char* key, double v) {
  out += '"';
  out += key;
  out += "\":";
  out += format_double(v);
}

inline void append_vec3(std::string& out, const Vec3& v) {
  out += '[';
  out += format_double(v.x);
  out += ',';
  out += format_double(v.y);
  out += ',';
  out += format_double(v.z);
  out += ']';
}

inline std::string encode_event(const TraceEvent& e) {
  std::string out = "{";
  field_num(out, "t_s", e.t);
  out += ",\"kind\":\"";
  out += to_name(e.kind);
  out += '"';
  if (const auto* m = std::get_if<TrialMeta>(&e.payload)) {
    out += ",\"trial_id\":" + std::to_string(m->trial_id);
    out += ",\"item\":{";
    field_str(out, "class", to_name(m->item.item_class));
    out += ',';
    field_str(out, "shape", to_name(m->item.shape));
    out += ',';
    field_num(out, "width_m", m->item.width.si());
    out += ',';
    field_num(out, "mass_kg", m->item.mass.si());
    out += ',';
    field_num(out, "orientation_rad", m->item.orientation_rad);
    if (m->item.fragility_force_limit) {
      out += ',';
      field_num(out, "force_limit_n", m->item.fragility_force_limit->si());
    }
    if (m->item.fragility_displacement_limit) {
      out += ',';
      field_num(out, "displacement_limit_m", m->item.fragility_displacement_limit->si());
    }
    out += '}';
    out += ",";
    field_num(out, "operating_hours_h", m->operating_hours);
    out += ",\"rng_seed\":" + std::to_string(m->rng_seed);
    out += ',';
    field_num(out, "opening_width_m", m->opening_width_m);
    out += ',';
    field_num(out, "sample_period_s", m->sample_period_s);
  } else if (const auto* p = std::get_if<PhasePayload>(&e.payload)) {
    out += ',';
    field_str(out, "phase", to_name(p->phase));
  } else if (const auto* p = std::get_if<PumpOnPayload>(&e.payload)) {
    out += ',';
    field_num(out, "target_pa", p->target_pa);
    out += ',';
    field_num(out, "flow_m3s", p->flow_m3s);
  } else if (const auto* s = std::get_if<SamplePayload>(&e.payload)) {
    out += ',';
    field_num(out, "pressure_pa", s->pressure_pa);
    out += ',';
    field_num(out, "flow_m3s", s->flow_m3s);
    out += ",\"curvature_per_m\":[" + format_double(s->curvature_per_m[0]) + ',' +
           format_double(s->curvature_per_m[1]) + ']';
    out += ',';
    field_num(out, "fingertip_displacement_m", s->fingertip_displacement_m);
    out += ',';
    field_num(out, "grip_force_n", s->grip_force_n);
    out += ',';
    field_num(out, "gripper_velocity_ms", s->gripper_velocity_ms);
    out += ',';
    field_num(out, "gripper_acceleration_ms2", s->gripper_acceleration_ms2);
    out += ",\"gripper_body_positions_m\":[";
    for (std::size_t i = 0; i < s->gripper_body_positions_m.size(); ++i) {
      if (i) out += ',';
      append_vec3(out, s->gripper_body_positions_m[i]);
    }
    out += "],\"item_position_m\":";
    append_vec3(out, s->item_position_m);
    out += ',';
    field_num(out, "item_velocity_ms", s->item_velocity_ms);
  } else if (const auto* p = std::get_if<DropPayload>(&e.payload)) {
    out += ',';
    field_str(out, "phase", to_name(p->phase));
  } else if (const auto* p = std::get_if<DamagePayload>(&e.payload)) {
    out += ',';
    field_str(out, "mode", p->mode);
    out += ',';
    field_num(out, "value", p->value);
    out += ',';
    field_num(out, "limit", p->limit);
  } else if (const auto* p = std::get_if<CollisionPayload>(&e.payload)) {
    out += ',';
    field_str(out, "segment", p->segment);
  }
  out += '}';
  return out;
}

using json = nlohmann::json;

inline double need_num(const json& j, const char* key, int line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number())
    throw SchemaError(line, std::string("missing or non-numeric field '") + key + "'");
  return it->get<double>();
}

inline std::string need_str(const json& j, const char* key, int line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw SchemaError(line, std::string("missing or non-string field '") + key + "'");
  return it->get<std::string>();
}

inline Vec3 need_vec3(const json& j, const char* key, int line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 3)
    throw SchemaError(line, std::string("field '") + key + "' must be a 3-element array");
  for (const auto& v : *it)
    if (!v.is_number()) throw SchemaError(line, std::string("field '") + key + "' must be numeric");
  return {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
}

inline TraceEvent decode_event(const json& j, int line) {
  TraceEvent e;
  e.line = line;
  e.t = need_num(j, "t_s", line);
  std::string kind_name = need_str(j, "kind", line);
  auto kind = names::from_name(kEventKinds, kind_name);
  if (!kind) throw SchemaError(line, "unknown event kind '" + kind_name + "'");
  e.kind = *kind;
  switch (e.kind) {
    case EventKind::TrialStart: {
      TrialMeta m;
      auto id = j.find("trial_id");
      if (id == j.end() || !id->is_number_unsigned())
        throw SchemaError(line, "missing or invalid field 'trial_id'");
      m.trial_id = id->get<std::uint32_t>();
      auto item = j.find("item");
      if (item == j.end() || !item->is_object())
        throw SchemaError(line, "missing 'item' object");
      std::string cls = need_str(*item, "class", line);
      auto c = names::from_name(names::kItemClasses, cls);
      if (!c) throw SchemaError(line, "unknown item class '" + cls + "'");
      m.item.item_class = *c;
      std::string shp = need_str(*item, "shape", line);
      auto s = names::from_name(names::kShapes, shp);
      if (!s) throw SchemaError(line, "unknown shape '" + shp + "'");
      m.item.shape = *s;
      m.item.width = meters(need_num(*item, "width_m", line));
      m.item.mass = kilograms(need_num(*item, "mass_kg", line));
      m.item.orientation_rad = need_num(*item, "orientation_rad", line);
      if (item->contains("force_limit_n"))
        m.item.fragility_force_limit = newtons(need_num(*item, "force_limit_n", line));
      if (item->contains("displacement_limit_m"))
        m.item.fragility_displacement_limit = meters(need_num(*item, "displacement_limit_m", line));
      m.operating_hours = need_num(j, "operating_hours_h", line);
      auto seed = j.find("rng_seed");
      if (seed == j.end() || !seed->is_number_unsigned())
        throw SchemaError(line, "missing or invalid field 'rng_seed'");
      m.rng_seed = seed->get<std::uint64_t>();
      m.opening_width_m = need_num(j, "opening_width_m", line);
      m.sample_period_s = need_num(j, "sample_period_s", line);
      e.payload = m;
      break;
    }
    case EventKind::PhaseStart:
    case EventKind::PhaseEnd: {
      std::string pn = need_str(j, "phase", line);
      auto p = names::from_name(names::kPhases, pn);
      if (!p) throw SchemaError(line, "unknown phase '" + pn + "'");
      e.payload = PhasePayload{*p};
      break;
    }
    case EventKind::PumpOn:
      e.payload = PumpOnPayload{need_num(j, "target_pa", line), need_num(j, "flow_m3s", line)};
      break;
    case EventKind::Sample: {
      SamplePayload s;
      s.pressure_pa = need_num(j, "pressure_pa", line);
      s.flow_m3s = need_num(j, "flow_m3s", line);
      auto curv = j.find("curvature_per_m");
      if (curv == j.end() || !curv->is_array() || curv->size() != 2)
        throw SchemaError(line, "field 'curvature_per_m' must have one entry per finger");
      for (const auto& v : *curv)
        if (!v.is_number()) throw SchemaError(line, "non-numeric curvature value");
      s.curvature_per_m = {(*curv)[0].get<double>(), (*curv)[1].get<double>()};
      s.fingertip_displacement_m = need_num(j, "fingertip_displacement_m", line);
      s.grip_force_n = need_num(j, "grip_force_n", line);
      s.gripper_velocity_ms = need_num(j, "gripper_velocity_ms", line);
      s.gripper_acceleration_ms2 = need_num(j, "gripper_acceleration_ms2", line);
      auto body = j.find("gripper_body_positions_m");
      if (body == j.end() || !body->is_array() || body->empty())
        throw SchemaError(line, "field 'gripper_body_positions_m' must be a non-empty array");
      for (const auto& seg : *body) {
        if (!seg.is_array() || seg.size() != 3)
          throw SchemaError(line, "gripper body positions must be 3-vectors");
        for (const auto& v : seg)
          if (!v.is_number())
            throw SchemaError(line, "non-numeric gripper body position component");
        s.gripper_body_positions_m.push_back(
            {seg[0].get<double>(), seg[1].get<double>(), seg[2].get<double>()});
      }
      s.item_position_m = need_vec3(j, "item_position_m", line);
      s.item_velocity_ms = need_num(j, "item_velocity_ms", line);
      e.payload = s;
      break;
    }
    case EventKind::ItemDropped: {
      std::string pn = need_str(j, "phase", line);
      auto p = names::from_name(names::kPhases, pn);
      if (!p) throw SchemaError(line, "unknown phase '" + pn + "'");
      e.payload = DropPayload{*p};
      break;
    }
    case EventKind::ItemDamaged:
      e.payload = DamagePayload{need_str(j, "mode", line), need_num(j, "value", line),
                                need_num(j, "limit", line)};
      break;
    case EventKind::Collision:
      e.payload = CollisionPayload{need_str(j, "segment", line)};
      break;
    default:
      e.payload = std::monostate{};
      break;
  }
  return e;
}

}  // namespace jsonl_detail

// Serializes a validated trace, one event per line. Throws SchemaError when
// the trace breaks a model invariant and propagates stream failures.
inline void write_jsonl(const Trace& trace, std::ostream& out) {
  auto issues = validate_trace(trace);
  if (!issues.empty())
    throw SchemaError(issues.front().event_index + 1,
                      "refusing to write invalid trace: " + issues.front().message);
  std::string buf;
  for (const auto& e : trace.events) {
    buf = jsonl_detail::encode_event(e);
    buf.push_back('\n');
    out.write(buf.data(), std::streamsize(buf.size()));
  }
  if (!out) throw std::runtime_error("trace write failed: output stream in error state");
}

// Parses one trace from a JSONL stream, enforcing every trace invariant.
inline Trace read_jsonl(std::istream& in) {
  Trace trace;
  std::string line;
  int line_no = 0;
  std::vector<int> event_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(line_no, "each line must be a JSON object");
    trace.events.push_back(jsonl_detail::decode_event(j, line_no));
    event_lines.push_back(line_no);
  }
  if (trace.events.empty()) throw SchemaError(line_no, "empty trace stream");
  if (const auto* m = std::get_if<TrialMeta>(&trace.events.front().payload)) trace.meta = *m;
  auto issues = validate_trace(trace);
  if (!issues.empty()) {
    const auto& worst = issues.front();
    int at = worst.event_index >= 0 && worst.event_index < int(event_lines.size())
                 ? event_lines[std::size_t(worst.event_index)]
                 : line_no;
    throw SchemaError(at, worst.message + " at line " + std::to_string(at));
  }
  return trace;
}

}  // namespace gripcheck
