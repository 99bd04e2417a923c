// Traceability report: one row per requirement with its verification-method
// tags, verdict and evidence references. Emitted as JSON (stable schema,
// docs/report-format.md) and as a human-readable table.
#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gripcheck/config.hpp"
#include "gripcheck/dsl.hpp"
#include "gripcheck/monitor.hpp"

namespace gripcheck {

struct CampaignManifest {
  std::uint64_t seed = 0;
  std::size_t n_trials = 0;
  double sample_period_s = 0.0;
  double hours_horizon = 0.0;
  FaultInjection faults;
  bool item_initial_velocity_pinned = true;
  std::string config_hash;
  std::vector<std::string> trace_files;
  std::vector<std::pair<std::uint32_t, std::string>> skipped;
};

inline nlohmann::json manifest_to_json(const CampaignManifest& m) {
  nlohmann::json j;
  j["seed"] = m.seed;
  j["n_trials"] = m.n_trials;
  j["sample_period_s"] = m.sample_period_s;
  j["hours_horizon_h"] = m.hours_horizon;
  j["faults"] = {{"overpressure", m.faults.overpressure},
                 {"degradation_slope_per_h", m.faults.degradation_slope_per_h},
                 {"collision_bug", m.faults.collision_bug},
                 {"speed_violation", m.faults.speed_violation}};
  j["item_initial_velocity_pinned"] = m.item_initial_velocity_pinned;
  j["config_hash"] = m.config_hash;
  j["traces"] = m.trace_files;
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& [trial, reason] : m.skipped) skipped.push_back({{"trial", trial}, {"reason", reason}});
  j["skipped"] = skipped;
  return j;
}

inline CampaignManifest manifest_from_json(const nlohmann::json& j) {
  CampaignManifest m;
  m.seed = j.value("seed", std::uint64_t{0});
  m.n_trials = j.value("n_trials", std::size_t{0});
  m.sample_period_s = j.value("sample_period_s", 0.0);
  m.hours_horizon = j.value("hours_horizon_h", 0.0);
  if (j.contains("faults")) {
    const auto& f = j["faults"];
    m.faults.overpressure = f.value("overpressure", false);
    m.faults.degradation_slope_per_h = f.value("degradation_slope_per_h", 0.0);
    m.faults.collision_bug = f.value("collision_bug", false);
    m.faults.speed_violation = f.value("speed_violation", false);
  }
  m.item_initial_velocity_pinned = j.value("item_initial_velocity_pinned", false);
  m.config_hash = j.value("config_hash", "");
  if (j.contains("traces"))
    for (const auto& t : j["traces"]) m.trace_files.push_back(t.get<std::string>());
  if (j.contains("skipped"))
    for (const auto& s : j["skipped"])
      m.skipped.emplace_back(s.value("trial", 0u), s.value("reason", ""));
  return m;
}

// Writes a file atomically (temp file in the same directory, then rename).
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct TraceabilityRow {
  const Requirement* requirement = nullptr;
  Verdict verdict;
  std::vector<EvidenceRef> evidence;
};

inline int report_exit_code(const std::vector<TraceabilityRow>& rows) {
  bool any_fail = false, any_insufficient = false;
  for (const auto& r : rows) {
    if (r.verdict.status == VerdictStatus::Fail) any_fail = true;
    if (r.verdict.status == VerdictStatus::InsufficientData) any_insufficient = true;
  }
  if (any_fail) return 1;
  if (any_insufficient) return 3;
  return 0;
}

inline std::vector<TraceabilityRow> build_rows(const SpecificationDoc& doc,
                                               const std::vector<RequirementEvaluation>& evals) {
  std::vector<TraceabilityRow> rows;
  rows.reserve(doc.requirements.size());
  for (std::size_t i = 0; i < doc.requirements.size(); ++i)
    rows.push_back({&doc.requirements[i], evals[i].verdict, evals[i].evidence});
  return rows;
}

inline nlohmann::json report_to_json(const SpecificationDoc& doc,
                                     const std::vector<TraceabilityRow>& rows,
                                     const CampaignManifest* manifest, int n_traces, int n_min) {
  nlohmann::json j;
  j["schema"] = "gripcheck-report-v1";
  j["specification"] = {{"name", doc.name}};
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : doc.metadata) meta[k] = v;
  j["specification"]["metadata"] = meta;
  j["campaign"] = manifest ? manifest_to_json(*manifest) : nlohmann::json();
  j["n_traces"] = n_traces;
  j["n_min"] = n_min;

  nlohmann::json reqs = nlohmann::json::array();
  int n_pass = 0, n_fail = 0, n_by_design = 0, n_review = 0, n_insufficient = 0;
  for (const auto& row : rows) {
    const Requirement& r = *row.requirement;
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& m : r.methods) {
      nlohmann::json jm;
      jm["kind"] = std::string(to_name(m.kind));
      if (!m.detail.empty()) jm["detail"] = m.detail;
      methods.push_back(jm);
    }
    nlohmann::json detail = nlohmann::json::object();
    for (const auto& [k, v] : row.verdict.detail) detail[k] = v;
    nlohmann::json evidence = nlohmann::json::array();
    for (const auto& e : row.evidence)
      evidence.push_back(
          {{"trace", e.trace_file}, {"line", e.line}, {"t_s", e.t}, {"message", e.message}});
    nlohmann::json jr;
    jr["id"] = r.id;
    jr["category"] = std::string(to_name(r.category));
    jr["kind"] = std::string(to_name(r.kind()));
    jr["text"] = r.text;
    jr["methods"] = methods;
    jr["verdict"] = {{"status", std::string(to_name(row.verdict.status))},
                     {"n_applicable", row.verdict.n_applicable},
                     {"n_satisfied", row.verdict.n_satisfied},
                     {"point_estimate", row.verdict.point_estimate},
                     {"ci_lower_95", row.verdict.ci_lower_95},
                     {"detail", detail},
                     {"notes", row.verdict.notes}};
    jr["evidence"] = evidence;
    reqs.push_back(jr);
    switch (row.verdict.status) {
      case VerdictStatus::Pass: ++n_pass; break;
      case VerdictStatus::Fail: ++n_fail; break;
      case VerdictStatus::ByDesign: ++n_by_design; break;
      case VerdictStatus::NeedsHumanReview: ++n_review; break;
      case VerdictStatus::InsufficientData: ++n_insufficient; break;
    }
  }
  j["requirements"] = reqs;
  j["summary"] = {{"pass", n_pass},
                  {"fail", n_fail},
                  {"by_design", n_by_design},
                  {"needs_human_review", n_review},
                  {"insufficient_data", n_insufficient},
                  {"exit_code", report_exit_code(rows)}};
  j["footnotes"] = nlohmann::json::array(
      {"The graceful-degradation bound (RQ2.5/RQ2.6) is read as an absolute increase in "
       "percentage points between the baseline and final hour windows; a relative reading "
       "(5% of the baseline rate) would be far stricter at low baseline rates."});
  return j;
}

inline std::string render_table(const std::vector<TraceabilityRow>& rows, bool color) {
  const char* green = color ? "\x1b[32m" : "";
  const char* red = color ? "\x1b[31m" : "";
  const char* yellow = color ? "\x1b[33m" : "";
  const char* dim = color ? "\x1b[2m" : "";
  const char* reset = color ? "\x1b[0m" : "";

  std::ostringstream out;
  out << std::left << std::setw(8) << "id" << std::setw(16) << "category" << std::setw(16)
      << "kind" << std::setw(20) << "verdict" << std::setw(12) << "n" << "methods\n";
  out << std::string(92, '-') << "\n";
  for (const auto& row : rows) {
    const Requirement& r = *row.requirement;
    const char* c = dim;
    switch (row.verdict.status) {
      case VerdictStatus::Pass:
      case VerdictStatus::ByDesign: c = green; break;
      case VerdictStatus::Fail: c = red; break;
      case VerdictStatus::InsufficientData: c = yellow; break;
      case VerdictStatus::NeedsHumanReview: c = dim; break;
    }
    std::string n = row.verdict.n_applicable > 0
                        ? std::to_string(row.verdict.n_satisfied) + "/" +
                              std::to_string(row.verdict.n_applicable)
                        : "-";
    std::string methods;
    for (const auto& m : r.methods) {
      if (!methods.empty()) methods += ", ";
      methods += std::string(to_name(m.kind));
      if (!m.detail.empty()) methods += " (" + m.detail + ")";
    }
    out << std::left << std::setw(8) << r.id << std::setw(16) << std::string(to_name(r.category))
        << std::setw(16) << std::string(to_name(r.kind())) << c << std::setw(20)
        << std::string(to_name(row.verdict.status)) << reset << std::setw(12) << n << methods
        << "\n";
  }
  return out.str();
}

}  // namespace gripcheck
