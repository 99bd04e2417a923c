// Command implementations behind the gripcheck binary. Exit codes are the
// machine contract:
//   simulate: 0 ok, 2 config error
//   verify:   0 all pass/by-design, 1 any fail, 2 format error,
//             3 insufficient data
//   catalog:  0 ok, 2 I/O error
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gripcheck/catalog.hpp"
#include "gripcheck/cli_faults.hpp"
#include "gripcheck/report.hpp"
#include "gripcheck/trace_jsonl.hpp"

namespace gripcheck {

inline std::string trace_file_name(std::uint32_t trial) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%05u.jsonl", trial);
  return buf;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> faults;  // k or k=v, see parse_fault_flag
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& err = std::cerr) {
  namespace fs = std::filesystem;
  SimSetup setup;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      err << "error: cannot open config file '" << opt.config_path << "'\n";
      return 2;
    }
    try {
      setup = parse_config(in);
    } catch (const ConfigError& e) {
      err << "error: " << opt.config_path << ": " << e.what() << "\n";
      return 2;
    }
  }
  if (opt.seed) setup.campaign.seed = *opt.seed;
  for (const auto& flag : opt.faults) {
    if (auto problem = parse_fault_flag(flag, setup.campaign.faults)) {
      err << "error: " << *problem << "\n";
      return 2;
    }
  }

  Campaign campaign = build_campaign(setup.campaign, setup.gripper);
  CampaignRun run = run_campaign(campaign, setup.gripper);

  fs::path out_dir(opt.out_dir.empty() ? "." : opt.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << out_dir.string() << "'\n";
    return 2;
  }

  CampaignManifest manifest;
  manifest.seed = campaign.rng_seed;
  manifest.n_trials = run.traces.size();
  manifest.sample_period_s = campaign.sample_period_s;
  manifest.hours_horizon = campaign.hours_horizon;
  manifest.faults = setup.campaign.faults;
  manifest.item_initial_velocity_pinned = true;  // items start at rest, always
  manifest.config_hash = fnv1a_hex(canonical_config(setup));
  manifest.skipped = run.skipped;

  for (const auto& trace : run.traces) {
    const std::string name = trace_file_name(trace.meta.trial_id);
    std::ostringstream buf;
    write_jsonl(trace, buf);
    atomic_write(out_dir / name, buf.str());
    manifest.trace_files.push_back(name);
  }
  atomic_write(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string spec_path;   // empty: built-in catalog
  std::string traces_dir;
  std::string report_path;  // empty: <traces_dir>/report.json
  std::string format = "table";
  int n_min = 100;
};

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  namespace fs = std::filesystem;

  SpecificationDoc doc;
  if (opt.spec_path.empty()) {
    doc = builtin_catalog();
  } else {
    std::ifstream in(opt.spec_path);
    if (!in) {
      err << "error: cannot open spec file '" << opt.spec_path << "'\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ParseResult parsed = parse_spec(buf.str());
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors)
        err << opt.spec_path << ":" << e.span.line << ":" << e.span.column << ": " << e.message
            << "\n";
      return 2;
    }
    doc = std::move(*parsed.doc);
  }

  fs::path dir(opt.traces_dir);
  if (!fs::is_directory(dir)) {
    err << "error: trace directory '" << dir.string() << "' does not exist\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "error: no .jsonl traces in '" << dir.string() << "'\n";
    return 2;
  }

  AggregateOptions agg;
  agg.n_min = opt.n_min;
  CampaignManifest manifest;
  bool have_manifest = false;
  if (fs::exists(dir / "manifest.json")) {
    try {
      std::ifstream in(dir / "manifest.json");
      nlohmann::json j = nlohmann::json::parse(in);
      manifest = manifest_from_json(j);
      have_manifest = true;
      agg.item_velocity_pinned = manifest.item_initial_velocity_pinned;
    } catch (const std::exception& e) {
      err << "error: malformed manifest.json: " << e.what() << "\n";
      return 2;
    }
  }

  SpecEvaluator evaluator(doc, agg);
  int n_traces = 0;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    try {
      Trace trace = read_jsonl(in);
      evaluator.add_trace(trace, file.filename().string());
      ++n_traces;
    } catch (const SchemaError& e) {
      err << "error: " << file.string() << ": " << e.what() << "\n";
      return 2;
    }
  }

  std::vector<TraceabilityRow> rows = build_rows(doc, evaluator.finish());
  nlohmann::json report =
      report_to_json(doc, rows, have_manifest ? &manifest : nullptr, n_traces, opt.n_min);
  fs::path report_path =
      opt.report_path.empty() ? dir / "report.json" : fs::path(opt.report_path);
  atomic_write(report_path, report.dump(2) + "\n");

  if (opt.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    const bool color = std::getenv("GRIPCHECK_NO_COLOR") == nullptr;
    out << render_table(rows, color);
  }
  return report_exit_code(rows);
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

struct CatalogOptions {
  std::string out_path;  // empty: stdout
};

inline int cmd_catalog(const CatalogOptions& opt, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  const std::string text = print_spec(builtin_catalog());
  if (opt.out_path.empty()) {
    out << text;
    return 0;
  }
  try {
    atomic_write(opt.out_path, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace gripcheck
