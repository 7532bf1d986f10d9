#pragma once

// Operator commands: validate, ingest, export, bundle, serve.
//
// Exit codes: 0 success, 1 validation errors (or a malformed dataset),
// 2 usage error. Options may also come from a config file named by the
// PROVENANCE_ATLAS_CONFIG environment variable (INI/TOML, same keys).

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <pthread.h>

#include <CLI11.hpp>

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/atlas.hpp"
#include "provenance_atlas/bundling.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/export.hpp"
#include "provenance_atlas/json_views.hpp"
#include "provenance_atlas/normalized.hpp"
#include "provenance_atlas/service.hpp"

namespace provenance_atlas {

struct CliConfig {
  std::string dataset;
  std::string gazetteer;
  int bucket_width = 25;
  int level = 0;
  std::string listen = "127.0.0.1:8080";
  std::string out = "out";
  std::string order = "frequency";
};

namespace detail {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::optional<std::string> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

inline Atlas load_for(const CliConfig& cfg) {
  if (cfg.dataset.empty()) throw UsageError("a dataset path is required (--dataset or positional)");
  return Atlas::load(cfg.dataset, opt_path(cfg.gazetteer));
}

inline void print_findings(const IngestReport& report, std::ostream& out) {
  std::size_t errors = 0, warnings = 0;
  for (const auto& f : report.findings) {
    (f.severity == Severity::Error ? errors : warnings)++;
    out << to_string(f.severity) << ' ' << f.copy_id;
    if (f.provenance_index) out << " #" << *f.provenance_index;
    out << ' ' << f.rule << ": " << f.message << '\n';
  }
  out << errors << " errors, " << warnings << " warnings\n";
}

inline int exit_for(const Atlas& atlas) { return atlas.has_errors() ? kExitValidation : kExitOk; }

inline std::filesystem::path out_dir(const CliConfig& cfg) {
  if (cfg.out.empty()) throw UsageError("--out must not be empty");
  return cfg.out;
}

inline int cmd_validate(const CliConfig& cfg, std::ostream& out) {
  const auto atlas = load_for(cfg);
  out << atlas.report.copies_loaded << " copies, " << atlas.report.provenances_loaded << " provenances\n";
  print_findings(atlas.report, out);
  return exit_for(atlas);
}

inline int cmd_ingest(const CliConfig& cfg, std::ostream& out) {
  const auto atlas = load_for(cfg);
  const auto dir = out_dir(cfg);
  write_file(dir / "dataset.normalized.json", to_normalized_json(atlas.dataset).dump(2) + "\n");
  write_file(dir / "ingest_report.json", to_json(atlas.report).dump(2) + "\n");
  out << "loaded " << atlas.report.copies_loaded << " copies, " << atlas.report.provenances_loaded
      << " provenances; " << atlas.report.unresolved_places.size() << " unresolved places\n";
  out << "digest " << atlas.snapshot.digest << '\n';
  print_findings(atlas.report, out);
  return exit_for(atlas);
}

inline int cmd_export(const CliConfig& cfg, std::ostream& out) {
  if (cfg.bucket_width < 1) throw UsageError("--bucket must be at least 1");
  GridOrdering ordering;
  if (cfg.order == "frequency") {
    ordering = GridOrdering::Frequency;
  } else if (cfg.order == "alphabetical") {
    ordering = GridOrdering::Alphabetical;
  } else {
    throw UsageError("--order must be frequency or alphabetical");
  }
  const auto atlas = load_for(cfg);
  const auto dir = out_dir(cfg);
  write_file(dir / "od_matrix.csv", to_csv(od_matrix(atlas.transfers, ordering)));
  write_file(dir / "time_heatmap.csv", to_csv(time_heatmap(atlas.dataset, TimeBuckets{cfg.bucket_width, {}})));
  write_file(dir / "location_heatmap.csv", to_csv(location_heatmap(atlas.dataset)));
  write_file(dir / "transfers.csv", transfers_to_csv(atlas.transfers));
  write_file(dir / "dataset.normalized.json", to_normalized_json(atlas.dataset).dump(2) + "\n");
  json snap = to_json(atlas.snapshot);
  snap.erase("loaded_at");
  write_file(dir / "snapshot.json", snap.dump(2) + "\n");
  out << "wrote 6 files to " << dir.string() << "\n";
  out << "digest " << atlas.snapshot.digest << '\n';
  return exit_for(atlas);
}

inline int cmd_bundle(const CliConfig& cfg, std::ostream& out) {
  const auto atlas = load_for(cfg);
  const auto geo = bundle_transfers(atlas.transfers, cfg.level);
  const auto dir = out_dir(cfg);
  const auto path = dir / ("bundle_level" + std::to_string(cfg.level) + ".json");
  json body = to_json(geo);
  body["digest"] = atlas.snapshot.digest;
  write_file(path, body.dump() + "\n");
  out << "wrote " << geo.edges.size() << " edges to " << path.string() << '\n';
  return exit_for(atlas);
}

inline ServiceConfig parse_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw UsageError("--listen must be host:port");
  ServiceConfig sc;
  sc.host = listen.substr(0, colon);
  try {
    std::size_t used = 0;
    sc.port = std::stoi(listen.substr(colon + 1), &used);
    if (used != listen.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw UsageError("--listen port must be an integer");
  }
  if (sc.host.empty() || sc.port < 0 || sc.port > 65535) throw UsageError("--listen must be host:port");
  return sc;
}

inline int cmd_serve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto sc = parse_listen(cfg.listen);
  auto atlas = std::make_shared<const Atlas>(load_for(cfg));
  if (atlas->has_errors()) {
    print_findings(atlas->report, err);
    err << "refusing to serve a dataset with validation errors\n";
    return kExitValidation;
  }
  // Block termination signals here so the server threads inherit the mask and
  // this thread can wait for them synchronously.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto handle = serve(atlas, sc);
  out << "serving " << atlas->snapshot.counts.copies << " copies on http://" << handle.host() << ':'
      << handle.port() << " (digest " << atlas->snapshot.digest << ")" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  handle.stop();
  out << "stopped\n";
  return kExitOk;
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CliConfig cfg;
  CLI::App app{"Book provenance atlas: ingest, export, bundle and serve provenance datasets"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--dataset", cfg.dataset, "Dataset JSON file");
  app.add_option("--gazetteer", cfg.gazetteer, "Gazetteer CSV file");
  app.add_option("--bucket", cfg.bucket_width, "Time heatmap bucket width in years")->capture_default_str();
  app.add_option("--level", cfg.level, "Bundling level 0..4")->check(CLI::Range(0, kMaxBundleLevel))->capture_default_str();
  app.add_option("--listen", cfg.listen, "Service address host:port")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--order", cfg.order, "OD matrix ordering: frequency or alphabetical")->capture_default_str();

  const char* config_env = std::getenv("PROVENANCE_ATLAS_CONFIG");
  const std::string config_path = config_env ? config_env : "";
  app.set_config("--config", config_path, "Config file with the same keys", !config_path.empty());

  std::string positional;
  auto add_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("dataset", positional, "Dataset JSON file (overrides --dataset)");
    return sub;
  };
  auto* validate = add_cmd("validate", "Parse a dataset and print validation findings");
  auto* ingest = add_cmd("ingest", "Parse and geocode; write the normalized dataset and ingest report");
  auto* exp = add_cmd("export", "Write heatmap grids, transfers and the normalized dataset");
  auto* bundle = add_cmd("bundle", "Write bundled path geometry for --level");
  auto* srv = add_cmd("serve", "Run the HTTP API");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return detail::kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return detail::kExitUsage;
  }
  if (!positional.empty()) cfg.dataset = positional;

  try {
    if (validate->parsed()) return detail::cmd_validate(cfg, out);
    if (ingest->parsed()) return detail::cmd_ingest(cfg, out);
    if (exp->parsed()) return detail::cmd_export(cfg, out);
    if (bundle->parsed()) return detail::cmd_bundle(cfg, out);
    if (srv->parsed()) return detail::cmd_serve(cfg, out, err);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return detail::kExitUsage;
  } catch (const Error& e) {
    err << e.code_name() << ": " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::MalformedDocument:
      case ErrorCode::ValidationFailed:
        return detail::kExitValidation;
      default:
        return detail::kExitUsage;
    }
  }
  return detail::kExitUsage;
}

}  // namespace provenance_atlas
