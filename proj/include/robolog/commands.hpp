#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "robolog/config.hpp"
#include "robolog/experiment.hpp"
#include "robolog/log_io.hpp"
#include "robolog/models/detector.hpp"
#include "robolog/planner.hpp"

namespace robolog {

// Command-line overrides layered over a config file or preset.
struct CliOverrides {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::optional<std::string> out;
  std::optional<std::string> models;
};

inline constexpr const char* kOutEnvVar = "ROBOLOG_OUT";

// Precedence: --config, else --preset, else the context1 preset; flags
// override file values; --out beats the file's `out`, which beats
// $ROBOLOG_OUT.
inline ExperimentConfig resolve_config(const CliOverrides& o) {
  if (o.config_path && o.preset)
    throw Error(ErrorCode::ConfigError, "--config and --preset are mutually exclusive");
  ExperimentConfig cfg = o.config_path ? load_config_file(*o.config_path)
                                       : preset_config(o.preset.value_or("context1"));
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.models) cfg = parse_config("[experiment]\nmodels = " + *o.models + "\n", cfg);
  if (o.out) {
    cfg.out_dir = *o.out;
  } else if (cfg.out_dir.empty()) {
    if (const char* env = std::getenv(kOutEnvVar)) cfg.out_dir = env;
  }
  cfg.validate();
  return cfg;
}

inline std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
  if (cfg.out_dir.empty())
    throw Error(ErrorCode::ConfigError,
                "no output directory: pass --out, set `out` in [experiment] or set ROBOLOG_OUT");
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + cfg.out_dir + ": " + ec.message());
  return cfg.out_dir;
}

// --- generate ----------------------------------------------------------

inline constexpr std::string_view kManifestHeader =
    "file,context,seed,anomaly_kind,rate,burst_len,magnitude,anomaly_seed";

// Writes normal_<i>.csv, anomalous_<i>.csv and manifest.csv.
inline std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& cfg,
                                                       std::size_t count_normal,
                                                       std::size_t count_anomalous) {
  const auto dir = prepare_out_dir(cfg);
  const GeneratedLogs logs = generate_logs(cfg, cfg.base_seed, count_normal, count_anomalous);
  std::vector<std::filesystem::path> files;
  std::string manifest = std::string(kManifestHeader) + "\n";
  auto emit = [&](const std::vector<GeneratedLog>& group, const std::string& prefix) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      const std::string name = prefix + "_" + std::to_string(i) + ".csv";
      write_log(group[i].traj, dir / name);
      files.push_back(dir / name);
      manifest += name + "," + std::string(to_string(cfg.context)) + "," +
                  std::to_string(group[i].sim_seed) + ",";
      if (const auto& a = group[i].anomaly)
        manifest += std::string(to_string(a->kind)) + "," + format_double(a->rate) + "," +
                    std::to_string(a->burst_len) + "," + format_double(a->magnitude) + "," +
                    std::to_string(a->seed) + "\n";
      else
        manifest += "none,0,0,0,0\n";
    }
  };
  emit(logs.normals, "normal");
  emit(logs.anomalous, "anomalous");
  write_text_file(dir / "manifest.csv", manifest);
  files.push_back(dir / "manifest.csv");
  return files;
}

struct LogSet {
  std::vector<Trajectory> normals;
  std::vector<Trajectory> anomalous;
};

// Reads the logs listed in <dir>/manifest.csv.
inline LogSet read_log_dir(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.csv", std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + (dir / "manifest.csv").string());
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader)
    throw Error(ErrorCode::MalformedHeader, "manifest.csv: unexpected header");
  LogSet set;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 8)
      throw Error(ErrorCode::MalformedLine, "manifest.csv line " + std::to_string(line_no));
    const std::string file(fields[0]);
    const Context ctx = parse_context(fields[1]);
    Trajectory t = read_log(dir / file, ctx);
    (file.rfind("anomalous_", 0) == 0 ? set.anomalous : set.normals).push_back(std::move(t));
  }
  return set;
}

inline DatasetSplit split_logs(const ExperimentConfig& cfg, const LogSet& logs) {
  return build_dataset(logs.normals, logs.anomalous, cfg.test_fraction,
                       derive_seed(cfg.base_seed, kSplitStream));
}

inline std::filesystem::path checkpoint_path(const std::filesystem::path& dir, ModelKind k) {
  return dir / ("model_" + std::string(to_string(k)) + ".txt");
}

// --- train / eval ------------------------------------------------------

inline std::vector<std::filesystem::path> cmd_train(const ExperimentConfig& cfg,
                                                    const std::filesystem::path& logs_dir) {
  const auto dir = prepare_out_dir(cfg);
  const DatasetSplit split = split_logs(cfg, read_log_dir(logs_dir));
  std::vector<std::filesystem::path> files;
  for (ModelKind kind : cfg.models) {
    save_checkpoint(train_detector(kind, split.train, cfg, cfg.base_seed), checkpoint_path(dir, kind));
    files.push_back(checkpoint_path(dir, kind));
  }
  return files;
}

inline void write_report_files(const EvalReport& report, const std::filesystem::path& dir) {
  write_text_file(dir / "report.csv", report_csv(report));
  for (const auto& m : report.models)
    write_text_file(dir / ("roc_" + std::string(to_string(m.kind)) + ".csv"), roc_csv(m.kind, m.roc));
}

inline EvalReport cmd_eval(const ExperimentConfig& cfg, const std::filesystem::path& logs_dir,
                           const std::filesystem::path& model_dir) {
  const auto dir = prepare_out_dir(cfg);
  const DatasetSplit split = split_logs(cfg, read_log_dir(logs_dir));
  EvalReport report;
  report.context = cfg.context;
  report.iterations = 1;
  for (ModelKind kind : cfg.models)
    record_iteration(report, kind, evaluate_detector(load_checkpoint(checkpoint_path(model_dir, kind)), split.test));
  write_report_files(report, dir);
  return report;
}

// --- run ---------------------------------------------------------------

inline EvalReport cmd_run(const ExperimentConfig& cfg, bool emit_accel_traces) {
  const auto dir = prepare_out_dir(cfg);
  const ExperimentResult result = run_experiment(cfg);
  write_report_files(result.report, dir);
  if (emit_accel_traces) {
    std::size_t i = 0;
    for (const auto* group : {&result.first_logs.normals, &result.first_logs.anomalous})
      for (const auto& log : *group)
        write_text_file(dir / ("accel_trace_" + std::to_string(i++) + ".csv"),
                        accel_trace_csv(log.traj));
  }
  return result.report;
}

// --- plan --------------------------------------------------------------

inline Cell parse_cell(std::string_view text) {
  const auto parts = split(text, ',');
  long long x, y;
  if (parts.size() != 2 || !parse_int(trim(parts[0]), x) || !parse_int(trim(parts[1]), y))
    throw Error(ErrorCode::InvalidArgument, "expected a cell as `x,y`, got `" + std::string(text) + "`");
  return {static_cast<int>(x), static_cast<int>(y)};
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoPath = 2;

// Prints `cost=<6 decimals>` then one `cx,cy,wx,wy` line per waypoint.
inline int cmd_plan(const GridMap& grid, Cell start, Cell goal, std::ostream& out,
                    std::ostream& err) {
  const auto path = plan(grid, start, goal);
  if (!path) {
    err << "error: NoPath: no path from " << to_string(start) << " to " << to_string(goal) << '\n';
    return kExitNoPath;
  }
  out << "cost=" << format_fixed(path->cost, 6) << '\n';
  out << "waypoints=" << path->cells.size() << '\n';
  for (std::size_t i = 0; i < path->cells.size(); ++i)
    out << path->cells[i].x << ',' << path->cells[i].y << ',' << format_double(path->world_points[i].x)
        << ',' << format_double(path->world_points[i].y) << '\n';
  return kExitOk;
}

// --- roc ---------------------------------------------------------------

// Reads a `score,label` CSV and writes roc_<model>.csv; returns the AUC.
inline double cmd_roc(const std::filesystem::path& scores_file, ModelKind model,
                      const std::filesystem::path& out_dir) {
  std::ifstream in(scores_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + scores_file.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "score,label")
    throw Error(ErrorCode::MalformedHeader, scores_file.string() + ": expected header `score,label`");
  std::vector<double> scores;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    double s;
    if (f.size() != 2 || !parse_double(f[0], s) || (trim(f[1]) != "0" && trim(f[1]) != "1"))
      throw Error(ErrorCode::MalformedLine, scores_file.string() + " line " + std::to_string(line_no));
    scores.push_back(s);
    labels.push_back(trim(f[1]) == "1" ? 1 : 0);
  }
  const auto curve = roc_curve(scores, labels);
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / ("roc_" + std::string(to_string(model)) + ".csv"), roc_csv(model, curve));
  return auc(curve);
}

}  // namespace robolog
