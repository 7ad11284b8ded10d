#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "robolog/anomaly.hpp"
#include "robolog/config.hpp"
#include "robolog/dataset.hpp"
#include "robolog/error.hpp"
#include "robolog/format.hpp"
#include "robolog/grid.hpp"
#include "robolog/metrics.hpp"
#include "robolog/models/detector.hpp"
#include "robolog/random.hpp"
#include "robolog/simulator.hpp"

namespace robolog {

// Seed streams; each consumer gets its own derived seed.
enum SeedStream : std::uint64_t {
  kNormalSimStream = 1,
  kAnomalousSimStream = 2,
  kInjectStream = 3,
  kSplitStream = 4,
  kTrainStream = 10,
};

struct GeneratedLog {
  Trajectory traj;
  Cell start;
  Cell goal;
  std::uint64_t sim_seed = 0;
  std::optional<AnomalyConfig> anomaly;
};

struct GeneratedLogs {
  std::vector<GeneratedLog> normals;
  std::vector<GeneratedLog> anomalous;

  static std::vector<Trajectory> trajectories(const std::vector<GeneratedLog>& logs) {
    std::vector<Trajectory> out;
    out.reserve(logs.size());
    for (const auto& l : logs) out.push_back(l.traj);
    return out;
  }
};

namespace detail {

inline constexpr std::size_t kScenarioAttempts = 32;

// Two distinct free cells of the inflated map at least `min_travel` apart.
inline std::pair<Cell, Cell> random_endpoints(const GridMap& inflated, double min_travel,
                                              Rng& rng) {
  std::vector<Cell> free;
  for (int y = 0; y < inflated.height(); ++y)
    for (int x = 0; x < inflated.width(); ++x)
      if (!inflated.occupied_unchecked({x, y})) free.push_back({x, y});
  if (free.size() < 2) throw Error(ErrorCode::NoPath, "grid has fewer than two free cells");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Cell a = free[uniform_index(rng, free.size())];
    const Cell b = free[uniform_index(rng, free.size())];
    if (a == b) continue;
    const Point2 pa = inflated.world_of(a), pb = inflated.world_of(b);
    if (std::hypot(pa.x - pb.x, pa.y - pb.y) >= min_travel) return {a, b};
  }
  throw Error(ErrorCode::NoPath, "no endpoint pair satisfies min_travel");
}

inline bool retryable(const Error& e) {
  return e.code() == ErrorCode::NoPath || e.code() == ErrorCode::DeadlockDetected ||
         e.code() == ErrorCode::StepCapExceeded;
}

// Simulates `count` normal runs of the configured context on stream
// `stream`. A Pioneer exchange yields two logs (robot A, then robot B).
inline std::vector<GeneratedLog> simulate_runs(const ExperimentConfig& cfg, const GridMap& grid,
                                               std::uint64_t seed, std::uint64_t stream,
                                               std::size_t count) {
  const GridMap inflated = inflate(grid, cfg.sim.safety_margin);
  std::vector<GeneratedLog> logs;
  for (std::size_t run = 0; logs.size() < count; ++run) {
    std::optional<Error> last;
    bool ok = false;
    for (std::size_t attempt = 0; attempt < kScenarioAttempts && !ok; ++attempt) {
      const std::uint64_t s = derive_seed(seed, stream, run * kScenarioAttempts + attempt);
      Rng rng(s);
      SimParams params = cfg.sim;
      params.seed = s;
      try {
        const auto [a, b] = random_endpoints(inflated, cfg.min_travel, rng);
        if (cfg.context == Context::Quadcopter) {
          logs.push_back({simulate_quadcopter(grid, a, b, params), a, b, s, std::nullopt});
        } else {
          auto [ta, tb] = simulate_pioneer_exchange(grid, a, b, params);
          logs.push_back({std::move(ta), a, b, s, std::nullopt});
          if (logs.size() < count) logs.push_back({std::move(tb), b, a, s, std::nullopt});
        }
        ok = true;
      } catch (const Error& e) {
        if (!retryable(e)) throw;
        last = e;
      }
    }
    if (!ok) throw Error(last->code(), "no feasible scenario after retries: " + std::string(last->what()));
  }
  return logs;
}

}  // namespace detail

// Normal and anomalous logs for one seed. Anomalous logs are fresh runs
// with bursts injected using the configured anomaly settings.
inline GeneratedLogs generate_logs(const ExperimentConfig& cfg, std::uint64_t seed,
                                   std::size_t normal_count, std::size_t anomalous_count) {
  const GridMap grid = resolve_grid(cfg.grid);
  GeneratedLogs out;
  out.normals = detail::simulate_runs(cfg, grid, seed, kNormalSimStream, normal_count);
  out.anomalous = detail::simulate_runs(cfg, grid, seed, kAnomalousSimStream, anomalous_count);
  for (std::size_t i = 0; i < out.anomalous.size(); ++i) {
    AnomalyConfig a = cfg.anomaly;
    a.seed = derive_seed(seed, kInjectStream, i);
    out.anomalous[i].traj = inject(out.anomalous[i].traj, a);
    out.anomalous[i].anomaly = a;
  }
  return out;
}

inline constexpr std::array<std::string_view, 8> kMetricNames{
    "roc_auc", "precision", "recall", "accuracy", "f1",
    "binary_precision", "binary_recall", "binary_f1"};

struct DetectorEvaluation {
  Metrics metrics;
  double roc_auc = 0.0;
  std::vector<RocPoint> roc;

  std::array<double, kMetricNames.size()> values() const {
    return {roc_auc,          metrics.precision,     metrics.recall,
            metrics.accuracy, metrics.f1,            metrics.binary_precision,
            metrics.binary_recall, metrics.binary_f1};
  }
};

inline Detector train_detector(ModelKind kind, const LabeledDataset& train,
                               const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainConfig tc = cfg.train_config(kind);
  tc.seed = derive_seed(seed, kTrainStream + static_cast<std::uint64_t>(kind), tc.seed);
  switch (kind) {
    case ModelKind::Logistic: return train_logistic(train, tc);
    case ModelKind::Svm: return train_svm(train, tc);
    case ModelKind::Autoencoder: return train_autoencoder(train.normals(), tc, cfg.ae_dims);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

inline DetectorEvaluation evaluate_detector(const Detector& detector, const LabeledDataset& test) {
  std::vector<double> scores;
  std::vector<int> preds;
  scores.reserve(test.size());
  preds.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Score s = score(detector, test.features.row(i));
    scores.push_back(s.value);
    preds.push_back(s.cls);
  }
  DetectorEvaluation ev;
  ev.metrics = metrics(confusion(test.labels, preds));
  ev.roc = roc_curve(scores, test.labels);
  ev.roc_auc = auc(ev.roc);
  return ev;
}

struct ModelReport {
  ModelKind kind = ModelKind::Logistic;
  // per_iteration[m][i]: metric kMetricNames[m] of iteration i
  std::array<std::vector<double>, kMetricNames.size()> per_iteration;
  std::vector<RocPoint> roc;  // last iteration

  double mean(std::size_t m) const {
    const auto& v = per_iteration[m];
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  }
  // Sample standard deviation; 0 for a single iteration.
  double stddev(std::size_t m) const {
    const auto& v = per_iteration[m];
    if (v.size() < 2) return 0.0;
    const double mu = mean(m);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
};

inline std::size_t metric_index(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i)
    if (kMetricNames[i] == name) return i;
  throw Error(ErrorCode::InvalidArgument, "unknown metric " + std::string(name));
}

struct EvalReport {
  Context context = Context::Quadcopter;
  std::size_t iterations = 0;
  std::vector<ModelReport> models;

  const ModelReport& model(ModelKind k) const {
    for (const auto& m : models)
      if (m.kind == k) return m;
    throw Error(ErrorCode::InvalidArgument, "model " + std::string(to_string(k)) + " not in report");
  }
  double mean(ModelKind k, std::string_view metric) const {
    return model(k).mean(metric_index(metric));
  }
};

inline void record_iteration(EvalReport& report, ModelKind kind, const DetectorEvaluation& ev) {
  ModelReport* slot = nullptr;
  for (auto& m : report.models)
    if (m.kind == kind) slot = &m;
  if (!slot) {
    report.models.push_back({kind, {}, {}});
    slot = &report.models.back();
  }
  const auto v = ev.values();
  for (std::size_t m = 0; m < v.size(); ++m) slot->per_iteration[m].push_back(v[m]);
  slot->roc = ev.roc;
}

struct ExperimentResult {
  EvalReport report;
  GeneratedLogs first_logs;  // iteration 0, for acceleration traces
};

// Iteration i uses seed base_seed + i for data generation, splitting and
// training; metrics are averaged over iterations.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.report.context = cfg.context;
  result.report.iterations = cfg.iterations;
  for (std::size_t i = 0; i < cfg.iterations; ++i) {
    const std::uint64_t seed = cfg.base_seed + i;
    try {
      GeneratedLogs logs = generate_logs(cfg, seed, cfg.normal_logs, cfg.anomalous_logs);
      const auto normals = GeneratedLogs::trajectories(logs.normals);
      const auto anomalous = GeneratedLogs::trajectories(logs.anomalous);
      const DatasetSplit split =
          build_dataset(normals, anomalous, cfg.test_fraction, derive_seed(seed, kSplitStream));
      for (ModelKind kind : cfg.models) {
        const Detector d = train_detector(kind, split.train, cfg, seed);
        record_iteration(result.report, kind, evaluate_detector(d, split.test));
      }
      if (i == 0) result.first_logs = std::move(logs);
    } catch (const Error& e) {
      throw Error(e.code(), "iteration " + std::to_string(i) + ": " + e.detail());
    }
  }
  return result;
}

// --- output files ------------------------------------------------------

inline std::string report_csv(const EvalReport& report) {
  std::string out = "context,model,metric,mean,std\n";
  for (const auto& m : report.models)
    for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
      out += std::string(to_string(report.context)) + "," + std::string(to_string(m.kind)) + "," +
             std::string(kMetricNames[k]) + "," + format_double(m.mean(k)) + "," +
             format_double(m.stddev(k)) + "\n";
    }
  return out;
}

inline std::string roc_csv(ModelKind kind, std::span<const RocPoint> roc) {
  std::string out = "model,fpr,tpr\n";
  for (const auto& p : roc)
    out += std::string(to_string(kind)) + "," + format_double(p.fpr) + "," + format_double(p.tpr) + "\n";
  return out;
}

inline std::string accel_trace_csv(const Trajectory& traj) {
  std::string out = "t,accel_magnitude,label\n";
  for (const auto& r : traj.records)
    out += format_fixed(r.t, 9) + "," + format_double(norm(r.acceleration)) + "," +
           (r.label ? "1" : "0") + "\n";
  return out;
}

// Human-readable summary in the column order of the result tables.
inline std::string report_table(const EvalReport& report) {
  std::ostringstream out;
  out << "context: " << to_string(report.context) << " (mean of " << report.iterations
      << " iterations)\n";
  out << std::left << std::setw(7) << "model";
  for (std::size_t k = 0; k < 5; ++k) out << std::setw(k < 4 ? 11 : 0) << kMetricNames[k];
  out << '\n';
  for (const auto& m : report.models) {
    out << std::setw(7) << to_string(m.kind);
    for (std::size_t k = 0; k < 5; ++k) out << std::setw(k < 4 ? 11 : 0) << format_fixed(m.mean(k), 4);
    out << '\n';
  }
  return out.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace robolog
