#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "robolog/anomaly.hpp"
#include "robolog/error.hpp"
#include "robolog/format.hpp"
#include "robolog/grid.hpp"
#include "robolog/models/autoencoder.hpp"
#include "robolog/models/detector.hpp"
#include "robolog/models/train_config.hpp"
#include "robolog/simulator.hpp"
#include "robolog/trajectory.hpp"

namespace robolog {

struct ExperimentConfig {
  Context context = Context::Quadcopter;
  std::string grid = "floor";
  std::size_t normal_logs = 4;     // per iteration
  std::size_t anomalous_logs = 4;  // per iteration
  double min_travel = 2.5;         // m between random endpoints
  SimParams sim;
  AnomalyConfig anomaly;
  std::vector<ModelKind> models{ModelKind::Logistic, ModelKind::Svm};
  TrainConfig lr = default_lr_config();
  TrainConfig svm = default_svm_config();
  TrainConfig ae = default_ae_config();
  std::vector<std::size_t> ae_dims = default_autoencoder_dims();
  double test_fraction = 0.3;
  std::size_t iterations = 10;
  std::uint64_t base_seed = 0;
  std::string out_dir;

  bool runs(ModelKind k) const {
    for (ModelKind m : models)
      if (m == k) return true;
    return false;
  }

  const TrainConfig& train_config(ModelKind k) const {
    return k == ModelKind::Logistic ? lr : k == ModelKind::Svm ? svm : ae;
  }

  void validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
      return Error(ErrorCode::ConfigError, field + ": " + why);
    };
    if (iterations < 1) throw bad("experiment.iterations", "must be >= 1");
    if (models.empty()) throw bad("experiment.models", "must name at least one model");
    if (normal_logs < 1) throw bad("experiment.normal_logs", "must be >= 1");
    if (anomalous_logs < 1) throw bad("experiment.anomalous_logs", "must be >= 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
      throw bad("experiment.test_fraction", "must lie in (0, 1)");
    if (!(min_travel >= 0.0)) throw bad("experiment.min_travel", "must be >= 0");
    if (!is_builtin_grid(grid) && !std::filesystem::exists(grid))
      throw bad("experiment.grid", "`" + grid + "` is neither a builtin grid nor a readable file");
    try {
      sim.validate();
      anomaly.validate();
      lr.validate();
      svm.validate();
      ae.validate();
      validate_autoencoder_dims(ae_dims);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.detail());
    }
    if (ae_dims.front() != 15) throw bad("ae.dims", "input width must be 15");
  }
};

namespace detail {

inline std::string join_models(const std::vector<ModelKind>& models) {
  std::string s;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (i) s += ',';
    s += to_string(models[i]);
  }
  return s;
}

inline void dump_train(std::ostringstream& out, const TrainConfig& t, bool with_c, bool ae) {
  out << "learning_rate = " << format_double(t.learning_rate) << '\n'
      << "epochs = " << t.epochs << '\n'
      << "batch_size = " << t.batch_size << '\n'
      << "seed = " << t.seed << '\n';
  if (with_c) out << "c = " << format_double(t.c_param) << '\n';
  if (ae) out << "threshold_quantile = " << format_double(t.threshold_quantile) << '\n';
}

}  // namespace detail

// INI-style dump that parse_config reads back to an equal configuration.
inline std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[experiment]\n"
      << "context = " << to_string(c.context) << '\n'
      << "grid = " << c.grid << '\n'
      << "models = " << detail::join_models(c.models) << '\n'
      << "iterations = " << c.iterations << '\n'
      << "base_seed = " << c.base_seed << '\n'
      << "test_fraction = " << format_double(c.test_fraction) << '\n'
      << "normal_logs = " << c.normal_logs << '\n'
      << "anomalous_logs = " << c.anomalous_logs << '\n'
      << "min_travel = " << format_double(c.min_travel) << '\n';
  if (!c.out_dir.empty()) out << "out = " << c.out_dir << '\n';
  out << "\n[sim]\n"
      << "dt = " << format_double(c.sim.dt) << '\n'
      << "speed = " << format_double(c.sim.speed) << '\n'
      << "gain = " << format_double(c.sim.gain) << '\n'
      << "safety_margin = " << format_double(c.sim.safety_margin) << '\n'
      << "altitude = " << format_double(c.sim.altitude) << '\n'
      << "turn_rate = " << format_double(c.sim.turn_rate) << '\n'
      << "max_accel = " << format_double(c.sim.max_accel) << '\n'
      << "\n[anomaly]\n"
      << "kind = " << to_string(c.anomaly.kind) << '\n'
      << "rate = " << format_double(c.anomaly.rate) << '\n'
      << "burst_len = " << c.anomaly.burst_len << '\n'
      << "magnitude = " << format_double(c.anomaly.magnitude) << '\n'
      << "\n[lr]\n";
  detail::dump_train(out, c.lr, false, false);
  out << "\n[svm]\n";
  detail::dump_train(out, c.svm, true, false);
  out << "\n[ae]\n";
  detail::dump_train(out, c.ae, false, true);
  out << "dims = ";
  for (std::size_t i = 0; i < c.ae_dims.size(); ++i) out << (i ? "," : "") << c.ae_dims[i];
  out << '\n';
  return out.str();
}

// Applies `[section]` / `key = value` text on top of `base`. `#` and `;`
// start comments. Unknown sections or keys are errors.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}) {
  ExperimentConfig c = std::move(base);
  std::string section;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ConfigError, where + "unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "experiment" && section != "sim" && section != "anomaly" && section != "lr" &&
          section != "svm" && section != "ae")
        throw Error(ErrorCode::ConfigError, where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ConfigError, where + "expected `key = value`");
    if (section.empty()) throw Error(ErrorCode::ConfigError, where + "key outside a section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const std::string field = section + "." + key;

    auto num = [&]() {
      double d;
      if (!parse_double(value, d) || !std::isfinite(d))
        throw Error(ErrorCode::ConfigError, where + field + ": expected a number, got `" + value + "`");
      return d;
    };
    auto count = [&]() {
      long long n;
      if (!parse_int(value, n) || n < 0)
        throw Error(ErrorCode::ConfigError,
                    where + field + ": expected a non-negative integer, got `" + value + "`");
      return static_cast<std::size_t>(n);
    };
    auto u64 = [&]() {
      std::uint64_t n = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc{} || p != value.data() + value.size())
        throw Error(ErrorCode::ConfigError, where + field + ": expected an unsigned integer");
      return n;
    };
    auto wrap = [&](auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        if (e.detail().rfind(where, 0) == 0) throw;
        throw Error(ErrorCode::ConfigError, where + field + ": " + e.detail());
      }
    };
    auto train_key = [&](TrainConfig& t) {
      if (key == "learning_rate") t.learning_rate = num();
      else if (key == "epochs") t.epochs = count();
      else if (key == "batch_size") t.batch_size = count();
      else if (key == "seed") t.seed = u64();
      else if (key == "c" && section == "svm") t.c_param = num();
      else if (key == "threshold_quantile" && section == "ae") t.threshold_quantile = num();
      else if (key == "dims" && section == "ae") {
        c.ae_dims.clear();
        for (auto tok : split(value, ',')) {
          long long d;
          if (!parse_int(trim(tok), d) || d < 1)
            throw Error(ErrorCode::ConfigError, where + field + ": bad layer width");
          c.ae_dims.push_back(static_cast<std::size_t>(d));
        }
      } else
        throw Error(ErrorCode::ConfigError, where + "unknown key `" + field + "`");
    };

    wrap([&] {
      if (section == "experiment") {
        if (key == "context") c.context = parse_context(value);
        else if (key == "grid") c.grid = value;
        else if (key == "models") {
          c.models.clear();
          for (auto tok : split(value, ',')) {
            const ModelKind k = parse_model_kind(trim(tok));
            if (!c.runs(k)) c.models.push_back(k);
          }
        } else if (key == "iterations") c.iterations = count();
        else if (key == "base_seed") c.base_seed = u64();
        else if (key == "test_fraction") c.test_fraction = num();
        else if (key == "normal_logs") c.normal_logs = count();
        else if (key == "anomalous_logs") c.anomalous_logs = count();
        else if (key == "min_travel") c.min_travel = num();
        else if (key == "out") c.out_dir = value;
        else throw Error(ErrorCode::ConfigError, where + "unknown key `" + field + "`");
      } else if (section == "sim") {
        if (key == "dt") c.sim.dt = num();
        else if (key == "speed") c.sim.speed = num();
        else if (key == "gain") c.sim.gain = num();
        else if (key == "safety_margin") c.sim.safety_margin = num();
        else if (key == "altitude") c.sim.altitude = num();
        else if (key == "turn_rate") c.sim.turn_rate = num();
        else if (key == "max_accel") c.sim.max_accel = num();
        else throw Error(ErrorCode::ConfigError, where + "unknown key `" + field + "`");
      } else if (section == "anomaly") {
        if (key == "kind") c.anomaly.kind = parse_anomaly_kind(value);
        else if (key == "rate") c.anomaly.rate = num();
        else if (key == "burst_len") c.anomaly.burst_len = count();
        else if (key == "magnitude") c.anomaly.magnitude = num();
        else throw Error(ErrorCode::ConfigError, where + "unknown key `" + field + "`");
      } else if (section == "lr") {
        train_key(c.lr);
      } else if (section == "svm") {
        train_key(c.svm);
      } else {
        train_key(c.ae);
      }
    });
  }
  return c;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

// Quadcopter navigation with position-offset bursts; LR and SVM.
inline constexpr std::string_view kPresetContext1 = R"([experiment]
context = quadcopter
grid = floor
models = lr,svm
iterations = 10
base_seed = 1
test_fraction = 0.3
normal_logs = 4
anomalous_logs = 4
min_travel = 2.5

[sim]
dt = 0.05
speed = 1
gain = 2
safety_margin = 0.15
altitude = 1
turn_rate = 2
max_accel = 2

[anomaly]
kind = position_offset
rate = 0.3
burst_len = 10
magnitude = 0.5

[lr]
learning_rate = 0.1
epochs = 300

[svm]
learning_rate = 0.1
epochs = 100
c = 1

[ae]
learning_rate = 0.01
epochs = 200
batch_size = 32
threshold_quantile = 0.95
dims = 15,8,4,8,15
)";

// Pioneer position exchange with mean-preserving velocity fluctuations;
// LR, SVM and the autoencoder.
inline constexpr std::string_view kPresetContext2 = R"([experiment]
context = pioneer
grid = floor
models = lr,svm,ae
iterations = 10
base_seed = 2
test_fraction = 0.3
normal_logs = 8
anomalous_logs = 8
min_travel = 2.5

[sim]
dt = 0.05
speed = 1
gain = 2
safety_margin = 0.15
altitude = 1
turn_rate = 2
max_accel = 2

[anomaly]
kind = velocity_fluctuation
rate = 0.3
burst_len = 10
magnitude = 0.3

[lr]
learning_rate = 0.1
epochs = 300

[svm]
learning_rate = 0.1
epochs = 100
c = 1

[ae]
learning_rate = 0.01
epochs = 200
batch_size = 32
threshold_quantile = 0.95
dims = 15,8,4,8,15
)";

inline ExperimentConfig preset_config(std::string_view name) {
  if (name == "context1") return parse_config(kPresetContext1);
  if (name == "context2") return parse_config(kPresetContext2);
  throw Error(ErrorCode::ConfigError,
              "preset: expected `context1` or `context2`, got `" + std::string(name) + "`");
}

}  // namespace robolog
