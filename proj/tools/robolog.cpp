// robolog: generate telemetry logs, train and evaluate anomaly detectors,
// and plan grid paths from the command line.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "robolog/commands.hpp"

namespace {

template <typename T>
std::optional<T> opt_if(const CLI::Option* o, const T& v) {
  return o->count() ? std::optional<T>(v) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace robolog;
  CLI::App app{"Robot telemetry anomaly-detection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, preset, out, models;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  bool emit_traces = false;
  bool dump = false;
  auto* o_config = app.add_option("--config", config_path, "experiment config file");
  auto* o_preset = app.add_option("--preset", preset, "builtin config: context1 | context2");
  auto* o_seed = app.add_option("--seed", seed, "base seed");
  auto* o_iter = app.add_option("--iterations", iterations, "experiment iterations");
  auto* o_out = app.add_option("--out", out, "output directory (fallback: $ROBOLOG_OUT)");
  auto* o_models = app.add_option("--models", models, "comma-separated subset of lr,svm,ae");
  app.add_flag("--emit-accel-traces", emit_traces, "write accel_trace_<i>.csv files (run)");
  app.add_flag("--dump-config", dump, "print the effective config before running");

  std::size_t n_normal = 2, n_anomalous = 2;
  auto* generate = app.add_subcommand("generate", "simulate and write normal/anomalous logs");
  generate->add_option("--normal", n_normal, "number of normal logs");
  generate->add_option("--anomalous", n_anomalous, "number of anomalous logs");

  std::string logs_dir, model_dir;
  auto* train = app.add_subcommand("train", "train detectors on a generated log directory");
  train->add_option("--logs", logs_dir, "directory written by `generate`")->required();

  auto* eval = app.add_subcommand("eval", "evaluate trained checkpoints on the test split");
  eval->add_option("--logs", logs_dir, "directory written by `generate`")->required();
  eval->add_option("--model-dir", model_dir, "directory with model_<kind>.txt")->required();

  auto* run = app.add_subcommand("run", "generate, train and evaluate over all iterations");

  std::string grid_src = "empty5", start_s, goal_s;
  auto* plan_cmd = app.add_subcommand("plan", "plan a D* path on a grid");
  plan_cmd->add_option("--grid", grid_src, "grid file or builtin (empty5, workspace, floor)");
  plan_cmd->add_option("--start", start_s, "start cell x,y")->required();
  plan_cmd->add_option("--goal", goal_s, "goal cell x,y")->required();

  std::string scores_file, roc_model = "lr";
  auto* roc = app.add_subcommand("roc", "ROC curve and AUC from a score,label CSV");
  roc->add_option("--scores", scores_file, "CSV with header score,label")->required();
  roc->add_option("--model", roc_model, "model name used in the output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan_cmd->parsed()) {
      const GridMap grid = resolve_grid(grid_src);
      return cmd_plan(grid, parse_cell(start_s), parse_cell(goal_s), std::cout, std::cerr);
    }

    CliOverrides o;
    o.config_path = opt_if(o_config, config_path);
    o.preset = opt_if(o_preset, preset);
    o.seed = opt_if(o_seed, seed);
    o.iterations = opt_if(o_iter, iterations);
    o.out = opt_if(o_out, out);
    o.models = opt_if(o_models, models);
    const ExperimentConfig cfg = resolve_config(o);
    if (dump) std::cout << dump_config(cfg) << '\n';

    if (generate->parsed()) {
      for (const auto& f : cmd_generate(cfg, n_normal, n_anomalous)) std::cout << f.string() << '\n';
    } else if (train->parsed()) {
      for (const auto& f : cmd_train(cfg, logs_dir)) std::cout << f.string() << '\n';
    } else if (eval->parsed()) {
      std::cout << report_table(cmd_eval(cfg, logs_dir, model_dir));
    } else if (run->parsed()) {
      std::cout << report_table(cmd_run(cfg, emit_traces));
    } else if (roc->parsed()) {
      const double area = cmd_roc(scores_file, parse_model_kind(roc_model), prepare_out_dir(cfg));
      std::cout << "auc=" << format_double(area) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
