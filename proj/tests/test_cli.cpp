#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "robolog/commands.hpp"

using namespace robolog;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("robolog_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small(const std::string& preset, const fs::path& out) {
  ExperimentConfig c = preset_config(preset);
  c.iterations = 1;
  c.out_dir = out.string();
  return c;
}

std::vector<std::string> report_models(const std::string& csv) {
  std::vector<std::string> models;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const std::string m = line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1);
    if (models.empty() || models.back() != m) models.push_back(m);
  }
  return models;
}

}  // namespace

TEST(Config, DumpParseRoundTrip) {
  for (const char* name : {"context1", "context2"}) {
    ExperimentConfig c = preset_config(name);
    EXPECT_EQ(dump_config(parse_config(dump_config(c))), dump_config(c));
  }
}

TEST(Config, Presets) {
  auto c1 = preset_config("context1");
  EXPECT_EQ(c1.context, Context::Quadcopter);
  EXPECT_EQ(c1.anomaly.kind, AnomalyKind::PositionOffset);
  EXPECT_EQ(c1.models, (std::vector<ModelKind>{ModelKind::Logistic, ModelKind::Svm}));
  auto c2 = preset_config("context2");
  EXPECT_EQ(c2.context, Context::Pioneer);
  EXPECT_EQ(c2.anomaly.kind, AnomalyKind::VelocityFluctuation);
  EXPECT_TRUE(c2.runs(ModelKind::Autoencoder));
}

TEST(Config, InvalidContextNamesField) {
  try {
    parse_config("[experiment]\ncontext = submarine\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("experiment.context"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("[experiment]\ncolour = red\n"), Error);
  EXPECT_THROW(parse_config("[bogus]\n"), Error);
}

TEST(Config, OverridesAndOutFallback) {
  CliOverrides o;
  o.preset = "context2";
  o.seed = 99;
  o.iterations = 3;
  o.models = "ae";
  o.out = "x";
  auto c = resolve_config(o);
  EXPECT_EQ(c.base_seed, 99u);
  EXPECT_EQ(c.iterations, 3u);
  EXPECT_EQ(c.models, std::vector<ModelKind>{ModelKind::Autoencoder});
  EXPECT_EQ(c.out_dir, "x");
  o.config_path = "whatever.ini";
  EXPECT_THROW(resolve_config(o), Error);

  CliOverrides env;
  ::setenv(kOutEnvVar, "from_env", 1);
  EXPECT_EQ(resolve_config(env).out_dir, "from_env");
  ::unsetenv(kOutEnvVar);
  EXPECT_THROW(prepare_out_dir(resolve_config(env)), Error);
}

TEST(Generate, FileCountAndDeterminism) {
  const auto a = scratch("gen_a"), b = scratch("gen_b");
  auto files = cmd_generate(small("context1", a), 2, 2);
  cmd_generate(small("context1", b), 2, 2);
  EXPECT_EQ(files.size(), 5u);
  std::size_t on_disk = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++on_disk;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_EQ(on_disk, 5u);
  auto logs = read_log_dir(a);
  EXPECT_EQ(logs.normals.size(), 2u);
  EXPECT_EQ(logs.anomalous.size(), 2u);
}

TEST(TrainEval, CheckpointsThenReport) {
  const auto logs = scratch("te_logs"), models = scratch("te_models"), rep = scratch("te_report");
  cmd_generate(small("context1", logs), 2, 2);
  auto ckpts = cmd_train(small("context1", models), logs);
  ASSERT_EQ(ckpts.size(), 2u);
  auto report = cmd_eval(small("context1", rep), logs, models);
  EXPECT_EQ(report.models.size(), 2u);
  EXPECT_TRUE(fs::exists(rep / "report.csv"));
  EXPECT_TRUE(fs::exists(rep / "roc_lr.csv"));
}

TEST(Run, Context1RowsAndSingleIterationStd) {
  const auto out = scratch("run1");
  auto report = cmd_run(small("context1", out), false);
  const std::string csv = slurp(out / "report.csv");
  EXPECT_EQ(report_models(csv), (std::vector<std::string>{"lr", "svm"}));
  for (const auto& m : report.models)
    for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
      EXPECT_EQ(m.stddev(k), 0.0);
      EXPECT_EQ(m.mean(k), m.per_iteration[k][0]);
    }
  EXPECT_FALSE(fs::exists(out / "roc_ae.csv"));
}

TEST(Run, Context2HasAutoencoder) {
  const auto out = scratch("run2");
  ExperimentConfig c = small("context2", out);
  c.normal_logs = 2;
  c.anomalous_logs = 2;
  cmd_run(c, true);
  EXPECT_EQ(report_models(slurp(out / "report.csv")), (std::vector<std::string>{"lr", "svm", "ae"}));
  EXPECT_TRUE(fs::exists(out / "accel_trace_0.csv"));
  EXPECT_EQ(slurp(out / "accel_trace_0.csv").rfind("t,accel_magnitude,label\n", 0), 0u);
}

TEST(Run, SeedSevenTwiceIdentical) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  ExperimentConfig ca = small("context1", a), cb = small("context1", b);
  ca.base_seed = cb.base_seed = 7;
  cmd_run(ca, false);
  cmd_run(cb, false);
  for (const char* f : {"report.csv", "roc_lr.csv", "roc_svm.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Plan, DiagonalCostLine) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_plan(builtin_grid("empty5"), {0, 0}, {4, 4}, out, err), kExitOk);
  EXPECT_EQ(out.str().rfind("cost=5.656854\n", 0), 0u);
}

TEST(Plan, EnclosedGoalExitCode) {
  GridMap g = parse_grid("5 5 1 0 0\n.....\n.###.\n.#.#.\n.###.\n.....\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_plan(g, {0, 0}, {2, 2}, out, err), kExitNoPath);
  EXPECT_NE(err.str().find("NoPath"), std::string::npos);
}

TEST(Plan, MalformedGridFileHasLineNumber) {
  const auto dir = scratch("grid");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.grid") << "3 3 1 0 0\n...\n..\n...\n";
  try {
    resolve_grid((dir / "bad.grid").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_cell("3;4"), Error);
  EXPECT_EQ(parse_cell("3,4"), (Cell{3, 4}));
}

TEST(Roc, ScoresFile) {
  const auto dir = scratch("roc");
  fs::create_directories(dir);
  std::ofstream(dir / "s.csv") << "score,label\n0.9,1\n0.4,1\n0.6,0\n0.1,0\n";
  EXPECT_DOUBLE_EQ(cmd_roc(dir / "s.csv", ModelKind::Svm, dir), 0.75);
  EXPECT_EQ(slurp(dir / "roc_svm.csv").rfind("model,fpr,tpr\nsvm,0,0\n", 0), 0u);
}
