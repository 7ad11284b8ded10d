#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "robolog/anomaly.hpp"
#include "robolog/config.hpp"
#include "robolog/experiment.hpp"
#include "robolog/log_io.hpp"
#include "robolog/simulator.hpp"

using namespace robolog;

namespace {

Trajectory straight_line(std::size_t n, double dt = 0.05) {
  std::vector<Pose> poses;
  for (std::size_t i = 0; i < n; ++i)
    poses.push_back({{0.5 * static_cast<double>(i) * dt, 0.0, 1.0}, {0, 0, 0}});
  return make_trajectory(poses, dt, Context::Quadcopter);
}

}  // namespace

TEST(Kinematics, ConstantPositionIsAtRest) {
  std::vector<Pose> poses(6, Pose{{1, 2, 3}, {0.1, 0.2, 0.3}});
  auto k = derive_kinematics(poses, 0.05);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    EXPECT_EQ(norm(k.velocity[i]), 0.0);
    EXPECT_EQ(norm(k.acceleration[i]), 0.0);
    EXPECT_EQ(norm(k.angular_velocity[i]), 0.0);
  }
}

TEST(Kinematics, LinearMotion) {
  std::vector<Pose> poses;
  for (int i = 0; i < 10; ++i) poses.push_back({{1.5 * i * 0.05, 0, 0}, {}});
  auto k = derive_kinematics(poses, 0.05);
  for (int i = 1; i < 10; ++i) EXPECT_NEAR(k.velocity[i].x, 1.5, 1e-12);
  for (int i = 2; i < 10; ++i) EXPECT_NEAR(k.acceleration[i].x, 0.0, 1e-9);
}

TEST(Kinematics, YawSeamIsUnwrapped) {
  std::vector<Pose> poses{{{}, {0, 0, 3.1}}, {{}, {0, 0, -3.1}}};
  auto k = derive_kinematics(poses, 0.1);
  EXPECT_NEAR(k.angular_velocity[1].z, (2 * std::numbers::pi - 6.2) / 0.1, 1e-9);
}

TEST(Kinematics, Errors) {
  std::vector<Pose> poses{{{}, {}}, {{std::nan(""), 0, 0}, {}}};
  EXPECT_THROW(derive_kinematics(poses, 0.1), Error);
  EXPECT_THROW(derive_kinematics(std::span<const Pose>{}, 0.1), Error);
  EXPECT_THROW(derive_kinematics(std::span(poses).first(1), 0.0), Error);
}

TEST(Quadcopter, StartEqualsGoal) {
  SimParams p;
  p.seed = 3;
  auto t = simulate_quadcopter(builtin_grid("workspace"), {25, 25}, {25, 25}, p);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(norm(t.records[0].velocity), 0.0);
  EXPECT_NEAR(t.records[0].position.x, 0.05, 1e-12);
}

TEST(Quadcopter, ReachesGoalAndIsDeterministic) {
  SimParams p;
  p.seed = 9;
  const GridMap g = builtin_grid("workspace");
  auto t = simulate_quadcopter(g, {5, 5}, {40, 5}, p);
  const Point2 goal = g.world_of({40, 5});
  const auto& last = t.records.back().position;
  EXPECT_LE(std::hypot(last.x - goal.x, last.y - goal.y), 0.5 * g.cell_size());
  for (const auto& r : t.records) {
    EXPECT_EQ(r.position.z, p.altitude);
    EXPECT_EQ(r.label, 0);
    EXPECT_LE(std::hypot(r.velocity.x, r.velocity.y), p.speed + 1e-9);
  }
  EXPECT_EQ(t, simulate_quadcopter(g, {5, 5}, {40, 5}, p));
}

TEST(Quadcopter, BlockedGoalIsNoPath) {
  GridMap g = builtin_grid("floor");
  try {
    simulate_quadcopter(g, {5, 5}, {0, 0}, SimParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoPath);
  }
}

TEST(Pioneer, CoincidentEndpointsRejected) {
  EXPECT_THROW(simulate_pioneer_exchange(builtin_grid("workspace"), {10, 10}, {10, 10}, {}), Error);
}

TEST(Pioneer, OpenGridSwap) {
  const GridMap g = builtin_grid("workspace");
  SimParams p;
  p.seed = 4;
  auto [a, b] = simulate_pioneer_exchange(g, {10, 25}, {40, 25}, p);
  const Point2 sa = g.world_of({10, 25}), sb = g.world_of({40, 25});
  const auto& ea = a.records.back().position;
  const auto& eb = b.records.back().position;
  EXPECT_LE(std::hypot(ea.x - sb.x, ea.y - sb.y), 0.5 * g.cell_size());
  EXPECT_LE(std::hypot(eb.x - sa.x, eb.y - sa.y), 0.5 * g.cell_size());
  for (const auto* t : {&a, &b})
    for (const auto& r : t->records) {
      EXPECT_EQ(r.position.z, 0.0);
      EXPECT_EQ(r.orientation.x, 0.0);
      EXPECT_EQ(r.orientation.y, 0.0);
    }
  // A keeps clear of B while both are moving
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = a.records[i].position - b.records[i].position;
    EXPECT_GE(std::hypot(d.x, d.y), 2 * p.safety_margin - 1e-9) << i;
  }
  auto again = simulate_pioneer_exchange(g, {10, 25}, {40, 25}, p);
  EXPECT_EQ(again.first, a);
  EXPECT_EQ(again.second, b);
}

TEST(Anomaly, ZeroRateIsIdentity) {
  auto t = straight_line(50);
  AnomalyConfig c;
  c.rate = 0;
  EXPECT_EQ(inject(t, c), t);
}

TEST(Anomaly, FullCoverageOffset) {
  auto t = straight_line(40);
  AnomalyConfig c;
  c.rate = 1;
  c.burst_len = 40;
  c.magnitude = 0.7;
  c.seed = 5;
  auto out = inject(t, c);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(out.records[i].label, 1);
    EXPECT_NEAR(norm(out.records[i].position - t.records[i].position), 0.7, 1e-12);
  }
}

TEST(Anomaly, LayoutRespectsRateAndSeparation) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    AnomalyConfig c;
    c.rate = 0.3;
    c.burst_len = 7;
    Rng rng(s);
    const std::size_t n = 60 + s % 40;
    auto bursts = layout_bursts(n, c, rng);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < bursts.size(); ++i) {
      covered += bursts[i].length;
      EXPECT_LE(bursts[i].begin + bursts[i].length, n);
      if (i) {
        EXPECT_GT(bursts[i].begin, bursts[i - 1].begin + bursts[i - 1].length);
      }
    }
    EXPECT_EQ(covered, static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(n))));
  }
}

TEST(Anomaly, InfeasibleRate) {
  AnomalyConfig c;
  c.rate = 0.95;
  c.burst_len = 2;
  try {
    inject(straight_line(20), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RateInfeasible);
  }
  EXPECT_THROW(inject(Trajectory{}, AnomalyConfig{}), Error);
}

TEST(Anomaly, LabelsMatchDisturbedRecords) {
  auto t = straight_line(200);
  for (auto kind : {AnomalyKind::PositionOffset, AnomalyKind::VelocityFluctuation}) {
    AnomalyConfig c;
    c.kind = kind;
    c.seed = 11;
    auto out = inject(t, c);
    std::size_t labelled = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const bool moved = norm(out.records[i].position - t.records[i].position) > 0;
      labelled += out.records[i].label;
      if (!out.records[i].label) {
        EXPECT_FALSE(moved) << i;
      }
    }
    EXPECT_EQ(labelled, 60u);
    auto again = inject(t, c);
    EXPECT_EQ(again, out);
  }
}

// Injected per-step position increments, divided by dt, should have the
// configured standard deviation and zero mean.
TEST(Anomaly, VelocityFluctuationStatistics) {
  auto t = straight_line(300);
  double sum = 0, sum2 = 0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    AnomalyConfig c;
    c.kind = AnomalyKind::VelocityFluctuation;
    c.magnitude = 0.3;
    c.seed = seed;
    auto out = inject(t, c);
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!out.records[i].label) continue;
      const Vec3 before = out.records[i - 1].position - t.records[i - 1].position;
      const Vec3 now = out.records[i].position - t.records[i].position;
      for (double d : {(now.x - before.x) / t.dt, (now.y - before.y) / t.dt}) {
        sum += d;
        sum2 += d * d;
        ++n;
      }
    }
    if (seed == 49) {
      const double mean = sum / n;
      const double sd = std::sqrt((sum2 - n * mean * mean) / (n - 1));
      EXPECT_NEAR(sd, 0.3, 0.03);
    }
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 5 * 0.3 / std::sqrt(static_cast<double>(n)));
}

TEST(Anomaly, FluctuationPreservesMeanVelocity) {
  auto t = straight_line(300);
  AnomalyConfig c;
  c.kind = AnomalyKind::VelocityFluctuation;
  Trajectory out;
  // pick a layout whose first and last records stay normal
  for (c.seed = 0; c.seed < 100; ++c.seed) {
    out = inject(t, c);
    if (!out.records.front().label && !out.records.back().label) break;
  }
  ASSERT_LT(c.seed, 100u);
  Vec3 a{}, b{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    a = a + t.records[i].velocity;
    b = b + out.records[i].velocity;
  }
  EXPECT_NEAR(a.x, b.x, 1e-9);
  EXPECT_NEAR(a.y, b.y, 1e-9);
}

TEST(LogIo, ZeroRecordLine) {
  Trajectory t;
  t.dt = 0.05;
  t.records.resize(1);
  std::ostringstream os;
  write_log(t, os);
  EXPECT_EQ(os.str(), std::string(kLogHeader) + "\n0.000000000,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
}

TEST(LogIo, LineCount) {
  auto t = straight_line(10000);
  std::ostringstream os;
  write_log(t, os);
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 10001);
}

TEST(LogIo, HeaderOnly) {
  std::istringstream in(std::string(kLogHeader) + "\n");
  auto t = read_log(in);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.dt, 0.0);
}

TEST(LogIo, WrongArity) {
  std::istringstream in(std::string(kLogHeader) + "\n0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n" +
                        "0.05,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  try {
    read_log(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedLine);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LogIo, NonUniformTimestamps) {
  std::string body = std::string(kLogHeader) + "\n";
  for (const char* t : {"0.0", "0.05", "0.11"}) body += std::string(t) + ",0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n";
  std::istringstream in(body);
  try {
    read_log(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonUniformTimestamps);
  }
}

TEST(LogIo, RoundTripSimulated) {
  ExperimentConfig cfg = preset_config("context1");
  auto logs = generate_logs(cfg, 123, 3, 3);
  auto all = GeneratedLogs::trajectories(logs.normals);
  for (auto& t : GeneratedLogs::trajectories(logs.anomalous)) all.push_back(t);
  for (const auto& t : all) {
    std::stringstream ss;
    write_log(t, ss);
    auto back = read_log(ss, t.context);
    ASSERT_EQ(back.size(), t.size());
    EXPECT_EQ(back.dt, t.dt);
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_EQ(back.records[i].label, t.records[i].label);
      EXPECT_NEAR(back.records[i].t, t.records[i].t, 1e-9);
      EXPECT_NEAR(norm(back.records[i].velocity - t.records[i].velocity), 0, 1e-9);
      EXPECT_NEAR(norm(back.records[i].angular_velocity - t.records[i].angular_velocity), 0, 1e-9);
    }
  }
}
