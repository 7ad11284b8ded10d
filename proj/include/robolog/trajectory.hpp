#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robolog/error.hpp"

namespace robolog {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline double norm(Vec3 a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }
inline bool is_finite(Vec3 a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Maps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::remainder(a, 2.0 * pi);  // [-pi, pi]
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

// One telemetry sample. Orientation is (roll, pitch, yaw), ZYX Euler.
struct LogRecord {
  double t = 0.0;
  Vec3 position;
  Vec3 orientation;
  Vec3 velocity;
  Vec3 acceleration;
  Vec3 angular_velocity;
  int label = 0;
  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

enum class Context { Quadcopter, Pioneer };

inline std::string_view to_string(Context c) {
  return c == Context::Quadcopter ? "quadcopter" : "pioneer";
}

inline Context parse_context(std::string_view s) {
  if (s == "quadcopter") return Context::Quadcopter;
  if (s == "pioneer") return Context::Pioneer;
  throw Error(ErrorCode::ConfigError,
              "expected `quadcopter` or `pioneer`, got `" + std::string(s) + "`");
}

struct Trajectory {
  std::vector<LogRecord> records;
  double dt = 0.0;
  Context context = Context::Quadcopter;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct Pose {
  Vec3 position;
  Vec3 orientation;
};

struct KinematicFields {
  std::vector<Vec3> velocity;
  std::vector<Vec3> acceleration;
  std::vector<Vec3> angular_velocity;
};

// Backward differences: v[i] = (p[i] - p[i-1]) / dt, a likewise from v, and
// angular velocity from wrapped orientation differences. Index 0 is zero.
inline KinematicFields derive_kinematics(std::span<const Pose> poses, double dt) {
  if (poses.empty()) throw Error(ErrorCode::InvalidArgument, "derive_kinematics: no samples");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorCode::InvalidArgument, "derive_kinematics: dt must be positive");
  const std::size_t n = poses.size();
  KinematicFields k;
  k.velocity.assign(n, Vec3{});
  k.acceleration.assign(n, Vec3{});
  k.angular_velocity.assign(n, Vec3{});
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(poses[i].position) || !is_finite(poses[i].orientation))
      throw Error(ErrorCode::NonFinite, "derive_kinematics: sample " + std::to_string(i));
  }
  for (std::size_t i = 1; i < n; ++i) {
    k.velocity[i] = (poses[i].position - poses[i - 1].position) / dt;
    k.acceleration[i] = (k.velocity[i] - k.velocity[i - 1]) / dt;
    const Vec3 d = poses[i].orientation - poses[i - 1].orientation;
    k.angular_velocity[i] = Vec3{wrap_angle(d.x), wrap_angle(d.y), wrap_angle(d.z)} / dt;
  }
  return k;
}

inline std::vector<Pose> poses_of(const Trajectory& traj) {
  std::vector<Pose> poses;
  poses.reserve(traj.size());
  for (const auto& r : traj.records) poses.push_back({r.position, r.orientation});
  return poses;
}

// Recomputes velocity/acceleration/angular velocity from the stored poses.
inline void refresh_kinematics(Trajectory& traj) {
  if (traj.empty()) return;
  const auto k = derive_kinematics(poses_of(traj), traj.dt);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    traj.records[i].velocity = k.velocity[i];
    traj.records[i].acceleration = k.acceleration[i];
    traj.records[i].angular_velocity = k.angular_velocity[i];
  }
}

// Builds a trajectory on the uniform time grid from a pose sequence.
inline Trajectory make_trajectory(std::span<const Pose> poses, double dt, Context context) {
  Trajectory traj;
  traj.dt = dt;
  traj.context = context;
  traj.records.resize(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    traj.records[i].t = static_cast<double>(i) * dt;
    traj.records[i].position = poses[i].position;
    traj.records[i].orientation = poses[i].orientation;
  }
  refresh_kinematics(traj);
  return traj;
}

}  // namespace robolog
