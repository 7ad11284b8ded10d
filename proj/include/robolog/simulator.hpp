#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/grid.hpp"
#include "robolog/planner.hpp"
#include "robolog/random.hpp"
#include "robolog/trajectory.hpp"

namespace robolog {

struct SimParams {
  double dt = 0.05;            // s
  double speed = 1.0;          // m/s cruise speed
  double gain = 2.0;           // 1/s waypoint-tracking gain
  double safety_margin = 0.15; // m
  double altitude = 1.0;       // m, quadcopter only
  double turn_rate = 2.0;      // rad/s, Pioneer angular-rate bound
  double max_accel = 2.0;      // m/s^2, Pioneer linear-acceleration bound
  std::uint64_t seed = 0;

  void validate() const {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "sim.dt must be > 0");
    if (!(speed > 0.0)) throw Error(ErrorCode::InvalidArgument, "sim.speed must be > 0");
    if (!(gain > 0.0)) throw Error(ErrorCode::InvalidArgument, "sim.gain must be > 0");
    if (!(safety_margin >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "sim.safety_margin must be >= 0");
    if (!(turn_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "sim.turn_rate must be > 0");
    if (!(max_accel > 0.0)) throw Error(ErrorCode::InvalidArgument, "sim.max_accel must be > 0");
    if (!std::isfinite(altitude))
      throw Error(ErrorCode::InvalidArgument, "sim.altitude must be finite");
  }
};

inline constexpr std::size_t kSimStepCap = 10000;
inline constexpr std::size_t kDeadlockSteps = 200;
inline constexpr double kDriveHeadingTolerance = 0.3;  // rad

namespace detail {

inline double random_heading(Rng& rng) {
  return wrap_angle((2.0 * uniform01(rng) - 1.0) * std::numbers::pi);
}

inline Path plan_on_inflated(const GridMap& inflated, Cell start, Cell goal) {
  inflated.require_in_bounds(start);
  inflated.require_in_bounds(goal);
  if (inflated.occupied(start) || inflated.occupied(goal))
    throw Error(ErrorCode::NoPath, "endpoint " + to_string(inflated.occupied(start) ? start : goal) +
                                       " lies inside the safety margin");
  auto path = plan(inflated, start, goal);
  if (!path)
    throw Error(ErrorCode::NoPath, "no path from " + to_string(start) + " to " + to_string(goal));
  return *std::move(path);
}

inline double dist2d(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Differential-drive robot following a waypoint list with unicycle kinematics.
struct UnicycleFollower {
  std::vector<Point2> waypoints;
  std::size_t target = 0;
  Point2 pos;
  double heading = 0.0;
  double speed = 0.0;
  bool done = false;

  struct Command {
    double v = 0.0;
    double omega = 0.0;
  };

  void advance_target(double reach) {
    while (target + 1 < waypoints.size() && dist2d(pos, waypoints[target]) <= reach) ++target;
    if (target + 1 == waypoints.size() && dist2d(pos, waypoints[target]) <= reach) done = true;
  }

  // Drives at cruise speed while roughly facing the target, otherwise turns
  // on the spot; speed changes are rate-limited and the robot brakes ahead
  // of the final waypoint.
  Command command(const SimParams& p) const {
    if (done) return {};
    const Point2 goal = waypoints[target];
    const double error = wrap_angle(std::atan2(goal.y - pos.y, goal.x - pos.x) - heading);
    Command c;
    c.omega = std::clamp(p.gain * error, -p.turn_rate, p.turn_rate);
    double wanted = 0.0;
    if (std::abs(error) < kDriveHeadingTolerance) {
      const double to_end = dist2d(pos, waypoints.back());
      wanted = std::min({p.speed, std::sqrt(2.0 * p.max_accel * to_end), dist2d(pos, goal) / p.dt});
    }
    const double dv = p.max_accel * p.dt;
    c.v = std::clamp(wanted, speed - dv, speed + dv);
    return c;
  }

  std::pair<Point2, double> propose(Command c, double dt) const {
    return {{pos.x + c.v * std::cos(heading) * dt, pos.y + c.v * std::sin(heading) * dt},
            wrap_angle(heading + c.omega * dt)};
  }
};

}  // namespace detail

// Point-mass quadcopter at fixed altitude tracking the D* waypoints with a
// saturated proportional controller. Obstacles and the workspace border are
// inflated by the safety margin before planning.
inline Trajectory simulate_quadcopter(const GridMap& grid, Cell start, Cell goal,
                                      const SimParams& params) {
  params.validate();
  const GridMap inflated = inflate(grid, params.safety_margin);
  const Path path = detail::plan_on_inflated(inflated, start, goal);
  const double reach = 0.5 * grid.cell_size();

  Rng rng(params.seed);
  double yaw = detail::random_heading(rng);
  Point2 pos = path.world_points.front();
  std::vector<Pose> poses{{{pos.x, pos.y, params.altitude}, {0.0, 0.0, yaw}}};

  std::size_t target = std::min<std::size_t>(1, path.world_points.size() - 1);
  while (true) {
    while (target + 1 < path.world_points.size() &&
           detail::dist2d(pos, path.world_points[target]) <= reach)
      ++target;
    const Point2 wp = path.world_points[target];
    if (target + 1 == path.world_points.size() && detail::dist2d(pos, wp) <= reach) break;
    if (poses.size() > kSimStepCap)
      throw Error(ErrorCode::StepCapExceeded,
                  "quadcopter did not reach the goal within " + std::to_string(kSimStepCap) +
                      " steps");
    double vx = params.gain * (wp.x - pos.x);
    double vy = params.gain * (wp.y - pos.y);
    const double v = std::hypot(vx, vy);
    if (v > params.speed) {
      vx *= params.speed / v;
      vy *= params.speed / v;
    }
    pos = {pos.x + vx * params.dt, pos.y + vy * params.dt};
    if (vx != 0.0 || vy != 0.0) yaw = wrap_angle(std::atan2(vy, vx));
    poses.push_back({{pos.x, pos.y, params.altitude}, {0.0, 0.0, yaw}});
  }
  return make_trajectory(poses, params.dt, Context::Quadcopter);
}

// Two Pioneers swap places. Robot A has priority and follows its D* path;
// robot B plans around a corridor of width 2*safety_margin + cell_size
// about A's path (left open near both endpoints) and halts whenever its next
// step would bring it within 2*safety_margin of A.
inline std::pair<Trajectory, Trajectory> simulate_pioneer_exchange(const GridMap& grid,
                                                                   Cell start_a, Cell start_b,
                                                                   const SimParams& params) {
  params.validate();
  if (start_a == start_b)
    throw Error(ErrorCode::InvalidArgument,
                "pioneer exchange endpoints coincide at " + to_string(start_a));
  const GridMap inflated = inflate(grid, params.safety_margin);
  const Path path_a = detail::plan_on_inflated(inflated, start_a, start_b);
  // Also validates the reverse direction on the plain inflated map.
  Path path_b = detail::plan_on_inflated(inflated, start_b, start_a);

  const double clearance = 2.0 * params.safety_margin;
  const double corridor = clearance + grid.cell_size();
  {
    GridMap avoid = inflated;
    const Point2 pa = grid.world_of(start_a);
    const Point2 pb = grid.world_of(start_b);
    for (int y = 0; y < grid.height(); ++y)
      for (int x = 0; x < grid.width(); ++x) {
        const Point2 c = grid.world_of({x, y});
        if (detail::dist2d(c, pa) <= corridor || detail::dist2d(c, pb) <= corridor) continue;
        for (const Point2& w : path_a.world_points)
          if (detail::dist2d(c, w) <= corridor) {
            avoid.set_occupied({x, y}, true);
            break;
          }
      }
    if (auto detour = plan(avoid, start_b, start_a)) path_b = *std::move(detour);
  }

  Rng rng(params.seed);
  detail::UnicycleFollower a{path_a.world_points, 0, path_a.world_points.front(),
                             detail::random_heading(rng)};
  detail::UnicycleFollower b{path_b.world_points, 0, path_b.world_points.front(),
                             detail::random_heading(rng)};
  const double reach = 0.5 * grid.cell_size();
  a.advance_target(reach);
  b.advance_target(reach);

  auto pose_of = [](const detail::UnicycleFollower& r) {
    return Pose{{r.pos.x, r.pos.y, 0.0}, {0.0, 0.0, r.heading}};
  };
  std::vector<Pose> poses_a{pose_of(a)};
  std::vector<Pose> poses_b{pose_of(b)};
  std::size_t still = 0;
  for (std::size_t step = 0; !(a.done && b.done); ++step) {
    if (step >= kSimStepCap)
      throw Error(ErrorCode::StepCapExceeded,
                  "pioneer exchange exceeded " + std::to_string(kSimStepCap) + " steps");
    const Point2 a_prev = a.pos;
    const Point2 b_prev = b.pos;
    const bool a_active = !a.done;
    const bool b_active = !b.done;

    if (a_active) {
      const auto cmd = a.command(params);
      auto [p, h] = a.propose(cmd, params.dt);
      a.pos = p;
      a.heading = h;
      a.speed = cmd.v;
    }
    if (b_active) {
      auto cmd = b.command(params);
      auto [p, h] = b.propose(cmd, params.dt);
      const double d_move = detail::dist2d(p, a.pos);
      const double d_stay = detail::dist2d(b.pos, a.pos);
      if (d_move < clearance && d_move < d_stay) {
        cmd.v = 0.0;
        std::tie(p, h) = b.propose(cmd, params.dt);
      }
      b.pos = p;
      b.heading = h;
      b.speed = cmd.v;
    }
    a.advance_target(reach);
    b.advance_target(reach);
    if (a_active) poses_a.push_back(pose_of(a));
    if (b_active) poses_b.push_back(pose_of(b));

    if (a.pos == a_prev && b.pos == b_prev) {
      if (++still > kDeadlockSteps)
        throw Error(ErrorCode::DeadlockDetected,
                    "both pioneers stationary for more than " + std::to_string(kDeadlockSteps) +
                        " steps");
    } else {
      still = 0;
    }
  }
  return {make_trajectory(poses_a, params.dt, Context::Pioneer),
          make_trajectory(poses_b, params.dt, Context::Pioneer)};
}

}  // namespace robolog
