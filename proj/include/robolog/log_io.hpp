#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/format.hpp"
#include "robolog/trajectory.hpp"

namespace robolog {

inline constexpr std::string_view kLogHeader =
    "t,x,y,z,roll,pitch,yaw,vx,vy,vz,ax,ay,az,wx,wy,wz,label";
inline constexpr std::size_t kLogFields = 17;

inline std::string format_log_record(const LogRecord& r) {
  const double values[15] = {
      r.position.x,         r.position.y,         r.position.z,
      r.orientation.x,      r.orientation.y,      r.orientation.z,
      r.velocity.x,         r.velocity.y,         r.velocity.z,
      r.acceleration.x,     r.acceleration.y,     r.acceleration.z,
      r.angular_velocity.x, r.angular_velocity.y, r.angular_velocity.z};
  std::string line = format_fixed(r.t, 9);
  for (double v : values) {
    line += ',';
    line += format_double(v);
  }
  line += ',';
  line += r.label ? '1' : '0';
  return line;
}

inline void write_log(const Trajectory& traj, std::ostream& out) {
  out << kLogHeader << '\n';
  for (const auto& r : traj.records) out << format_log_record(r) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed");
}

inline void write_log(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  write_log(traj, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

// Parses a log; dt comes from the first two timestamps and the remaining
// timestamps must sit on that grid. Timestamps are snapped to i*dt.
inline Trajectory read_log(std::istream& in, Context context = Context::Quadcopter) {
  std::string line;
  if (!std::getline(in, line) || line != kLogHeader)
    throw Error(ErrorCode::MalformedHeader,
                "line 1: expected header `" + std::string(kLogHeader) + "`");
  Trajectory traj;
  traj.context = context;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const auto fields = split(line, ',');
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != kLogFields)
      throw Error(ErrorCode::MalformedLine, where + ", column " +
                                                std::to_string(std::min(fields.size(), kLogFields) + 1) +
                                                ": expected " + std::to_string(kLogFields) +
                                                " fields, found " + std::to_string(fields.size()));
    double v[16];
    for (std::size_t i = 0; i < 16; ++i) {
      if (!parse_double(fields[i], v[i]))
        throw Error(ErrorCode::MalformedLine,
                    where + ", column " + std::to_string(i + 1) + ": not a number");
      if (!std::isfinite(v[i]))
        throw Error(ErrorCode::NonFinite, where + ", column " + std::to_string(i + 1));
    }
    if (fields[16] != "0" && fields[16] != "1")
      throw Error(ErrorCode::MalformedLine, where + ", column 17: label must be 0 or 1");
    LogRecord r;
    r.t = v[0];
    r.position = {v[1], v[2], v[3]};
    r.orientation = {v[4], v[5], v[6]};
    r.velocity = {v[7], v[8], v[9]};
    r.acceleration = {v[10], v[11], v[12]};
    r.angular_velocity = {v[13], v[14], v[15]};
    r.label = fields[16] == "1" ? 1 : 0;
    traj.records.push_back(r);
  }

  if (traj.records.size() >= 2) {
    traj.dt = traj.records[1].t - traj.records[0].t;
    if (!(traj.dt > 0.0))
      throw Error(ErrorCode::NonUniformTimestamps, "line 3: timestamps must increase");
  }
  constexpr double tol = 1e-6;
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const double expected = static_cast<double>(i) * traj.dt;
    if (std::abs(traj.records[i].t - expected) > tol)
      throw Error(ErrorCode::NonUniformTimestamps,
                  "line " + std::to_string(i + 2) + ": timestamp " +
                      format_double(traj.records[i].t) + " off the " + format_double(traj.dt) +
                      " s grid");
    traj.records[i].t = expected;
  }
  return traj;
}

inline Trajectory read_log(const std::filesystem::path& path,
                           Context context = Context::Quadcopter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  try {
    return read_log(in, context);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace robolog
