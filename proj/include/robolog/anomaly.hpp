#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/random.hpp"
#include "robolog/trajectory.hpp"

namespace robolog {

enum class AnomalyKind { PositionOffset, VelocityFluctuation };

inline std::string_view to_string(AnomalyKind k) {
  return k == AnomalyKind::PositionOffset ? "position_offset" : "velocity_fluctuation";
}

inline AnomalyKind parse_anomaly_kind(std::string_view s) {
  if (s == "position_offset") return AnomalyKind::PositionOffset;
  if (s == "velocity_fluctuation") return AnomalyKind::VelocityFluctuation;
  throw Error(ErrorCode::ConfigError,
              "expected `position_offset` or `velocity_fluctuation`, got `" +
                  std::string(s) + "`");
}

struct AnomalyConfig {
  AnomalyKind kind = AnomalyKind::PositionOffset;
  double rate = 0.3;          // fraction of records inside bursts
  std::size_t burst_len = 10; // records per burst
  double magnitude = 0.5;     // m (offset) or m/s std (fluctuation)
  std::uint64_t seed = 0;

  void validate() const {
    if (!(rate >= 0.0 && rate <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "anomaly.rate must lie in [0, 1]");
    if (burst_len < 1) throw Error(ErrorCode::InvalidArgument, "anomaly.burst_len must be >= 1");
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
      throw Error(ErrorCode::InvalidArgument, "anomaly.magnitude must be >= 0");
  }
};

struct Burst {
  std::size_t begin = 0;
  std::size_t length = 0;
  friend bool operator==(const Burst&, const Burst&) = default;
};

// Lays out ceil(rate*n) anomalous records as bursts of burst_len (the last
// one possibly shorter), in time order, with at least one normal record
// between consecutive bursts. Placement is uniform over all such layouts.
inline std::vector<Burst> layout_bursts(std::size_t n, const AnomalyConfig& cfg, Rng& rng) {
  const auto covered = static_cast<std::size_t>(std::ceil(cfg.rate * static_cast<double>(n)));
  if (covered == 0) return {};
  const std::size_t count = (covered + cfg.burst_len - 1) / cfg.burst_len;
  if (covered + (count - 1) > n)
    throw Error(ErrorCode::RateInfeasible,
                std::to_string(covered) + " anomalous records in bursts of " +
                    std::to_string(cfg.burst_len) + " do not fit into " + std::to_string(n) +
                    " records");
  // Stars and bars: `slack` free records spread over count+1 gaps.
  const std::size_t slack = n - covered - (count - 1);
  std::vector<std::size_t> slots(slack + count);
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, slots.size() - i));
    std::swap(slots[i], slots[j]);
  }
  std::vector<std::size_t> bars(slots.begin(), slots.begin() + static_cast<long>(count));
  std::sort(bars.begin(), bars.end());

  std::vector<Burst> bursts;
  std::size_t cursor = 0;
  std::size_t remaining = covered;
  std::size_t prev_bar = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t gap = bars[i] - (i == 0 ? 0 : prev_bar + 1);
    prev_bar = bars[i];
    cursor += gap + (i == 0 ? 0 : 1);
    const std::size_t len = std::min(cfg.burst_len, remaining);
    bursts.push_back({cursor, len});
    cursor += len;
    remaining -= len;
  }
  return bursts;
}

// Disturbs the positions inside sampled bursts, relabels them 1 and
// re-derives the kinematic fields. position_offset shifts a whole burst by
// magnitude along a random in-plane direction; velocity_fluctuation adds
// N(0, magnitude^2) velocity noise to each in-burst step, with the walk
// removed again at the burst exit.
inline Trajectory inject(const Trajectory& traj, const AnomalyConfig& cfg) {
  if (traj.empty()) throw Error(ErrorCode::EmptyTrajectory, "cannot inject into empty trajectory");
  cfg.validate();
  Trajectory out = traj;
  for (auto& r : out.records) r.label = 0;

  Rng rng(cfg.seed);
  const auto bursts = layout_bursts(out.size(), cfg, rng);
  if (bursts.empty()) return out;

  for (const Burst& b : bursts) {
    if (cfg.kind == AnomalyKind::PositionOffset) {
      const double angle = 2.0 * std::numbers::pi * uniform01(rng);
      const Vec3 offset{cfg.magnitude * std::cos(angle), cfg.magnitude * std::sin(angle), 0.0};
      for (std::size_t i = b.begin; i < b.begin + b.length; ++i)
        out.records[i].position = out.records[i].position + offset;
    } else {
      const double step_sd = cfg.magnitude * out.dt;
      Vec3 walk{};
      for (std::size_t i = b.begin; i < b.begin + b.length; ++i) {
        const double ex = standard_normal(rng) * step_sd;
        const double ey = standard_normal(rng) * step_sd;
        walk = walk + Vec3{ex, ey, 0.0};
        out.records[i].position = out.records[i].position + walk;
      }
    }
    for (std::size_t i = b.begin; i < b.begin + b.length; ++i) out.records[i].label = 1;
  }
  if (out.size() > 1) refresh_kinematics(out);
  return out;
}

}  // namespace robolog
