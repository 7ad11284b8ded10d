#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/grid.hpp"

namespace robolog {

struct Path {
  std::vector<Cell> cells;
  std::vector<Point2> world_points;
  double cost = 0.0;
  friend bool operator==(const Path&, const Path&) = default;
};

struct CellChange {
  Cell cell;
  bool occupied = false;
};

// Fixed neighbour order: E, NE, N, NW, W, SW, S, SE. Among equal-cost
// successors the earliest in this order wins.
inline constexpr std::array<Cell, 8> kNeighbourOffsets{
    Cell{1, 0}, Cell{1, 1}, Cell{0, 1}, Cell{-1, 1},
    Cell{-1, 0}, Cell{-1, -1}, Cell{0, -1}, Cell{1, -1}};

// True when a robot may step from `from` to `from + offset`: the target is
// free and, for diagonal steps, both adjacent axis cells are free as well.
inline bool move_allowed(const GridMap& grid, Cell from, Cell offset) {
  const Cell to{from.x + offset.x, from.y + offset.y};
  if (!grid.in_bounds(to) || grid.occupied_unchecked(to) || grid.occupied_unchecked(from))
    return false;
  if (offset.x != 0 && offset.y != 0) {
    if (grid.occupied_unchecked({from.x + offset.x, from.y}) ||
        grid.occupied_unchecked({from.x, from.y + offset.y}))
      return false;
  }
  return true;
}

inline double step_cost(const GridMap& grid, Cell offset) {
  return (offset.x != 0 && offset.y != 0) ? grid.cell_size() * std::sqrt(2.0) : grid.cell_size();
}

// Incremental D* planner. Costs are propagated backwards from the goal with
// an open list keyed by min(g, rhs); when the map changes only the cells
// whose edges changed are re-queued, and the next search repairs the
// estimates from there instead of starting over.
class DStarPlanner {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  DStarPlanner(GridMap grid, Cell start, Cell goal)
      : grid_(std::move(grid)), start_(start), goal_(goal) {
    grid_.require_in_bounds(start_);
    grid_.require_in_bounds(goal_);
    if (grid_.occupied(start_))
      throw Error(ErrorCode::OccupiedEndpoint, "start " + to_string(start_) + " is occupied");
    if (grid_.occupied(goal_))
      throw Error(ErrorCode::OccupiedEndpoint, "goal " + to_string(goal_) + " is occupied");
    reset();
  }

  const GridMap& grid() const { return grid_; }
  Cell start() const { return start_; }
  Cell goal() const { return goal_; }
  std::uint64_t version() const { return version_; }
  std::size_t expansions() const { return expansions_; }
  std::size_t open_size() const { return open_.size(); }

  double cost_to_goal(Cell c) const { return g_[grid_.index(c)]; }

  // Fresh search from the current map, discarding all stored estimates.
  std::optional<Path> plan() {
    reset();
    return replan();
  }

  // Applies occupancy changes and re-queues every cell whose outgoing edges
  // may have changed (the 3x3 block around each changed cell, because a
  // diagonal move depends on its two corner cells).
  void apply_map_change(std::span<const CellChange> changes) {
    for (const auto& ch : changes) grid_.require_in_bounds(ch.cell);
    bool any = false;
    for (const auto& ch : changes) {
      if (grid_.occupied_unchecked(ch.cell) == ch.occupied) continue;
      grid_.set_occupied(ch.cell, ch.occupied);
      any = true;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const Cell c{ch.cell.x + dx, ch.cell.y + dy};
          if (grid_.in_bounds(c)) update_vertex(grid_.index(c));
        }
    }
    if (any) ++version_;
  }

  // Repairs estimates until the start cell is settled, then extracts the
  // path greedily along decreasing cost-to-goal.
  std::optional<Path> replan() {
    compute_shortest_path();
    const std::size_t s = grid_.index(start_);
    if (g_[s] == kInf || grid_.occupied_unchecked(start_) || grid_.occupied_unchecked(goal_))
      return std::nullopt;
    return extract_path();
  }

 private:
  using Key = std::pair<double, std::size_t>;

  void reset() {
    const std::size_t n = grid_.cell_count();
    g_.assign(n, kInf);
    rhs_.assign(n, kInf);
    queued_key_.assign(n, kInf);
    open_.clear();
    const std::size_t goal = grid_.index(goal_);
    if (!grid_.occupied_unchecked(goal_)) {
      rhs_[goal] = 0.0;
      push(goal);
    }
  }

  double key_of(std::size_t i) const { return std::min(g_[i], rhs_[i]); }

  void push(std::size_t i) {
    queued_key_[i] = key_of(i);
    open_.insert({queued_key_[i], i});
  }

  void remove(std::size_t i) {
    if (queued_key_[i] == kInf) return;
    open_.erase({queued_key_[i], i});
    queued_key_[i] = kInf;
  }

  double best_successor_cost(std::size_t i) const {
    const Cell c = grid_.cell_at(i);
    double best = kInf;
    for (const Cell& off : kNeighbourOffsets) {
      if (!move_allowed(grid_, c, off)) continue;
      const double v = step_cost(grid_, off) + g_[grid_.index({c.x + off.x, c.y + off.y})];
      if (v < best) best = v;
    }
    return best;
  }

  void update_vertex(std::size_t i) {
    const Cell c = grid_.cell_at(i);
    if (!(c == goal_))
      rhs_[i] = grid_.occupied_unchecked(c) ? kInf : best_successor_cost(i);
    else
      rhs_[i] = grid_.occupied_unchecked(c) ? kInf : 0.0;
    remove(i);
    if (g_[i] != rhs_[i]) push(i);
  }

  void update_neighbours(std::size_t i) {
    const Cell c = grid_.cell_at(i);
    for (const Cell& off : kNeighbourOffsets) {
      const Cell n{c.x + off.x, c.y + off.y};
      if (grid_.in_bounds(n)) update_vertex(grid_.index(n));
    }
  }

  void compute_shortest_path() {
    const std::size_t s = grid_.index(start_);
    // Ties with the start key are expanded too, so every cell the path
    // extraction can touch is consistent on exit.
    while (!open_.empty() && (open_.begin()->first <= key_of(s) || rhs_[s] != g_[s])) {
      const std::size_t u = open_.begin()->second;
      remove(u);
      ++expansions_;
      if (g_[u] > rhs_[u]) {
        g_[u] = rhs_[u];
      } else {
        g_[u] = kInf;
        update_vertex(u);
      }
      update_neighbours(u);
    }
  }

  Path extract_path() const {
    Path path;
    std::vector<double> steps;
    Cell cur = start_;
    path.cells.push_back(cur);
    while (!(cur == goal_)) {
      double best = kInf;
      Cell next = cur;
      double next_step = 0.0;
      for (const Cell& off : kNeighbourOffsets) {
        if (!move_allowed(grid_, cur, off)) continue;
        const Cell n{cur.x + off.x, cur.y + off.y};
        const double v = step_cost(grid_, off) + g_[grid_.index(n)];
        if (v < best) {
          best = v;
          next = n;
          next_step = step_cost(grid_, off);
        }
      }
      if (best == kInf || path.cells.size() > grid_.cell_count())
        throw Error(ErrorCode::NoPath, "inconsistent cost field during path extraction");
      cur = next;
      path.cells.push_back(cur);
      steps.push_back(next_step);
    }
    // Summed goal-first so the total reproduces the stored cost-to-goal.
    double cost = 0.0;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) cost += *it;
    path.cost = cost;
    path.world_points.reserve(path.cells.size());
    for (const Cell& c : path.cells) path.world_points.push_back(grid_.world_of(c));
    return path;
  }

  GridMap grid_;
  Cell start_;
  Cell goal_;
  std::vector<double> g_;
  std::vector<double> rhs_;
  std::vector<double> queued_key_;
  std::set<Key> open_;
  std::uint64_t version_ = 0;
  std::size_t expansions_ = 0;
};

inline std::optional<Path> plan(const GridMap& grid, Cell start, Cell goal) {
  DStarPlanner planner(grid, start, goal);
  return planner.plan();
}

}  // namespace robolog
