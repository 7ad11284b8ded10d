#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "robolog/error.hpp"
#include "robolog/format.hpp"

namespace robolog {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// Occupancy grid. Cell (0,0) is centred on `origin`; x grows with the
// column index, y with the row index.
class GridMap {
 public:
  GridMap() : GridMap(1, 1, 1.0, {0.0, 0.0}) {}

  GridMap(int width, int height, double cell_size, Point2 origin)
      : width_(width), height_(height), cell_size_(cell_size), origin_(origin) {
    if (width < 1 || height < 1)
      throw Error(ErrorCode::InvalidArgument, "grid dimensions must be >= 1");
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
      throw Error(ErrorCode::InvalidArgument, "cell_size must be positive");
    occupied_.assign(static_cast<std::size_t>(width) * height, 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  Point2 origin() const { return origin_; }
  std::size_t cell_count() const { return occupied_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }

  // Row-major index; also the planner's tie-break order.
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }

  bool occupied(Cell c) const {
    require_in_bounds(c);
    return occupied_[index(c)] != 0;
  }
  bool occupied_unchecked(Cell c) const { return occupied_[index(c)] != 0; }
  void set_occupied(Cell c, bool value) {
    require_in_bounds(c);
    occupied_[index(c)] = value ? 1 : 0;
  }

  Point2 world_of(Cell c) const {
    return {origin_.x + c.x * cell_size_, origin_.y + c.y * cell_size_};
  }
  // Nearest cell centre; may be out of bounds.
  Cell cell_of(Point2 p) const {
    return {static_cast<int>(std::lround((p.x - origin_.x) / cell_size_)),
            static_cast<int>(std::lround((p.y - origin_.y) / cell_size_))};
  }

  // Outer edges of the mapped area.
  double xmin() const { return origin_.x - 0.5 * cell_size_; }
  double xmax() const { return origin_.x + (width_ - 0.5) * cell_size_; }
  double ymin() const { return origin_.y - 0.5 * cell_size_; }
  double ymax() const { return origin_.y + (height_ - 0.5) * cell_size_; }

  void require_in_bounds(Cell c) const {
    if (!in_bounds(c))
      throw Error(ErrorCode::OutOfBounds, "cell " + to_string(c) + " outside " +
                                              std::to_string(width_) + "x" +
                                              std::to_string(height_) + " grid");
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_;
  int height_;
  double cell_size_;
  Point2 origin_;
  std::vector<std::uint8_t> occupied_;
};

// Text format: header `width height cell_size origin_x origin_y`, then
// `height` rows of `.`/`#`, top row first (row 0 is the last line).
inline std::string format_grid(const GridMap& grid) {
  std::string out = std::to_string(grid.width()) + " " + std::to_string(grid.height()) + " " +
                    format_double(grid.cell_size()) + " " + format_double(grid.origin().x) + " " +
                    format_double(grid.origin().y) + "\n";
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) out += grid.occupied_unchecked({x, y}) ? '#' : '.';
    out += '\n';
  }
  return out;
}

inline GridMap parse_grid(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "line 1: empty grid file");

  std::vector<std::string_view> head;
  for (auto tok : split(trim(lines[0]), ' '))
    if (!tok.empty()) head.push_back(tok);
  long long width = 0, height = 0;
  double cell = 0, ox = 0, oy = 0;
  if (head.size() != 5 || !parse_int(head[0], width) || !parse_int(head[1], height) ||
      !parse_double(head[2], cell) || !parse_double(head[3], ox) || !parse_double(head[4], oy))
    throw Error(ErrorCode::MalformedHeader,
                "line 1: expected `width height cell_size origin_x origin_y`");
  if (width < 1 || height < 1 || !(cell > 0.0) || !std::isfinite(ox) || !std::isfinite(oy))
    throw Error(ErrorCode::MalformedHeader, "line 1: invalid grid dimensions");
  if (lines.size() != static_cast<std::size_t>(height) + 1)
    throw Error(ErrorCode::MalformedLine, "line " + std::to_string(lines.size() + 1) +
                                              ": expected " + std::to_string(height) +
                                              " grid rows, found " +
                                              std::to_string(lines.size() - 1));

  GridMap grid(static_cast<int>(width), static_cast<int>(height), cell, {ox, oy});
  for (long long r = 0; r < height; ++r) {
    std::string_view row = lines[static_cast<std::size_t>(r) + 1];
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    const std::string where = "line " + std::to_string(r + 2);
    if (row.size() != static_cast<std::size_t>(width))
      throw Error(ErrorCode::MalformedLine, where + ": expected " + std::to_string(width) +
                                                " cells, found " + std::to_string(row.size()));
    const int y = static_cast<int>(height - 1 - r);
    for (std::size_t x = 0; x < row.size(); ++x) {
      if (row[x] == '#')
        grid.set_occupied({static_cast<int>(x), y}, true);
      else if (row[x] != '.')
        throw Error(ErrorCode::MalformedLine,
                    where + ", column " + std::to_string(x + 1) + ": unexpected character");
    }
  }
  return grid;
}

inline GridMap load_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open grid file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_grid(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

// Marks every cell in the world-space box [x0,x1]x[y0,y1] (by cell centre).
inline void fill_box(GridMap& grid, double x0, double y0, double x1, double y1) {
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x) {
      Point2 p = grid.world_of({x, y});
      if (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1) grid.set_occupied({x, y}, true);
    }
}

// 50x50 cells of 0.1 m over the [-2.5, 2.5]^2 floor.
inline GridMap workspace_grid() { return GridMap(50, 50, 0.1, {-2.45, -2.45}); }

inline bool is_builtin_grid(std::string_view name) {
  return name == "empty5" || name == "workspace" || name == "floor";
}

// `empty5`: 5x5 unit cells. `workspace`: the empty floor. `floor`: the floor
// with three box obstacles.
inline GridMap builtin_grid(std::string_view name) {
  if (name == "empty5") return GridMap(5, 5, 1.0, {0.0, 0.0});
  if (name == "workspace") return workspace_grid();
  if (name == "floor") {
    GridMap grid = workspace_grid();
    fill_box(grid, -1.25, -0.25, -0.65, 1.35);
    fill_box(grid, 0.45, -1.35, 1.35, -0.75);
    fill_box(grid, 0.35, 0.75, 0.95, 1.55);
    return grid;
  }
  throw Error(ErrorCode::ConfigError, "unknown builtin grid `" + std::string(name) + "`");
}

inline GridMap resolve_grid(const std::string& source) {
  return is_builtin_grid(source) ? builtin_grid(source) : load_grid_file(source);
}

// Returns a copy where every cell whose centre lies within `margin` of an
// occupied cell's square or of the outer workspace edge is occupied.
inline GridMap inflate(const GridMap& grid, double margin) {
  GridMap out = grid;
  if (margin < 0.0) throw Error(ErrorCode::InvalidArgument, "safety margin must be >= 0");
  const double tol = 1e-9 * grid.cell_size();
  const double cs = grid.cell_size();
  const int reach = static_cast<int>(std::ceil(margin / cs)) + 1;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.occupied_unchecked({x, y})) continue;
      const Point2 p = grid.world_of({x, y});
      bool blocked = p.x - grid.xmin() <= margin + tol || grid.xmax() - p.x <= margin + tol ||
                     p.y - grid.ymin() <= margin + tol || grid.ymax() - p.y <= margin + tol;
      for (int dy = -reach; dy <= reach && !blocked; ++dy) {
        for (int dx = -reach; dx <= reach && !blocked; ++dx) {
          const Cell n{x + dx, y + dy};
          if (!grid.in_bounds(n) || !grid.occupied_unchecked(n)) continue;
          // distance from p to the obstacle's square
          const double gx = std::max(0.0, std::abs(dx) * cs - 0.5 * cs);
          const double gy = std::max(0.0, std::abs(dy) * cs - 0.5 * cs);
          blocked = std::hypot(gx, gy) <= margin + tol;
        }
      }
      if (blocked) out.set_occupied({x, y}, true);
    }
  }
  return out;
}

}  // namespace robolog
