#pragma once
// Reference implementations used only by the tests. They deliberately share
// no code with the library beyond the GridMap container.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "robolog/grid.hpp"

namespace oracle {

// Plain Dijkstra over the 8-connected grid graph: diagonal moves cost
// sqrt(2)*cell and may not cut an occupied corner.
inline std::optional<double> dijkstra(const robolog::GridMap& g, robolog::Cell s, robolog::Cell t) {
  const int W = g.width(), H = g.height();
  auto blocked = [&](int x, int y) {
    return x < 0 || y < 0 || x >= W || y >= H || g.occupied(robolog::Cell{x, y});
  };
  if (blocked(s.x, s.y) || blocked(t.x, t.y)) return std::nullopt;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(W) * H, inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s.y * W + s.x] = 0;
  pq.push({0.0, s.y * W + s.x});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    const int ux = u % W, uy = u / W;
    if (ux == t.x && uy == t.y) return d;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int vx = ux + dx, vy = uy + dy;
        if (blocked(vx, vy)) continue;
        if (dx && dy && (blocked(ux + dx, uy) || blocked(ux, uy + dy))) continue;
        const double w = g.cell_size() * ((dx && dy) ? std::sqrt(2.0) : 1.0);
        const int v = vy * W + vx;
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pq.push({dist[v], v});
        }
      }
  }
  return std::nullopt;
}

struct RandomProblem {
  robolog::GridMap grid;
  robolog::Cell start, goal;
};

inline RandomProblem random_problem(std::uint64_t seed, int w = 20, int h = 20, double density = 0.2) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution occ(density);
  std::uniform_int_distribution<int> ux(0, w - 1), uy(0, h - 1);
  robolog::GridMap g(w, h, 1.0, {0.0, 0.0});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g.set_occupied({x, y}, occ(rng));
  robolog::Cell s{ux(rng), uy(rng)}, t{ux(rng), uy(rng)};
  g.set_occupied(s, false);
  g.set_occupied(t, false);
  return {std::move(g), s, t};
}

// Mann-Whitney U / (n_pos * n_neg), ties counted as one half.
inline double mann_whitney_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0;
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    ++np;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j]) wins += 1;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  for (int l : labels) nn += (l == 0);
  return wins / (static_cast<double>(np) * static_cast<double>(nn));
}

// Central difference of f along each coordinate of x.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double eps = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + eps;
    const double fp = f(x);
    x[i] = keep - eps;
    const double fm = f(x);
    x[i] = keep;
    g[i] = (fp - fm) / (2 * eps);
  }
  return g;
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

}  // namespace oracle
