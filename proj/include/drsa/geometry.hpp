#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace drsa {

using coord_t = std::int64_t;

struct Point {
  coord_t x = 0;
  coord_t y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

inline coord_t l1(Point a, Point b) {
  return std::llabs(a.x - b.x) + std::llabs(a.y - b.y);
}

inline coord_t norm1(Point a) { return std::llabs(a.x) + std::llabs(a.y); }

// componentwise minimum
inline Point pmin(Point a, Point b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y)};
}

// a lies weakly south-west of b
inline bool dominated(Point a, Point b) { return a.x <= b.x && a.y <= b.y; }

inline Point transpose(Point p) { return {p.y, p.x}; }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cartesian product of the distinct coordinates, sorted lexicographically.
inline std::vector<Point> hanan_grid(const std::vector<Point>& pts) {
  if (pts.empty()) throw Error("empty point set");
  std::vector<coord_t> xs, ys;
  for (auto p : pts) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Point> out;
  out.reserve(xs.size() * ys.size());
  for (auto x : xs)
    for (auto y : ys) out.push_back({x, y});
  return out;
}

}  // namespace drsa
