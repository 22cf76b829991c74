#pragma once

// Independent references for the tests. They lean on the data types and on
// verify_solution only, never on the solvers.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <drsa/model.hpp>

namespace support {

using drsa::coord_t;
using drsa::Instance;
using drsa::Point;

// sum 2^-d == 1, by integer scaling
inline bool kraft_equal(const std::vector<int>& depths) {
  if (depths.empty()) return false;
  int D = *std::max_element(depths.begin(), depths.end());
  std::uint64_t sum = 0;
  for (int d : depths) sum += std::uint64_t{1} << (D - d);
  return sum == (std::uint64_t{1} << D);
}

inline std::vector<int> leaf_depths(const drsa::Topology& t) {
  auto d = t.depths();
  std::vector<int> out;
  for (std::size_t v = 0; v < t.nodes.size(); ++v)
    if (t.nodes[v].label >= 0) out.push_back(d[v]);
  std::sort(out.begin(), out.end());
  return out;
}

// Kraft-tight depth multiset with n leaves, grown by splitting random leaves.
inline std::vector<int> random_depths(std::mt19937_64& rng, int n, int max_depth = 100) {
  std::vector<int> d{0};
  while (static_cast<int>(d.size()) < n) {
    std::vector<int> can;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] < max_depth) can.push_back(static_cast<int>(i));
    int i = can[std::uniform_int_distribution<int>(0, static_cast<int>(can.size()) - 1)(rng)];
    int x = ++d[i];
    d.push_back(x);
  }
  std::shuffle(d.begin(), d.end(), rng);
  return d;
}

inline Instance random_instance(std::mt19937_64& rng, int n, coord_t cmax) {
  Instance inst;
  auto depths = random_depths(rng, n);
  std::uniform_int_distribution<coord_t> c(0, cmax);
  for (int d : depths) {
    Point p{c(rng), c(rng)};
    while (n > 1 && d == 0 && p == Point{}) p = {c(rng), c(rng)};
    inst.terminals.push_back({p, d});
  }
  return inst;
}

inline std::vector<Point> hanan(const Instance& inst) {
  std::vector<coord_t> xs{0}, ys{0};
  for (auto& t : inst.terminals) xs.push_back(t.pos.x), ys.push_back(t.pos.y);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Point> g;
  for (auto x : xs)
    for (auto y : ys) g.push_back({x, y});
  return g;
}

// Cheapest valid placement of a fixed topology, trying every Hanan point for
// every Steiner node and keeping those that pass the verifier's conditions.
inline std::optional<coord_t> best_placement(const Instance& inst, const drsa::Topology& topo) {
  auto grid = hanan(inst);
  std::vector<int> steiner;
  drsa::EmbeddedSolution sol;
  sol.topo = topo;
  sol.place.assign(topo.nodes.size(), {});
  for (std::size_t v = 0; v < topo.nodes.size(); ++v) {
    if (topo.nodes[v].label >= 0)
      sol.place[v] = inst.terminals[topo.nodes[v].label].pos;
    else
      steiner.push_back(static_cast<int>(v));
  }
  std::optional<coord_t> best;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == steiner.size()) {
      sol.length = drsa::tree_length(sol.topo, sol.place);
      if (best && sol.length >= *best) return;
      if (drsa::verify_solution(inst, sol).ok) best = sol.length;
      return;
    }
    for (auto& p : grid) {
      sol.place[steiner[k]] = p;
      go(k + 1);
    }
  };
  go(0);
  return best;
}

inline bool on_grid(const std::vector<Point>& grid, Point p) {
  return std::binary_search(grid.begin(), grid.end(), p);
}

}  // namespace support
