#pragma once

#include <functional>
#include <optional>

#include "model.hpp"

namespace drsa {

// Exhaustive reference: every labeled binary tree over the terminals, every
// placement of its Steiner points on the Hanan grid of terminals and origin.
// Only for tiny first-quadrant instances; returns nullopt if no tree fits.
inline std::optional<coord_t> bruteforce_min_length(const Instance& inst) {
  const int n = static_cast<int>(inst.terminals.size());
  if (n == 0 || n > 7) throw Error("oracle handles 1..7 terminals");
  for (auto& t : inst.terminals)
    if (t.pos.x < 0 || t.pos.y < 0) throw Error("oracle needs first-quadrant terminals");

  std::vector<coord_t> xs{0}, ys{0};
  for (auto& t : inst.terminals) xs.push_back(t.pos.x), ys.push_back(t.pos.y);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // tree as nested splits: node = (mask, left, right); leaves have one bit
  struct Node {
    int mask, left = -1, right = -1, depth = 0;
  };
  std::optional<coord_t> best;

  std::vector<Node> nodes;
  std::function<void(std::vector<int>&, std::size_t)> expand;
  // `open` holds inner nodes whose mask still needs splitting
  expand = [&](std::vector<int>& open, std::size_t k) {
    if (k == open.size()) {
      // depths are fixed by the shape
      for (auto& nd : nodes)
        if (nd.left < 0) {
          int t = __builtin_ctz(nd.mask);
          if (nd.depth != inst.terminals[t].depth) return;
        }
      // place Steiner points top-down; each must sit between its parent and
      // the componentwise minimum of its subtree's terminals
      std::vector<Point> at(nodes.size());
      std::vector<int> inner;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].left >= 0) inner.push_back(static_cast<int>(i));
      std::vector<int> parent(nodes.size(), -1);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].left >= 0) parent[nodes[i].left] = parent[nodes[i].right] = static_cast<int>(i);
      std::function<void(std::size_t)> go = [&](std::size_t idx) {
        if (idx == inner.size()) {
          coord_t len = 0;
          for (std::size_t i = 0; i < nodes.size(); ++i) {
            Point p = nodes[i].left < 0 ? inst.terminals[__builtin_ctz(nodes[i].mask)].pos : at[i];
            Point q = parent[i] < 0 ? Point{} : at[parent[i]];
            if (!dominated(q, p)) return;
            len += l1(p, q);
          }
          if (!best || len < *best) best = len;
          return;
        }
        const int v = inner[idx];
        Point lo = parent[v] < 0 ? Point{} : at[parent[v]];
        Point hi{std::numeric_limits<coord_t>::max(), std::numeric_limits<coord_t>::max()};
        for (int t = 0; t < n; ++t)
          if (nodes[v].mask >> t & 1) hi = pmin(hi, inst.terminals[t].pos);
        for (coord_t x : xs)
          for (coord_t y : ys) {
            if (x < lo.x || y < lo.y || x > hi.x || y > hi.y) continue;
            at[v] = {x, y};
            go(idx + 1);
          }
      };
      go(0);
      return;
    }
    const int v = open[k];
    const int mask = nodes[v].mask;
    if (__builtin_popcount(mask) == 1) {
      expand(open, k + 1);
      return;
    }
    // unordered splits: the lowest bit always goes left
    const int low = mask & -mask;
    for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;
      const int rest = mask ^ sub;
      const std::size_t before = nodes.size();
      nodes.push_back({sub, -1, -1, nodes[v].depth + 1});
      nodes.push_back({rest, -1, -1, nodes[v].depth + 1});
      nodes[v].left = static_cast<int>(before);
      nodes[v].right = static_cast<int>(before + 1);
      const std::size_t open_size = open.size();
      open.push_back(static_cast<int>(before));
      open.push_back(static_cast<int>(before + 1));
      expand(open, k + 1);
      open.resize(open_size);
      nodes.resize(before);
      nodes[v].left = nodes[v].right = -1;
    }
  };

  // the root's only child carries all terminals at depth 0; a lone terminal
  // of depth 0 is that child itself
  nodes.push_back({(1 << n) - 1, -1, -1, 0});
  std::vector<int> open{0};
  expand(open, 0);
  return best;
}

}  // namespace drsa
