#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>

#include "model.hpp"

namespace drsa {

using bigint = boost::multiprecision::cpp_int;

// Sum of 2^-d in lowest terms; the denominator is a power of two.
struct KraftResult {
  bigint numerator;
  bigint denominator;
  bool feasible = false;

  std::string fraction() const { return numerator.str() + "/" + denominator.str(); }
};

inline KraftResult kraft_check(const std::vector<int>& depths) {
  if (depths.empty()) throw Error("empty depth multiset");
  int dmax = 0;
  for (int d : depths) {
    if (d < 0) throw Error("negative depth");
    dmax = std::max(dmax, d);
  }
  // carry counts upward; bit[d] is the residual 2^-d digit
  std::vector<std::int64_t> count(dmax + 1, 0);
  for (int d : depths) ++count[d];
  std::vector<char> bit(dmax + 1, 0);
  for (int d = dmax; d >= 1; --d) {
    bit[d] = static_cast<char>(count[d] & 1);
    count[d - 1] += count[d] >> 1;
  }
  int low = 0;
  for (int d = dmax; d >= 1; --d)
    if (bit[d]) {
      low = d;
      break;
    }
  KraftResult r;
  r.denominator = bigint(1) << low;
  r.numerator = bigint(count[0]) << low;
  for (int d = 1; d <= low; ++d)
    if (bit[d]) r.numerator += bigint(1) << (low - d);
  r.feasible = (low == 0 && count[0] == 1);
  return r;
}

inline KraftResult kraft_check(const Instance& inst) {
  std::vector<int> d;
  for (auto& t : inst.terminals) d.push_back(t.depth);
  return kraft_check(d);
}

// Leaves are labelled by slot index (position in `depths`). At each depth the
// items are paired in order of their smallest slot index.
inline Result<Topology> build_depth_topology(const std::vector<int>& depths) {
  using R = Result<Topology>;
  if (depths.empty()) return R::fail(Status::infeasible, "empty depth multiset");
  auto k = kraft_check(depths);
  if (!k.feasible) return R::fail(Status::infeasible, "sum=" + k.fraction());

  Topology t;
  struct Item {
    int key;
    int node;
  };
  std::map<int, std::vector<Item>> level;
  for (std::size_t i = 0; i < depths.size(); ++i)
    level[depths[i]].push_back({static_cast<int>(i), t.add_leaf(static_cast<int>(i))});
  while (true) {
    auto it = std::prev(level.end());
    int d = it->first;
    auto items = std::move(it->second);
    level.erase(it);
    std::sort(items.begin(), items.end(), [](auto& a, auto& b) { return a.key < b.key; });
    if (d == 0) {
      // Kraft equality leaves exactly one item here
      t.top = items.front().node;
      break;
    }
    auto& up = level[d - 1];
    for (std::size_t i = 0; i + 1 < items.size(); i += 2)
      up.push_back({std::min(items[i].key, items[i + 1].key),
                    t.add_steiner(items[i].node, items[i + 1].node)});
  }
  return {Status::ok, std::move(t), {}};
}

// All Steiner points at the origin.
inline Result<EmbeddedSolution> trivial_solution(const Instance& inst) {
  using R = Result<EmbeddedSolution>;
  std::vector<int> depths;
  for (auto& t : inst.terminals) depths.push_back(t.depth);
  auto topo = build_depth_topology(depths);
  if (!topo) return R::fail(topo.status, topo.detail);
  EmbeddedSolution sol;
  sol.topo = std::move(topo.value);
  sol.place.assign(sol.topo.nodes.size(), Point{});
  for (std::size_t v = 0; v < sol.topo.nodes.size(); ++v)
    if (sol.topo.nodes[v].label >= 0) sol.place[v] = inst.terminals[sol.topo.nodes[v].label].pos;
  sol.length = tree_length(sol.topo, sol.place);
  return {Status::ok, std::move(sol), {}};
}

}  // namespace drsa
