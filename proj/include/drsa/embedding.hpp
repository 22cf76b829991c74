#pragma once

#include "model.hpp"

namespace drsa {

// Places every Steiner node at the componentwise minimum of its children,
// leaves first. For instances in the first quadrant this is optimal for the
// given topology.
inline EmbeddedSolution optimal_embed(const Instance& inst, const Topology& topo) {
  const int n = static_cast<int>(topo.nodes.size());
  if (topo.top < 0 || topo.top >= n) throw Error("binding: topology has no root child");
  std::vector<int> seen(inst.terminals.size(), 0);
  for (const auto& node : topo.nodes) {
    if (node.label >= 0) {
      if (node.label >= static_cast<int>(inst.terminals.size()) || !node.children.empty())
        throw Error("binding: leaf does not name a terminal");
      ++seen[node.label];
    } else if (node.children.size() != 2) {
      throw Error("binding: Steiner node is not binary");
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i] != 1) throw Error("binding: " + terminal_name(i) + " not bound exactly once");
  auto dep = topo.depths();
  for (int v = 0; v < n; ++v) {
    if (dep[v] < 0) throw Error("binding: node unreachable");
    int l = topo.nodes[v].label;
    if (l >= 0 && dep[v] != inst.terminals[l].depth)
      throw Error("binding: depth mismatch at " + terminal_name(l));
  }

  EmbeddedSolution sol;
  sol.topo = topo;
  sol.place.assign(n, Point{});
  for (int v : topo.postorder()) {
    const auto& node = topo.nodes[v];
    if (node.label >= 0)
      sol.place[v] = inst.terminals[node.label].pos;
    else
      sol.place[v] = pmin(sol.place[node.children[0]], sol.place[node.children[1]]);
  }
  sol.length = tree_length(sol.topo, sol.place);
  return sol;
}

}  // namespace drsa
