#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace drsa {

// A terminal's id is its index in the instance.
struct Terminal {
  Point pos;
  int depth = 0;
};

// The root sits implicitly at the origin.
struct Instance {
  std::vector<Terminal> terminals;
};

// Rooted binary tree. Leaves carry a label (terminal index or abstract slot);
// inner nodes are Steiner points. `top` is the unique child of the root.
struct Topology {
  struct Node {
    int parent = -1;
    std::vector<int> children;
    int label = -1;  // >= 0 for leaves
  };

  std::vector<Node> nodes;
  int top = -1;

  bool is_leaf(int v) const { return nodes[v].label >= 0; }

  int add_leaf(int label) {
    nodes.push_back({-1, {}, label});
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_steiner(int a, int b) {
    nodes.push_back({-1, {a, b}, -1});
    int v = static_cast<int>(nodes.size()) - 1;
    nodes[a].parent = v;
    nodes[b].parent = v;
    return v;
  }

  // Number of Steiner nodes strictly above each node.
  std::vector<int> depths() const {
    std::vector<int> d(nodes.size(), -1);
    if (top < 0) return d;
    std::vector<int> stack{top};
    d[top] = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int c : nodes[v].children) {
        d[c] = d[v] + 1;
        stack.push_back(c);
      }
    }
    return d;
  }

  // Children before parents.
  std::vector<int> postorder() const {
    std::vector<int> order, stack;
    if (top < 0) return order;
    stack.push_back(top);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int c : nodes[v].children) stack.push_back(c);
    }
    std::reverse(order.begin(), order.end());
    return order;
  }
};

struct EmbeddedSolution {
  Topology topo;
  std::vector<Point> place;
  coord_t length = 0;
};

// Sum of edge lengths including the root edge.
inline coord_t tree_length(const Topology& t, const std::vector<Point>& place) {
  if (t.top < 0) return 0;
  coord_t len = norm1(place[t.top]);
  for (std::size_t v = 0; v < t.nodes.size(); ++v)
    for (int c : t.nodes[v].children) len += l1(place[v], place[c]);
  return len;
}

struct ValidationReport {
  struct Violation {
    std::string condition;
    std::string detail;
  };
  bool ok = true;
  std::vector<Violation> violations;

  void add(std::string condition, std::string detail) {
    ok = false;
    violations.push_back({std::move(condition), std::move(detail)});
  }

  bool has(const std::string& condition) const {
    for (auto& v : violations)
      if (v.condition == condition) return true;
    return false;
  }
};

enum class Status { ok, infeasible, budget_exceeded, no_connection };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::infeasible: return "infeasible";
    case Status::budget_exceeded: return "budget-exceeded";
    case Status::no_connection: return "no-connection";
  }
  return "?";
}

template <class T>
struct Result {
  Status status = Status::ok;
  T value{};
  std::string detail;

  explicit operator bool() const { return status == Status::ok; }
  static Result fail(Status s, std::string why = {}) {
    Result r;
    r.status = s;
    r.detail = std::move(why);
    return r;
  }
};

inline std::string terminal_name(std::size_t i) { return "t" + std::to_string(i); }

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  if (inst.terminals.empty()) rep.add("nonempty", "instance has no terminals");
  for (std::size_t i = 0; i < inst.terminals.size(); ++i) {
    const auto& t = inst.terminals[i];
    if (t.pos.x < 0 || t.pos.y < 0)
      rep.add("first-quadrant", terminal_name(i) + " lies outside the first quadrant");
    if (t.depth < 0) rep.add("depth", terminal_name(i) + " has negative depth");
    if (t.pos == Point{} && t.depth == 0 && inst.terminals.size() > 1)
      rep.add("pinned", terminal_name(i) + " occupies the root with depth 0");
  }
  return rep;
}

namespace detail {

// Structural sanity: indices in range, parent links consistent, a single tree
// hanging from top. Throws on anything that prevents reading the solution.
inline void check_structure(const Instance& inst, const EmbeddedSolution& sol) {
  const auto& nodes = sol.topo.nodes;
  const int n = static_cast<int>(nodes.size());
  auto bad = [](const std::string& why) { throw Error("malformed solution: " + why); };
  if (sol.place.size() != nodes.size()) bad("placement size mismatch");
  if (sol.topo.top < 0 || sol.topo.top >= n) bad("missing root child");
  if (nodes[sol.topo.top].parent != -1) bad("root child has a parent");
  for (int v = 0; v < n; ++v) {
    for (int c : nodes[v].children) {
      if (c < 0 || c >= n) bad("dangling child reference");
      if (nodes[c].parent != v) bad("inconsistent parent link");
    }
    int p = nodes[v].parent;
    if (p != -1 && (p < 0 || p >= n)) bad("dangling parent reference");
    if (nodes[v].label >= static_cast<int>(inst.terminals.size())) bad("unknown terminal");
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{sol.topo.top};
  int count = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (seen[v]) bad("cycle");
    seen[v] = 1;
    ++count;
    for (int c : nodes[v].children) stack.push_back(c);
  }
  if (count != n) bad("node not reachable from the root");
}

}  // namespace detail

inline ValidationReport verify_solution(const Instance& inst, const EmbeddedSolution& sol) {
  detail::check_structure(inst, sol);
  ValidationReport rep;
  const auto& topo = sol.topo;
  const int n = static_cast<int>(topo.nodes.size());
  std::vector<int> owner(inst.terminals.size(), -1);

  for (int v = 0; v < n; ++v) {
    const auto& node = topo.nodes[v];
    if (node.label >= 0) {
      if (!node.children.empty())
        rep.add("leaf", terminal_name(node.label) + " has children");
      if (owner[node.label] >= 0)
        rep.add("leaf", terminal_name(node.label) + " appears twice");
      owner[node.label] = v;
    } else if (node.children.size() != 2) {
      rep.add("degree", "Steiner node " + std::to_string(v) + " has " +
                            std::to_string(node.children.size()) + " children");
    }
  }

  auto dep = topo.depths();
  // root path length, computed top-down
  std::vector<coord_t> dist(n, 0);
  {
    std::vector<int> stack{topo.top};
    dist[topo.top] = norm1(sol.place[topo.top]);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int c : topo.nodes[v].children) {
        dist[c] = dist[v] + l1(sol.place[v], sol.place[c]);
        stack.push_back(c);
      }
    }
  }

  for (std::size_t i = 0; i < inst.terminals.size(); ++i) {
    int v = owner[i];
    const auto& t = inst.terminals[i];
    if (v < 0) {
      rep.add("leaf", terminal_name(i) + " is not in the tree");
      continue;
    }
    if (sol.place[v] != t.pos) rep.add("pinned", terminal_name(i) + " is not at its position");
    if (dist[v] != norm1(t.pos))
      rep.add("shortest-path", terminal_name(i) + " root path has length " +
                                   std::to_string(dist[v]) + ", expected " +
                                   std::to_string(norm1(t.pos)));
    if (dep[v] != t.depth)
      rep.add("depth", terminal_name(i) + " has " + std::to_string(dep[v]) +
                           " Steiner ancestors, expected " + std::to_string(t.depth));
  }

  coord_t len = tree_length(topo, sol.place);
  if (len != sol.length)
    rep.add("length", "stored length " + std::to_string(sol.length) + ", recomputed " +
                          std::to_string(len));
  return rep;
}

}  // namespace drsa
