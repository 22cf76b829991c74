#pragma once

#include <functional>
#include <map>
#include <thread>
#include <tuple>

#include "embedding.hpp"
#include "feasibility.hpp"

namespace drsa {

// Calls `visit` with every depth-consistent topology whose leaves are labelled
// by the indices of `depths`, each unordered tree exactly once. Returning false
// from `visit` stops the enumeration. Returns infeasible when Kraft fails.
inline Status enumerate_topologies(const std::vector<int>& depths,
                                   const std::function<bool(const Topology&)>& visit) {
  if (depths.empty() || !kraft_check(depths).feasible) return Status::infeasible;
  std::map<int, std::vector<int>> by_depth;
  Topology t;
  for (std::size_t i = 0; i < depths.size(); ++i)
    by_depth[depths[i]].push_back(t.add_leaf(static_cast<int>(i)));
  const int dmax = by_depth.rbegin()->first;

  bool stop = false;
  // items at depth d are matched into pairs that become nodes at depth d-1
  std::function<void(int, std::vector<int>&, std::vector<int>&)> pair_up;
  std::function<void(int, std::vector<int>)> level = [&](int d, std::vector<int> items) {
    if (stop) return;
    if (d == 0) {
      if (items.size() == 1) {
        t.top = items[0];
        if (!visit(t)) stop = true;
        t.top = -1;
      }
      return;
    }
    if (items.size() % 2) return;
    std::vector<int> formed;
    pair_up(d, items, formed);
  };
  pair_up = [&](int d, std::vector<int>& rest, std::vector<int>& formed) {
    if (stop) return;
    if (rest.empty()) {
      std::vector<int> next = formed;
      auto it = by_depth.find(d - 1);
      if (it != by_depth.end()) next.insert(next.end(), it->second.begin(), it->second.end());
      level(d - 1, std::move(next));
      return;
    }
    int a = rest[0];
    for (std::size_t i = 1; i < rest.size() && !stop; ++i) {
      int b = rest[i];
      std::vector<int> remaining;
      remaining.reserve(rest.size() - 2);
      for (std::size_t j = 1; j < rest.size(); ++j)
        if (j != i) remaining.push_back(rest[j]);
      formed.push_back(t.add_steiner(a, b));
      pair_up(d, remaining, formed);
      formed.pop_back();
      t.nodes.pop_back();
      t.nodes[a].parent = t.nodes[b].parent = -1;
    }
  };
  level(dmax, by_depth[dmax]);
  return Status::ok;
}

struct SolveOptions {
  std::uint64_t budget = 10'000'000;  // maximum number of topologies
  unsigned threads = 1;
};

namespace detail {

using EdgeKey = std::vector<std::tuple<coord_t, coord_t, coord_t, coord_t>>;

inline EdgeKey edge_key(const EmbeddedSolution& s) {
  EdgeKey k;
  k.emplace_back(0, 0, s.place[s.topo.top].x, s.place[s.topo.top].y);
  for (std::size_t v = 0; v < s.topo.nodes.size(); ++v)
    for (int c : s.topo.nodes[v].children)
      k.emplace_back(s.place[v].x, s.place[v].y, s.place[c].x, s.place[c].y);
  std::sort(k.begin(), k.end());
  return k;
}

struct Incumbent {
  bool have = false;
  EmbeddedSolution sol;
  EdgeKey key;

  void offer(EmbeddedSolution&& cand) {
    if (have && cand.length > sol.length) return;
    auto k = edge_key(cand);
    if (have && cand.length == sol.length && !(k < key)) return;
    have = true;
    sol = std::move(cand);
    key = std::move(k);
  }
};

}  // namespace detail

// Minimum over all topologies of the componentwise-minimum embedding. Ties are broken by the
// lexicographically smallest sorted edge list, so the result does not depend
// on the thread count.
inline Result<EmbeddedSolution> solve_exact(const Instance& inst, SolveOptions opt = {}) {
  using R = Result<EmbeddedSolution>;
  auto rep = validate_instance(inst);
  if (!rep.ok) throw Error("invalid instance: " + rep.violations.front().detail);
  std::vector<int> depths;
  for (auto& t : inst.terminals) depths.push_back(t.depth);
  auto k = kraft_check(depths);
  if (!k.feasible) return R::fail(Status::infeasible, "sum=" + k.fraction());

  const unsigned nt = std::max(1u, opt.threads);
  std::vector<detail::Incumbent> best(nt);
  std::vector<char> over(nt, 0);
  auto work = [&](unsigned tid) {
    std::uint64_t index = 0;
    enumerate_topologies(depths, [&](const Topology& t) {
      if (++index > opt.budget) {
        over[tid] = 1;
        return false;
      }
      if ((index - 1) % nt == tid) best[tid].offer(optimal_embed(inst, t));
      return true;
    });
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  if (over[0]) return R::fail(Status::budget_exceeded, "more than " + std::to_string(opt.budget) + " topologies");
  detail::Incumbent all;
  for (auto& b : best)
    if (b.have) all.offer(std::move(b.sol));
  return {Status::ok, std::move(all.sol), {}};
}

}  // namespace drsa
