#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include "geometry.hpp"
#include "model.hpp"

namespace drsa {

enum class Side { left, bottom, right, top };

// A port is a boundary Steiner point with two admissible positions: `o` for
// parity 1 and `o_hat` for parity 0. Inputs enter the tile as leaves of the
// given depth; outputs are roots of the tile's arborescences.
struct TilePort {
  bool input = false;
  Side side = Side::left;
  Point o, o_hat;
  int depth = 0;
  int parity = -1;  // -1 leaves an output free
};

struct TileTerminal {
  Point pos;
  int depth = 0;
};

struct TileProblem {
  coord_t width = 0, height = 0;
  std::vector<TileTerminal> terminals;
  std::vector<TilePort> ports;
};

struct BranchNode {
  enum Kind { terminal, input, steiner };
  Kind kind = steiner;
  int ref = -1;  // terminal index, port index, or -1
  Point pos;
  int depth = 0;
  int parent = -1;
};

struct BranchingResult {
  coord_t length = 0;
  std::vector<BranchNode> nodes;
  std::vector<int> roots;          // node of each output port, in port order
  std::vector<int> port_parity;    // parity used by each port
};

namespace detail {

constexpr coord_t kInf = std::numeric_limits<coord_t>::max() / 4;

struct Leaf {
  Point pos;
  int depth;
  BranchNode::Kind kind;
  int ref;
};

struct Prepared {
  std::vector<Leaf> leaves;
  std::vector<int> outputs;                   // port indices
  std::vector<std::vector<Point>> candidates;  // per output
};

inline Prepared prepare(const TileProblem& prob) {
  Prepared p;
  for (std::size_t i = 0; i < prob.terminals.size(); ++i)
    p.leaves.push_back({prob.terminals[i].pos, prob.terminals[i].depth, BranchNode::terminal,
                        static_cast<int>(i)});
  for (std::size_t i = 0; i < prob.ports.size(); ++i) {
    const auto& port = prob.ports[i];
    if (port.input) {
      if (port.parity != 0 && port.parity != 1) throw Error("input port needs a parity");
      p.leaves.push_back({port.parity == 1 ? port.o : port.o_hat, port.depth, BranchNode::input,
                          static_cast<int>(i)});
    } else {
      p.outputs.push_back(static_cast<int>(i));
      std::vector<Point> c;
      if (port.parity != 0) c.push_back(port.o);
      if (port.parity != 1 && port.o_hat != port.o) c.push_back(port.o_hat);
      p.candidates.push_back(std::move(c));
    }
  }
  return p;
}

inline void finish(const TileProblem& prob, BranchingResult& r) {
  r.port_parity.assign(prob.ports.size(), -1);
  for (std::size_t i = 0; i < prob.ports.size(); ++i)
    if (prob.ports[i].input) r.port_parity[i] = prob.ports[i].parity;
  std::size_t j = 0;
  for (std::size_t i = 0; i < prob.ports.size(); ++i) {
    if (prob.ports[i].input) continue;
    Point at = r.nodes[r.roots[j++]].pos;
    r.port_parity[i] = at == prob.ports[i].o ? 1 : 0;
  }
  r.length = 0;
  for (const auto& n : r.nodes)
    if (n.parent >= 0) r.length += l1(n.pos, r.nodes[n.parent].pos);
}

}  // namespace detail

// Exact tile branching by dynamic programming over (grid point, leaf subset).
// The depth of a subtree is implied by the Kraft sum of its leaf set, so the
// state needs no explicit depth. Exponential in the number of leaves.
inline Result<BranchingResult> solve_tile_branching(const TileProblem& prob) {
  using R = Result<BranchingResult>;
  using detail::kInf;
  auto prep = detail::prepare(prob);
  const auto& leaves = prep.leaves;
  const int n = static_cast<int>(leaves.size());
  if (n == 0 || n > 22) throw Error("subset DP supports 1..22 leaves");

  std::vector<Point> pts;
  for (auto& l : leaves) pts.push_back(l.pos);
  for (auto& port : prob.ports) {
    pts.push_back(port.o);
    pts.push_back(port.o_hat);
  }
  std::vector<coord_t> xs, ys;
  for (auto q : pts) {
    xs.push_back(q.x);
    ys.push_back(q.y);
  }
  for (auto* v : {&xs, &ys}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size()), g = nx * ny;
  auto cell = [&](int i, int j) { return i * ny + j; };
  auto locate = [&](Point q) {
    int i = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), q.x) - xs.begin());
    int j = static_cast<int>(std::lower_bound(ys.begin(), ys.end(), q.y) - ys.begin());
    return cell(i, j);
  };

  int dmax = 0, dmin = std::numeric_limits<int>::max();
  for (auto& l : leaves) {
    dmax = std::max(dmax, l.depth);
    dmin = std::min(dmin, l.depth);
  }
  for (int o : prep.outputs) dmin = std::min(dmin, prob.ports[o].depth);
  if (dmax - dmin > 60) throw Error("subset DP depth span too large");

  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint64_t> weight(full + 1, 0);
  for (std::uint32_t m = 1; m <= full; ++m) {
    int b = __builtin_ctz(m);
    weight[m] = weight[m & (m - 1)] + (std::uint64_t{1} << (dmax - leaves[b].depth));
  }
  auto depth_of = [&](std::uint64_t w) { return dmax - (63 - __builtin_clzll(w)); };

  std::vector<int> index(full + 1, -1);
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m <= full; ++m)
    if ((weight[m] & (weight[m] - 1)) == 0) {
      index[m] = static_cast<int>(masks.size());
      masks.push_back(m);
    }
  const std::size_t ns = masks.size();
  std::vector<coord_t> node(ns * g, kInf), up(ns * g, kInf);
  std::vector<std::uint32_t> split(ns * g, 0);
  std::vector<std::uint8_t> step(ns * g, 0);  // 0 here, 1 from +x, 2 from +y

  for (std::size_t s = 0; s < ns; ++s) {
    const std::uint32_t m = masks[s];
    coord_t* nd = &node[s * g];
    if ((m & (m - 1)) == 0) {
      nd[locate(leaves[__builtin_ctz(m)].pos)] = 0;
    } else {
      const std::uint32_t low = m & (~m + 1);
      const std::uint64_t half = weight[m] >> 1;
      // submasks containing the lowest bit, each unordered split once
      for (std::uint32_t a = (m - 1) & m; a; a = (a - 1) & m) {
        if (!(a & low) || weight[a] != half) continue;
        const std::uint32_t b = m ^ a;
        const coord_t* ua = &up[index[a] * g];
        const coord_t* ub = &up[index[b] * g];
        for (int q = 0; q < g; ++q) {
          coord_t c = ua[q] + ub[q];
          if (c < nd[q]) {
            nd[q] = c;
            split[s * g + q] = a;
          }
        }
      }
    }
    coord_t* u = &up[s * g];
    std::uint8_t* st = &step[s * g];
    for (int i = nx - 1; i >= 0; --i)
      for (int j = ny - 1; j >= 0; --j) {
        int q = cell(i, j);
        u[q] = nd[q];
        st[q] = 0;
        if (i + 1 < nx) {
          coord_t c = u[cell(i + 1, j)] + (xs[i + 1] - xs[i]);
          if (c < u[q]) u[q] = c, st[q] = 1;
        }
        if (j + 1 < ny) {
          coord_t c = u[cell(i, j + 1)] + (ys[j + 1] - ys[j]);
          if (c < u[q]) u[q] = c, st[q] = 2;
        }
      }
  }

  // distribute the leaves over the outputs
  const int no = static_cast<int>(prep.outputs.size());
  coord_t best = kInf;
  std::vector<std::pair<std::uint32_t, int>> choice(no), current(no);
  std::function<void(int, std::uint32_t, coord_t)> assign = [&](int k, std::uint32_t rest, coord_t acc) {
    if (acc >= best) return;
    if (k == no) {
      if (rest == 0) best = acc, choice = current;
      return;
    }
    const int want = prob.ports[prep.outputs[k]].depth;
    auto try_mask = [&](std::uint32_t s) {
      if (index[s] < 0 || (s & (s - 1)) == 0 || depth_of(weight[s]) != want) return;
      for (std::size_t c = 0; c < prep.candidates[k].size(); ++c) {
        coord_t v = node[index[s] * g + locate(prep.candidates[k][c])];
        if (v >= kInf) continue;
        current[k] = {s, static_cast<int>(c)};
        assign(k + 1, rest ^ s, acc + v);
      }
    };
    if (k == no - 1)
      try_mask(rest);
    else
      for (std::uint32_t s = rest; s; s = (s - 1) & rest) try_mask(s);
  };
  assign(0, full, 0);
  if (best >= kInf) return R::fail(Status::no_connection, "no feasible tile branching");

  BranchingResult res;
  std::function<int(std::uint32_t, int, int)> build_node;
  auto build_up = [&](std::uint32_t s, int q, int parent_depth) {
    int idx = index[s];
    while (step[idx * g + q] != 0) {
      int i = q / ny, j = q % ny;
      q = step[idx * g + q] == 1 ? cell(i + 1, j) : cell(i, j + 1);
    }
    return build_node(s, q, parent_depth + 1);
  };
  build_node = [&](std::uint32_t s, int q, int depth) -> int {
    int id = static_cast<int>(res.nodes.size());
    Point at{xs[q / ny], ys[q % ny]};
    if ((s & (s - 1)) == 0) {
      const auto& l = leaves[__builtin_ctz(s)];
      res.nodes.push_back({l.kind, l.ref, at, l.depth, -1});
      return id;
    }
    res.nodes.push_back({BranchNode::steiner, -1, at, depth, -1});
    std::uint32_t a = split[index[s] * g + q];
    int c1 = build_up(a, q, depth);
    int c2 = build_up(s ^ a, q, depth);
    res.nodes[c1].parent = id;
    res.nodes[c2].parent = id;
    return id;
  };
  for (int k = 0; k < no; ++k) {
    auto [s, c] = choice[k];
    res.roots.push_back(build_node(s, locate(prep.candidates[k][c]), prob.ports[prep.outputs[k]].depth));
  }
  detail::finish(prob, res);
  return {Status::ok, std::move(res), {}};
}

// Exact tile branching by sweeping depth levels from the deepest upward. The
// state is the multiset of positions of the subtrees still open at the current
// depth; every Steiner node sits at the componentwise minimum of its children
// unless it is an output root pinned to a port. Cost grows with the number of
// simultaneously open subtrees, not with the number of leaves, so long
// cascades are cheap.
inline Result<BranchingResult> solve_tile_levels(const TileProblem& prob) {
  using R = Result<BranchingResult>;
  auto prep = detail::prepare(prob);
  const auto& leaves = prep.leaves;
  if (leaves.empty()) throw Error("tile without leaves");

  std::map<int, std::vector<int>> leaf_at;   // depth -> leaf indices
  std::map<int, std::vector<int>> out_at;    // depth -> output slots
  for (std::size_t i = 0; i < leaves.size(); ++i) leaf_at[leaves[i].depth].push_back(static_cast<int>(i));
  for (std::size_t k = 0; k < prep.outputs.size(); ++k)
    out_at[prob.ports[prep.outputs[k]].depth].push_back(static_cast<int>(k));
  if (out_at.empty()) return R::fail(Status::no_connection, "tile without outputs");
  const int dmax = leaf_at.rbegin()->first;
  const int dmin = out_at.begin()->first;
  if (leaf_at.begin()->first <= dmin || out_at.rbegin()->first >= dmax)
    return R::fail(Status::no_connection, "depths out of range");

  auto sorted_positions = [&](const std::vector<int>& ids) {
    std::vector<Point> v;
    for (int i : ids) v.push_back(leaves[i].pos);
    std::sort(v.begin(), v.end());
    return v;
  };

  struct Choice {
    std::vector<std::pair<std::uint8_t, std::uint8_t>> pairs;
    std::vector<std::int8_t> out_pair, out_cand;
  };
  struct State {
    std::vector<Point> key;
    coord_t cost;
    int prev;
    Choice choice;
  };
  std::vector<std::vector<State>> levels;
  {
    auto it = leaf_at.find(dmax);
    levels.push_back({State{sorted_positions(it->second), 0, -1, {}}});
  }

  std::vector<std::pair<std::uint8_t, std::uint8_t>> pairs;
  for (int d = dmax; d > dmin; --d) {
    const auto& cur = levels.back();
    std::vector<State> next;
    std::map<std::vector<Point>, int> where;
    std::vector<Point> incoming;
    if (auto it = leaf_at.find(d - 1); it != leaf_at.end()) incoming = sorted_positions(it->second);
    std::vector<int> outs;
    if (auto it = out_at.find(d - 1); it != out_at.end()) outs = it->second;

    for (int si = 0; si < static_cast<int>(cur.size()); ++si) {
      const auto& st = cur[si];
      const int m = static_cast<int>(st.key.size());
      if (m % 2 || m / 2 < static_cast<int>(outs.size())) continue;
      std::vector<char> used(m, 0);

      auto emit = [&]() {
        const int np = static_cast<int>(pairs.size());
        std::vector<int> perm(outs.size());
        std::vector<char> taken(np, 0);
        std::vector<std::int8_t> cand(outs.size(), 0);
        std::function<void(std::size_t, coord_t)> place = [&](std::size_t k, coord_t acc) {
          if (k == outs.size()) {
            std::vector<Point> key = incoming;
            coord_t cost = acc;
            for (int p = 0; p < np; ++p) {
              if (taken[p]) continue;
              Point a = st.key[pairs[p].first], b = st.key[pairs[p].second];
              Point s = pmin(a, b);
              cost += l1(a, s) + l1(b, s);
              key.push_back(s);
            }
            std::sort(key.begin(), key.end());
            auto [it, fresh] = where.try_emplace(key, static_cast<int>(next.size()));
            if (fresh || cost < next[it->second].cost) {
              Choice ch{pairs, {}, cand};
              for (int x : perm) ch.out_pair.push_back(static_cast<std::int8_t>(x));
              if (fresh)
                next.push_back({std::move(key), cost, si, std::move(ch)});
              else
                next[it->second] = {std::move(key), cost, si, std::move(ch)};
            }
            return;
          }
          const auto& cands = prep.candidates[outs[k]];
          for (int p = 0; p < np; ++p) {
            if (taken[p]) continue;
            Point a = st.key[pairs[p].first], b = st.key[pairs[p].second];
            coord_t bestc = detail::kInf;
            int bi = -1;
            for (std::size_t c = 0; c < cands.size(); ++c) {
              if (!dominated(cands[c], a) || !dominated(cands[c], b)) continue;
              coord_t v = l1(a, cands[c]) + l1(b, cands[c]);
              if (v < bestc) bestc = v, bi = static_cast<int>(c);
            }
            if (bi < 0) continue;
            taken[p] = 1;
            perm[k] = p;
            cand[k] = static_cast<std::int8_t>(bi);
            place(k + 1, acc + bestc);
            taken[p] = 0;
          }
        };
        place(0, st.cost);
      };

      // perfect matchings; equal partners are tried once
      std::function<void()> match = [&]() {
        int a = 0;
        while (a < m && used[a]) ++a;
        if (a == m) {
          emit();
          return;
        }
        used[a] = 1;
        for (int b = a + 1; b < m; ++b) {
          if (used[b]) continue;
          bool dup = false;
          for (int c = a + 1; c < b; ++c)
            if (!used[c] && st.key[c] == st.key[b]) dup = true;
          if (dup) continue;
          used[b] = 1;
          pairs.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
          match();
          pairs.pop_back();
          used[b] = 0;
        }
        used[a] = 0;
      };
      match();
    }
    if (next.empty()) return R::fail(Status::no_connection, "no feasible tile branching");
    levels.push_back(std::move(next));
  }

  int fin = -1;
  for (int i = 0; i < static_cast<int>(levels.back().size()); ++i)
    if (levels.back()[i].key.empty()) fin = i;
  if (fin < 0) return R::fail(Status::no_connection, "no feasible tile branching");

  // replay the chosen transitions from the deepest level
  std::vector<int> path(levels.size());
  path.back() = fin;
  for (int l = static_cast<int>(levels.size()) - 1; l > 0; --l) path[l - 1] = levels[l][path[l]].prev;

  BranchingResult res;
  res.roots.assign(prep.outputs.size(), -1);
  auto add_leaves = [&](int d, std::vector<int>& active) {
    if (auto it = leaf_at.find(d); it != leaf_at.end())
      for (int i : it->second) {
        active.push_back(static_cast<int>(res.nodes.size()));
        res.nodes.push_back({leaves[i].kind, leaves[i].ref, leaves[i].pos, d, -1});
      }
    std::stable_sort(active.begin(), active.end(),
                     [&](int a, int b) { return res.nodes[a].pos < res.nodes[b].pos; });
  };
  std::vector<int> active;
  add_leaves(dmax, active);
  for (std::size_t l = 1; l < levels.size(); ++l) {
    const int d = dmax - static_cast<int>(l);
    const auto& ch = levels[l][path[l]].choice;
    const auto& outs = out_at.count(d) ? out_at[d] : std::vector<int>{};
    std::vector<int> pair_out(ch.pairs.size(), -1);
    for (std::size_t k = 0; k < ch.out_pair.size(); ++k) pair_out[ch.out_pair[k]] = static_cast<int>(k);
    std::vector<int> next;
    for (std::size_t p = 0; p < ch.pairs.size(); ++p) {
      int a = active[ch.pairs[p].first], b = active[ch.pairs[p].second];
      int id = static_cast<int>(res.nodes.size());
      Point at;
      if (pair_out[p] >= 0) {
        int k = outs[pair_out[p]];
        at = prep.candidates[k][ch.out_cand[pair_out[p]]];
        res.roots[k] = id;
      } else {
        at = pmin(res.nodes[a].pos, res.nodes[b].pos);
        next.push_back(id);
      }
      res.nodes.push_back({BranchNode::steiner, -1, at, d, -1});
      res.nodes[a].parent = id;
      res.nodes[b].parent = id;
    }
    active = std::move(next);
    add_leaves(d, active);
  }
  detail::finish(prob, res);
  return {Status::ok, std::move(res), {}};
}

}  // namespace drsa
