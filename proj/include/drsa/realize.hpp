#pragma once

#include <json.hpp>
#include <map>
#include <mutex>
#include <sstream>

#include "reduction.hpp"

namespace drsa {

// Optimal tile branchings memoized under a key that ignores a uniform depth
// shift. Safe to share between threads.
class TileCache {
 public:
  Result<BranchingResult> solve(const TileSpec& spec, const std::vector<int>& parity) {
    std::string key = make_key(spec, parity);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto r = solve_tile_levels(to_problem(spec, parity));
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(key, r);
    return r;
  }
  std::size_t size() const { return memo_.size(); }

 private:
  static std::string make_key(const TileSpec& t, const std::vector<int>& parity) {
    std::ostringstream s;
    int base = t.ports.empty() ? 0 : t.ports.front().depth;
    s << static_cast<int>(t.kind) << '/' << static_cast<int>(t.role) << '/' << t.alpha << '/'
      << t.terminals.size() << '/';
    for (auto& p : t.ports) s << static_cast<int>(p.side) << p.input << ':' << p.depth - base << ',';
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the terminal layout
    auto mix = [&](std::int64_t v) {
      for (int b = 0; b < 8; ++b) h = (h ^ ((v >> (8 * b)) & 0xff)) * 1099511628211ull;
    };
    for (auto& x : t.terminals) mix(x.pos.x), mix(x.pos.y), mix(x.depth - base);
    s << h << '/';
    for (int p : parity) s << p;
    return s.str();
  }

  std::mutex mu_;
  std::map<std::string, Result<BranchingResult>> memo_;
};

struct Realization {
  std::uint64_t assignment = 0;
  EmbeddedSolution solution;
  int u = 0;  // unsatisfied clauses
  coord_t length = 0;
  std::vector<coord_t> tile_length;  // per cell, 0 for empty cells
};

inline int unsatisfied(const Max2SatInstance& sat, std::uint64_t a) {
  return sat.m() - satisfied_count(sat, a);
}

// Fixes the variable tiles by the assignment, carries parities along every
// wire and stitches the optimal tile branchings into one solution.
inline Realization build_realization(const TileGrid& g, const Instance& inst, std::uint64_t assignment,
                                     TileCache& cache) {
  const int N = g.side;
  Realization real;
  real.assignment = assignment;
  real.u = unsatisfied(g.sat, assignment);

  auto& topo = real.solution.topo;
  auto& place = real.solution.place;
  for (std::size_t i = 0; i < inst.terminals.size(); ++i) {
    topo.add_leaf(static_cast<int>(i));
    place.push_back(inst.terminals[i].pos);
  }
  std::vector<std::array<int, 2>> in_par(g.cells.size(), {-1, -1});
  std::vector<std::array<int, 2>> in_node(g.cells.size(), {-1, -1});
  coord_t total = 0;
  real.tile_length.assign(g.cells.size(), 0);

  for (int r = N - 1; r >= 0; --r)
    for (int col = N - 1; col >= 0; --col) {
      const int idx = g.index(col, r);
      const auto& c = g.cells[idx];
      if (!c.used) continue;
      const auto& spec = c.spec;
      std::vector<int> par(spec.ports.size(), -1);
      for (std::size_t i = 0; i < spec.ports.size(); ++i) {
        const auto& p = spec.ports[i];
        if (p.input) {
          par[i] = in_par[idx][p.side == Side::right ? 0 : 1];
          continue;
        }
        if (c.role == FillerRole::root) continue;
        const int o = p.side == Side::left ? 0 : 1;
        switch (c.kind) {
          case GadgetKind::variable: {
            bool v = literal_true(c.variable, assignment);
            par[i] = (o == 0) == v ? 1 : 0;
            break;
          }
          case GadgetKind::connection_h: par[i] = in_par[idx][0]; break;
          case GadgetKind::connection_v: par[i] = in_par[idx][1]; break;
          case GadgetKind::crossing: par[i] = in_par[idx][o]; break;
          case GadgetKind::splitter_h: par[i] = in_par[idx][0]; break;
          case GadgetKind::splitter_v: par[i] = in_par[idx][1]; break;
          default: break;
        }
      }
      auto res = cache.solve(spec, par);
      if (!res)
        throw Error("wiring bug: no branching for " + std::string(to_string(c.kind)) + " at (" +
                    std::to_string(col) + "," + std::to_string(r) + ")");
      const auto& br = res.value;
      total += br.length;
      real.tile_length[idx] = br.length;

      const Point origin = g.origin(col, r);
      std::vector<int> global(br.nodes.size(), -1);
      for (std::size_t v = 0; v < br.nodes.size(); ++v) {
        const auto& n = br.nodes[v];
        switch (n.kind) {
          case BranchNode::terminal:
            global[v] = static_cast<int>(c.first_terminal) + n.ref;
            break;
          case BranchNode::input:
            global[v] = in_node[idx][spec.ports[n.ref].side == Side::right ? 0 : 1];
            if (global[v] < 0) throw Error("wiring bug: dangling input");
            break;
          case BranchNode::steiner:
            global[v] = static_cast<int>(topo.nodes.size());
            topo.nodes.push_back({});
            place.push_back(n.pos + origin);
            break;
        }
      }
      for (std::size_t v = 0; v < br.nodes.size(); ++v) {
        if (br.nodes[v].parent < 0) continue;
        int child = global[v], parent = global[br.nodes[v].parent];
        topo.nodes[child].parent = parent;
        topo.nodes[parent].children.push_back(child);
      }
      auto outs = spec.outputs();
      for (std::size_t k = 0; k < outs.size(); ++k) {
        const int node = global[br.roots[k]];
        if (c.role == FillerRole::root) {
          topo.top = node;
          continue;
        }
        const auto& p = spec.ports[outs[k]];
        const int parity = br.port_parity[outs[k]];
        const int o = p.side == Side::left ? 0 : 1;
        const int lit = c.out_literal[o];
        if (lit != 0 && parity != (literal_true(lit, assignment) ? 1 : 0))
          throw Error("wiring bug: literal wire lost its parity");
        const int to = o == 0 ? g.index(col - 1, r) : g.index(col, r - 1);
        const int slot = o == 0 ? 0 : 1;
        in_par[to][slot] = parity;
        in_node[to][slot] = node;
      }
    }
  real.solution.length = tree_length(topo, place);
  if (real.solution.length != total) throw Error("wiring bug: tile lengths do not add up");
  real.length = real.solution.length;
  return real;
}

// Sum over used cells of the cheapest branching over all input parities,
// outputs left free.
inline std::vector<coord_t> tile_minima(const TileGrid& g, TileCache& cache) {
  std::vector<coord_t> out(g.cells.size(), 0);
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    const auto& c = g.cells[i];
    if (!c.used) continue;
    auto ins = c.spec.inputs();
    coord_t best = detail::kInf;
    for (int mask = 0; mask < (1 << ins.size()); ++mask) {
      std::vector<int> par(c.spec.ports.size(), -1);
      for (std::size_t k = 0; k < ins.size(); ++k) par[ins[k]] = (mask >> k) & 1;
      auto r = cache.solve(c.spec, par);
      if (r) best = std::min(best, r.value.length);
    }
    if (best == detail::kInf) throw Error("wiring bug: tile without any branching");
    out[i] = best;
  }
  return out;
}

inline coord_t tile_minimum_sum(const TileGrid& g, TileCache& cache) {
  coord_t L = 0;
  for (coord_t x : tile_minima(g, cache)) L += x;
  return L;
}

struct Band {
  coord_t lo = 0, hi = 0;
  bool contains(coord_t x) const { return lo <= x && x <= hi; }
};

inline coord_t band_slack(int n, int m) {
  const coord_t nm = static_cast<coord_t>(n) * m;
  return 10 * nm * nm;
}

inline Band length_band(int u, coord_t L, const Parameters& p, int n, int m) {
  const coord_t lo = L + static_cast<coord_t>(u) * p.beta;
  return {lo, lo + band_slack(n, m)};
}

// ---- grid sidecar ----------------------------------------------------------

inline nlohmann::json grid_to_json(const TileGrid& g) {
  using nlohmann::json;
  json j;
  j["format"] = "drsa-grid";
  j["version"] = 1;
  j["formula"] = {{"n", g.sat.n}, {"clauses", g.sat.clauses}};
  j["params"] = {{"alpha", g.params.alpha},         {"beta", g.params.beta},
                 {"gamma_lo", g.params.gamma_lo},   {"gamma_hi", g.params.gamma_hi},
                 {"base_depth", g.params.base_depth}, {"grid_side", g.side}};
  j["doubles"] = g.doubles;
  json cells = json::array();
  for (auto& c : g.cells) {
    if (!c.used) continue;
    json e = {{"col", c.col}, {"row", c.row}, {"kind", to_string(c.kind)}};
    if (c.role != FillerRole::none) e["role"] = to_string(c.role);
    if (c.kind == GadgetKind::splitter_h || c.kind == GadgetKind::splitter_v) e["gamma"] = c.gamma;
    if (c.kind == GadgetKind::variable) e["variable"] = c.variable;
    if (c.kind == GadgetKind::clause) e["clause"] = c.clause;
    json ports = json::array();
    for (auto& p : c.spec.ports) {
      const char* side = p.side == Side::left ? "left" : p.side == Side::bottom ? "bottom"
                         : p.side == Side::right ? "right" : "top";
      ports.push_back({{"dir", p.input ? "in" : "out"}, {"side", side}, {"depth", p.depth}});
    }
    e["ports"] = ports;
    e["terminals"] = c.spec.terminals.size();
    e["first_terminal"] = c.first_terminal;
    cells.push_back(e);
  }
  j["cells"] = cells;
  json wires = json::array();
  for (auto& w : g.wires)
    wires.push_back({{"from", {g.cells[w.from].col, g.cells[w.from].row}},
                     {"to", {g.cells[w.to].col, g.cells[w.to].row}},
                     {"dir", w.side == Side::left ? "left" : "down"},
                     {"depth", w.depth},
                     {"literal", w.literal}});
  j["wires"] = wires;
  return j;
}

// Rebuilds a grid from its sidecar. The layout and tiles are recomputed from
// the formula and parameters, then checked against the recorded cells.
inline Compiled grid_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "drsa-grid" || j.value("version", 0) != 1)
    throw Error("unsupported grid file");
  Max2SatInstance sat;
  sat.n = j.at("formula").at("n").get<int>();
  sat.clauses = j.at("formula").at("clauses").get<std::vector<std::array<int, 2>>>();
  const auto& pj = j.at("params");
  Parameters p = default_parameters(sat.n, sat.m());
  p.alpha = pj.at("alpha").get<coord_t>();
  p.beta = pj.at("beta").get<int>();
  p.gamma_lo = pj.at("gamma_lo").get<int>();
  p.gamma_hi = pj.at("gamma_hi").get<int>();
  auto c = compile_reduction(sat, p);
  if (c.grid.params.base_depth != pj.at("base_depth").get<int>()) throw Error("grid file is inconsistent");
  std::size_t k = 0;
  for (auto& cell : c.grid.cells) {
    if (!cell.used) continue;
    if (k >= j.at("cells").size()) throw Error("grid file is inconsistent");
    const auto& e = j.at("cells")[k++];
    if (e.at("col") != cell.col || e.at("row") != cell.row || e.at("kind") != to_string(cell.kind) ||
        e.value("gamma", cell.gamma) != cell.gamma)
      throw Error("grid file is inconsistent");
  }
  if (k != j.at("cells").size()) throw Error("grid file is inconsistent");
  return c;
}

}  // namespace drsa
