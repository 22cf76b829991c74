#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "feasibility.hpp"
#include "gadgets.hpp"
#include "sat.hpp"

namespace drsa {

// Smallest alpha accepted by the compiler; see find_alpha_min().
constexpr coord_t kAlphaMin = 4;

struct Parameters {
  coord_t alpha = 0;
  int beta = 0;
  int gamma_lo = 0;  // inclusive bounds for every splitter cascade
  int gamma_hi = 0;
  int base_depth = 0;  // depth of the four central variable terminals
  int grid_side = 0;
};

inline Parameters default_parameters(int n, int m) {
  if (n < 1 || m < 1) throw Error("need n >= 1 and m >= 1");
  const std::int64_t nm = static_cast<std::int64_t>(n) * m;
  Parameters p;
  p.alpha = nm * nm * nm * nm;
  p.beta = static_cast<int>(20 * nm * nm);
  p.gamma_lo = static_cast<int>(nm * nm * nm + 1);
  p.gamma_hi = static_cast<int>(4 * nm * nm * nm - 1);
  p.base_depth = static_cast<int>(4 * nm * nm * nm);
  p.grid_side = 1 + m + 2 * n;
  return p;
}

struct GridCell {
  int col = 0, row = 0;
  bool used = false;
  GadgetKind kind = GadgetKind::connection_h;
  FillerRole role = FillerRole::none;
  int gamma = 0;              // splitters only
  int variable = 0;           // variable tiles: j
  int clause = 0;             // clause tiles: i
  std::array<int, 2> in_depth{0, 0};   // from the right, from above
  std::array<int, 2> out_depth{0, 0};  // to the left, downward
  std::array<bool, 2> has_in{false, false};
  std::array<bool, 2> has_out{false, false};
  std::array<int, 2> out_literal{0, 0};
  TileSpec spec;
  std::size_t first_terminal = 0;
};

struct Wire {
  int from = 0, to = 0;   // cell indices
  Side side = Side::left;  // direction of travel: left or down (bottom)
  int depth = 0;
  int literal = 0;  // 0 for wires that carry no literal
};

struct TileGrid {
  Max2SatInstance sat;
  Parameters params;
  int side = 0;
  std::vector<GridCell> cells;  // row-major from (0,0)
  std::vector<Wire> wires;
  int doubles = 0;

  int index(int col, int row) const { return row * side + col; }
  GridCell& at(int col, int row) { return cells[index(col, row)]; }
  const GridCell& at(int col, int row) const { return cells[index(col, row)]; }
  coord_t tile() const { return tile_side(params.alpha); }
  Point origin(int col, int row) const {
    return {col * tile() - 2 * params.alpha, row * tile() - 2 * params.alpha};
  }
  std::vector<int> gammas() const {
    std::vector<int> g;
    for (auto& c : cells)
      if (c.used && (c.kind == GadgetKind::splitter_h || c.kind == GadgetKind::splitter_v))
        g.push_back(c.gamma);
    return g;
  }
  std::map<std::string, int> census() const {
    std::map<std::string, int> m;
    for (auto& c : cells)
      if (c.used) ++m[c.kind == GadgetKind::root_filler ? to_string(c.role) : to_string(c.kind)];
    return m;
  }
};

namespace detail {

// Which inputs (right, top) and outputs (left, bottom) a cell kind uses.
inline std::array<bool, 4> port_usage(const GridCell& c) {
  switch (c.kind) {
    case GadgetKind::variable: return {false, false, true, true};
    case GadgetKind::connection_h: return {true, false, true, false};
    case GadgetKind::connection_v: return {false, true, false, true};
    case GadgetKind::crossing: return {true, true, true, true};
    case GadgetKind::clause: return {true, true, false, true};
    case GadgetKind::splitter_h: return {true, false, true, true};
    case GadgetKind::splitter_v: return {false, true, true, true};
    case GadgetKind::root_filler:
      switch (c.role) {
        case FillerRole::merge_down: return {true, true, false, true};
        case FillerRole::merge_left: return {true, true, true, false};
        case FillerRole::corner_down: return {true, false, false, true};
        case FillerRole::corner_left: return {false, true, true, false};
        case FillerRole::root: return {true, true, false, false};
        case FillerRole::none: break;
      }
  }
  throw Error("cell without a role");
}

struct Planner {
  const Max2SatInstance& sat;
  TileGrid& g;
  int m, n, N;

  int H(int lit) const { return lit > 0 ? m + 2 * lit : m + 2 * (-lit) - 1; }
  int V(int lit) const { return lit > 0 ? m + 2 * lit - 1 : m + 2 * (-lit); }

  void set(int c, int r, GadgetKind k, FillerRole role = FillerRole::none) {
    auto& cell = g.at(c, r);
    if (cell.used) throw Error("layout conflict at cell (" + std::to_string(c) + "," + std::to_string(r) + ")");
    cell.used = true;
    cell.kind = k;
    cell.role = role;
  }

  void run() {
    std::map<int, std::vector<int>> above, right;
    for (int i = 1; i <= m; ++i) {
      above[sat.clauses[i - 1][0]].push_back(i);
      right[sat.clauses[i - 1][1]].push_back(i);
    }
    // horizontal and vertical occupancy of interior cells
    std::vector<char> hpass(N * N, 0), vpass(N * N, 0);
    std::map<std::pair<int, int>, GadgetKind> special;
    auto hrun = [&](int row, int from, int to) {
      for (int c = from; c >= to; --c) hpass[g.index(c, row)] = 1;
    };
    auto vrun = [&](int col, int from, int to) {
      for (int r = from; r >= to; --r) vpass[g.index(col, r)] = 1;
    };

    for (int j = 1; j <= n; ++j) {
      const int vx = m + 2 * j;
      special[{vx, vx}] = GadgetKind::variable;
      g.at(vx, vx).variable = j;
      hrun(vx, vx - 1, 1);
      vrun(vx, vx - 1, 1);
      if (!right[j].empty()) {
        special[{vx - 1, vx}] = GadgetKind::splitter_h;
        vrun(vx - 1, vx - 1, 1);
      }
      if (!above[-j].empty()) {
        special[{vx, vx - 1}] = GadgetKind::splitter_v;
        hrun(vx - 1, vx - 1, 1);
      }
    }
    for (int i = 1; i <= m; ++i) {
      const int a = sat.clauses[i - 1][0], b = sat.clauses[i - 1][1];
      special[{i, i}] = GadgetKind::clause;
      g.at(i, i).clause = i;
      special[{i, H(a)}] = GadgetKind::splitter_h;
      special[{V(b), i}] = GadgetKind::splitter_v;
      vrun(i, H(a) - 1, i + 1);
      hrun(i, V(b) - 1, i + 1);
      vrun(i, i - 1, 1);
    }

    for (int r = 1; r < N; ++r)
      for (int c = 1; c < N; ++c) {
        const int idx = g.index(c, r);
        auto it = special.find({c, r});
        if (it != special.end()) {
          bool clash = (it->second == GadgetKind::splitter_h && vpass[idx]) ||
                       (it->second == GadgetKind::splitter_v && hpass[idx]) ||
                       ((it->second == GadgetKind::variable || it->second == GadgetKind::clause) &&
                        (hpass[idx] || vpass[idx]));
          if (clash) throw Error("layout conflict at cell (" + std::to_string(c) + "," + std::to_string(r) + ")");
          set(c, r, it->second);
        } else if (hpass[idx] && vpass[idx]) {
          set(c, r, GadgetKind::crossing);
        } else if (hpass[idx]) {
          set(c, r, GadgetKind::connection_h);
        } else if (vpass[idx]) {
          set(c, r, GadgetKind::connection_v);
        }
      }

    // row 0 collects everything that runs down a column, column 0 everything
    // that runs left along a row
    for (int c = N - 1; c >= 1; --c) {
      const auto& above_cell = g.at(c, 1);
      bool enters = above_cell.used && port_usage(above_cell)[3];
      if (c == N - 1) {
        if (!enters) throw Error("layout: rightmost column carries no wire");
        set(c, 0, GadgetKind::root_filler, FillerRole::corner_left);
      } else if (enters) {
        set(c, 0, GadgetKind::root_filler, FillerRole::merge_left);
      } else {
        set(c, 0, GadgetKind::connection_h);
      }
    }
    for (int r = N - 1; r >= 1; --r) {
      const auto& right_cell = g.at(1, r);
      bool enters = right_cell.used && port_usage(right_cell)[2];
      if (r == N - 1) {
        if (!enters) throw Error("layout: top row carries no wire");
        set(0, r, GadgetKind::root_filler, FillerRole::corner_down);
      } else if (enters) {
        set(0, r, GadgetKind::root_filler, FillerRole::merge_down);
      } else {
        set(0, r, GadgetKind::connection_v);
      }
    }
    set(0, 0, GadgetKind::root_filler, FillerRole::root);
  }
};

// Depths follow the data flow: inputs arrive from the right and from above,
// so cells are visited top row first, right to left.
struct Propagation {
  TileGrid& g;
  std::vector<char> decided;  // per cell, for splitters
  std::vector<std::array<char, 2>> taint_in, taint_out;
  std::vector<std::string> problems;

  explicit Propagation(TileGrid& grid)
      : g(grid), decided(grid.cells.size(), 0), taint_in(grid.cells.size()), taint_out(grid.cells.size()) {}

  void run() {
    problems.clear();
    const int N = g.side;
    const int K = g.params.base_depth;
    const int beta = g.params.beta;
    for (auto& c : g.cells) {
      c.has_in = {false, false};
      c.has_out = {false, false};
    }
    for (auto& t : taint_in) t = {0, 0};
    for (auto& t : taint_out) t = {0, 0};
    for (int r = N - 1; r >= 0; --r)
      for (int col = N - 1; col >= 0; --col) {
        const int idx = g.index(col, r);
        auto& c = g.cells[idx];
        if (!c.used) continue;
        auto use = port_usage(c);
        for (int s = 0; s < 2; ++s)
          if (use[s] && !c.has_in[s])
            problems.push_back("cell (" + std::to_string(col) + "," + std::to_string(r) + ") lacks an input");
        const int kr = c.in_depth[0], kt = c.in_depth[1];
        const bool tr = taint_in[idx][0], tt = taint_in[idx][1];
        std::array<int, 2> out{0, 0};
        std::array<char, 2> taint{0, 0};
        const bool undecided = !decided[idx];
        switch (c.kind) {
          case GadgetKind::variable:
            out = {K - 4, K - 4};
            break;
          case GadgetKind::connection_h:
            out[0] = kr - 6, taint[0] = tr;
            break;
          case GadgetKind::connection_v:
            out[1] = kt - 6, taint[1] = tt;
            break;
          case GadgetKind::crossing:
            out = {kr - 6, kt - 6}, taint = {tr, tt};
            break;
          case GadgetKind::splitter_h:
            out = {kr - 5, kr - c.gamma - 5}, taint = {tr, static_cast<char>(tr || undecided)};
            break;
          case GadgetKind::splitter_v:
            out = {kt - c.gamma - 5, kt - 5}, taint = {static_cast<char>(tt || undecided), tt};
            break;
          case GadgetKind::clause:
            if (kr != kt && !tr && !tt)
              problems.push_back("clause " + std::to_string(c.clause) + " inputs differ in depth");
            out[1] = std::min(kr, kt) - beta - 6, taint[1] = tr || tt;
            break;
          case GadgetKind::root_filler:
            switch (c.role) {
              case FillerRole::merge_down: out[1] = std::min(kr, kt) - 7; break;
              case FillerRole::merge_left: out[0] = std::min(kr, kt) - 7; break;
              case FillerRole::corner_down: out[1] = kr - 6; break;
              case FillerRole::corner_left: out[0] = kt - 6; break;
              default: break;
            }
            taint = {static_cast<char>(tr || tt), static_cast<char>(tr || tt)};
            break;
        }
        c.out_depth = out;
        taint_out[idx] = taint;
        // hand outputs to the neighbours
        if (use[2]) {
          c.has_out[0] = true;
          if (col == 0) {
            problems.push_back("output leaves the grid");
          } else {
            auto& nb = g.at(col - 1, r);
            nb.in_depth[0] = out[0];
            nb.has_in[0] = true;
            taint_in[g.index(col - 1, r)][0] = taint[0];
          }
        }
        if (use[3]) {
          c.has_out[1] = true;
          if (r == 0) {
            problems.push_back("output leaves the grid");
          } else {
            auto& nb = g.at(col, r - 1);
            nb.in_depth[1] = out[1];
            nb.has_in[1] = true;
            taint_in[g.index(col, r - 1)][1] = taint[1];
          }
        }
      }
  }

  // Crossings whose passes are both settled must keep disjoint depth ranges.
  std::optional<std::string> crossing_conflict() const {
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
      const auto& c = g.cells[i];
      if (!c.used || c.kind != GadgetKind::crossing || taint_in[i][0] || taint_in[i][1]) continue;
      if (std::abs(c.in_depth[0] - c.in_depth[1]) < 7)
        return "crossing (" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
    }
    return std::nullopt;
  }
};

inline TileSpec instantiate(const GridCell& c, const Parameters& p) {
  const coord_t a = p.alpha;
  const int kr = c.in_depth[0], kt = c.in_depth[1];
  switch (c.kind) {
    case GadgetKind::variable: return variable_tile(a, p.base_depth);
    case GadgetKind::connection_h: return connection_h_tile(a, kr);
    case GadgetKind::connection_v: return connection_v_tile(a, kt);
    case GadgetKind::crossing: return crossing_tile(a, kr, kt);
    case GadgetKind::clause: return clause_tile(a, kr, p.beta);
    case GadgetKind::splitter_h: return splitter_h_tile(a, kr, c.gamma);
    case GadgetKind::splitter_v: return splitter_v_tile(a, kt, c.gamma);
    case GadgetKind::root_filler:
      switch (c.role) {
        case FillerRole::merge_down: return merge_down_tile(a, kt, kr);
        case FillerRole::merge_left: return merge_left_tile(a, kr, kt);
        case FillerRole::corner_down: return corner_down_tile(a, kr);
        case FillerRole::corner_left: return corner_left_tile(a, kt);
        case FillerRole::root: return root_tile(a, kt, kr);
        case FillerRole::none: break;
      }
  }
  throw Error("cannot instantiate cell");
}

// Port index within a TileSpec for a given side and direction.
inline int port_on(const TileSpec& t, Side s, bool input) {
  for (std::size_t i = 0; i < t.ports.size(); ++i)
    if (t.ports[i].side == s && t.ports[i].input == input && !(t.role == FillerRole::root && !input))
      return static_cast<int>(i);
  return -1;
}

inline void finalize(TileGrid& g) {
  const auto& p = g.params;
  g.doubles = 0;
  g.wires.clear();
  for (auto& c : g.cells) {
    if (!c.used) continue;
    c.spec = instantiate(c, p);
    g.doubles += c.spec.doubles;
    // the formulas used by the depth solver must agree with the tiles
    auto check = [&](Side s, bool input, int want) {
      int i = port_on(c.spec, s, input);
      if (i < 0 || c.spec.ports[i].depth != want)
        throw Error("depth mismatch in " + std::string(to_string(c.kind)) + " at (" +
                    std::to_string(c.col) + "," + std::to_string(c.row) + ")");
    };
    auto use = port_usage(c);
    if (use[0]) check(Side::right, true, c.in_depth[0]);
    if (use[1]) check(Side::top, true, c.in_depth[1]);
    if (use[2]) check(Side::left, false, c.out_depth[0]);
    if (use[3]) check(Side::bottom, false, c.out_depth[1]);
    for (auto& t : c.spec.terminals)
      if (t.depth < 1) throw Error("depth-solve failed: nonpositive terminal depth");
  }
  for (auto& c : g.cells) {
    if (!c.used) continue;
    auto use = port_usage(c);
    if (use[2]) g.wires.push_back({g.index(c.col, c.row), g.index(c.col - 1, c.row), Side::left, c.out_depth[0], 0});
    if (use[3]) g.wires.push_back({g.index(c.col, c.row), g.index(c.col, c.row - 1), Side::bottom, c.out_depth[1], 0});
  }
}

// Literal carried by each output; splitters, connections and crossings pass
// their input literal on.
inline void assign_literals(TileGrid& g) {
  const int N = g.side;
  std::vector<std::array<int, 2>> in_lit(g.cells.size(), {0, 0});
  for (int r = N - 1; r >= 0; --r)
    for (int col = N - 1; col >= 0; --col) {
      const int idx = g.index(col, r);
      auto& c = g.cells[idx];
      if (!c.used) continue;
      std::array<int, 2> out{0, 0};
      switch (c.kind) {
        case GadgetKind::variable: out = {c.variable, -c.variable}; break;
        case GadgetKind::connection_h: out[0] = in_lit[idx][0]; break;
        case GadgetKind::connection_v: out[1] = in_lit[idx][1]; break;
        case GadgetKind::crossing: out = in_lit[idx]; break;
        case GadgetKind::splitter_h: out = {in_lit[idx][0], in_lit[idx][0]}; break;
        case GadgetKind::splitter_v: out = {in_lit[idx][1], in_lit[idx][1]}; break;
        default: break;
      }
      c.out_literal = out;
      auto use = port_usage(c);
      if (use[2] && col > 0) in_lit[g.index(col - 1, r)][0] = out[0];
      if (use[3] && r > 0) in_lit[g.index(col, r - 1)][1] = out[1];
    }
  for (auto& w : g.wires) w.literal = g.cells[w.from].out_literal[w.side == Side::left ? 0 : 1];
}

// Every cascade starts at `base` and only grows from there.
inline void solve_depths_from(TileGrid& g, int base) {
  const auto& sat = g.sat;
  const int m = sat.m(), n = sat.n;
  Propagation prop(g);
  for (auto& c : g.cells) c.gamma = base;

  auto fail = [](const std::string& where) -> void { throw Error("depth-solve failed: " + where); };
  auto settle = [&](std::vector<int> cells, const std::function<void(int)>& setter, const std::string& what) {
    for (int i : cells) prop.decided[i] = 1;
    for (int t = 0;; ++t) {
      setter(t);
      for (int i : cells)
        if (g.cells[i].gamma > g.params.gamma_hi || g.cells[i].gamma < g.params.gamma_lo) fail(what);
      prop.run();
      if (!prop.crossing_conflict()) return;
    }
  };

  // lane splitters first: they feed the turns
  for (int j = 1; j <= n; ++j) {
    const int vx = m + 2 * j;
    for (auto [c, r] : {std::pair{vx - 1, vx}, std::pair{vx, vx - 1}}) {
      auto& cell = g.at(c, r);
      if (!cell.used || (cell.kind != GadgetKind::splitter_h && cell.kind != GadgetKind::splitter_v)) continue;
      const int idx = g.index(c, r);
      settle({idx}, [&](int t) { g.cells[idx].gamma = base + t; },
             "lane splitter of variable " + std::to_string(j));
    }
  }
  // each clause balances its two turn splitters
  for (int i = 1; i <= m; ++i) {
    const int a = sat.clauses[i - 1][0], b = sat.clauses[i - 1][1];
    const int H = a > 0 ? m + 2 * a : m + 2 * (-a) - 1;
    const int V = b > 0 ? m + 2 * b - 1 : m + 2 * (-b);
    const int st = g.index(i, H), sr = g.index(V, i);
    g.cells[st].gamma = g.cells[sr].gamma = base;
    prop.decided[st] = prop.decided[sr] = 1;
    prop.run();
    const int dt = g.at(i, i).in_depth[1], dr = g.at(i, i).in_depth[0];
    settle({st, sr},
           [&](int t) {
             const int target = std::min(dt, dr) - t;
             g.cells[st].gamma = base + (dt - target);
             g.cells[sr].gamma = base + (dr - target);
           },
           "clause " + std::to_string(i));
  }

  prop.run();
  if (!prop.problems.empty()) throw Error("depth-solve failed: " + prop.problems.front());
  if (auto c = prop.crossing_conflict()) fail(*c);

  // lift everything if some terminal would get a depth below 1; the root
  // needs both inputs at depth >= 4 for its cascade to reach depth 1
  auto lowest = [&]() {
    int low = std::numeric_limits<int>::max();
    for (auto& c : g.cells) {
      if (!c.used) continue;
      auto spec = instantiate(c, g.params);
      for (auto& t : spec.terminals) low = std::min(low, t.depth);
      if (c.role == FillerRole::root) low = std::min(low, std::min(c.in_depth[0], c.in_depth[1]) - 3);
    }
    return low;
  };
  const int low = lowest();
  if (low < 1) {
    g.params.base_depth += 1 - low;
    prop.run();
    if (lowest() < 1) fail("cannot lift depths");
  }
}

// Cascades are pushed as high into the window as the constraints allow: the
// length of a realization above 2k*alpha has to stay below min gamma.
inline void solve_depths(TileGrid& g) {
  const int K = g.params.base_depth;
  auto attempt = [&](int base) {
    g.params.base_depth = K;
    try {
      solve_depths_from(g, base);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  int lo = g.params.gamma_lo, hi = g.params.gamma_hi;
  if (!attempt(lo)) {
    g.params.base_depth = K;
    solve_depths_from(g, lo);  // rethrows with the failing wire
  }
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (attempt(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  if (!attempt(lo)) throw Error("depth-solve failed: unstable cascade search");
}

}  // namespace detail

// Lays out the tile grid, solves the depth constraints and fixes all tiles.
inline TileGrid build_grid(const Max2SatInstance& sat, const Parameters& params) {
  if (params.alpha < kAlphaMin) throw Error("alpha-too-small");
  if (sat.n < 1 || sat.m() < 1) throw Error("empty formula");
  for (auto& c : sat.clauses)
    for (int lit : c)
      if (lit == 0 || std::abs(lit) > sat.n) throw Error("literal out of range");
  if (params.beta < 1 || params.gamma_lo < 1 || params.gamma_hi < params.gamma_lo)
    throw Error("invalid parameters");
  TileGrid g;
  g.sat = sat;
  g.params = params;
  g.side = 1 + sat.m() + 2 * sat.n;
  g.params.grid_side = g.side;
  g.cells.resize(static_cast<std::size_t>(g.side) * g.side);
  for (int r = 0; r < g.side; ++r)
    for (int c = 0; c < g.side; ++c) g.at(c, r).col = c, g.at(c, r).row = r;
  detail::Planner{sat, g, sat.m(), sat.n, g.side}.run();
  detail::solve_depths(g);
  detail::finalize(g);
  detail::assign_literals(g);
  return g;
}

// Emits the DRRSA instance of a grid. Terminals are listed cell by cell in
// row-major order.
inline Instance emit_instance(TileGrid& g) {
  Instance inst;
  for (auto& c : g.cells) {
    if (!c.used) continue;
    c.first_terminal = inst.terminals.size();
    Point o = g.origin(c.col, c.row);
    for (auto& t : c.spec.terminals) inst.terminals.push_back({t.pos + o, t.depth});
  }
  return inst;
}

struct Compiled {
  TileGrid grid;
  Instance instance;
};

inline Compiled compile_reduction(const Max2SatInstance& sat, const Parameters& params) {
  Compiled out;
  out.grid = build_grid(sat, params);
  out.instance = emit_instance(out.grid);
  auto k = kraft_check(out.instance);
  if (!k.feasible) throw Error("wiring bug: compiled instance violates Kraft equality (" + k.fraction() + ")");
  auto rep = validate_instance(out.instance);
  if (!rep.ok) throw Error("wiring bug: " + rep.violations.front().detail);
  return out;
}

}  // namespace drsa
