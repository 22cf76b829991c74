#pragma once

#include <optional>
#include <string>

#include "tile.hpp"

namespace drsa {

enum class GadgetKind {
  variable,
  clause,
  connection_h,
  connection_v,
  crossing,
  splitter_h,
  splitter_v,
  root_filler,
};

// Root-region tiles. Merges and corners gather wires along row 0 (output to
// the left) and column 0 (output downward); the root tile sits in cell (0,0).
enum class FillerRole { none, merge_down, merge_left, corner_down, corner_left, root };

inline const char* to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::variable: return "variable";
    case GadgetKind::clause: return "clause";
    case GadgetKind::connection_h: return "connection-h";
    case GadgetKind::connection_v: return "connection-v";
    case GadgetKind::crossing: return "crossing";
    case GadgetKind::splitter_h: return "splitter-h";
    case GadgetKind::splitter_v: return "splitter-v";
    case GadgetKind::root_filler: return "root-filler";
  }
  return "?";
}

inline const char* to_string(FillerRole r) {
  switch (r) {
    case FillerRole::none: return "none";
    case FillerRole::merge_down: return "merge-down";
    case FillerRole::merge_left: return "merge-left";
    case FillerRole::corner_down: return "corner-down";
    case FillerRole::corner_left: return "corner-left";
    case FillerRole::root: return "root";
  }
  return "?";
}

inline GadgetKind gadget_kind_from(const std::string& s) {
  for (auto k : {GadgetKind::variable, GadgetKind::clause, GadgetKind::connection_h,
                 GadgetKind::connection_v, GadgetKind::crossing, GadgetKind::splitter_h,
                 GadgetKind::splitter_v, GadgetKind::root_filler})
    if (s == to_string(k)) return k;
  throw Error("unknown gadget kind '" + s + "'");
}

inline FillerRole filler_role_from(const std::string& s) {
  for (auto r : {FillerRole::none, FillerRole::merge_down, FillerRole::merge_left,
                 FillerRole::corner_down, FillerRole::corner_left, FillerRole::root})
    if (s == to_string(r)) return r;
  throw Error("unknown filler role '" + s + "'");
}

// Prototype breakpoints along either axis of a tile of side 4a+2.
struct Breakpoints {
  coord_t A, B, C, D, DD, E, F;
  explicit Breakpoints(coord_t a)
      : A(0), B(a), C(2 * a), D(2 * a + 1), DD(2 * a + 2), E(3 * a + 2), F(4 * a + 2) {}
};

inline coord_t tile_side(coord_t alpha) { return 4 * alpha + 2; }

struct TermSpec {
  enum Tag { plain, port, pair, cascade };
  Point pos;
  int depth = 0;
  Tag tag = plain;
};

// Port depth is the depth of the boundary Steiner point.
struct PortSpec {
  bool input = false;
  Side side = Side::left;
  Point o, o_hat;
  int depth = 0;
};

// A gadget instantiated at concrete depths, in tile-local coordinates.
struct TileSpec {
  GadgetKind kind = GadgetKind::connection_h;
  FillerRole role = FillerRole::none;
  coord_t alpha = 0;
  std::vector<TermSpec> terminals;
  std::vector<PortSpec> ports;
  int doubles = 0;

  std::vector<int> inputs() const {
    std::vector<int> v;
    for (std::size_t i = 0; i < ports.size(); ++i)
      if (ports[i].input) v.push_back(static_cast<int>(i));
    return v;
  }
  std::vector<int> outputs() const {
    std::vector<int> v;
    for (std::size_t i = 0; i < ports.size(); ++i)
      if (!ports[i].input) v.push_back(static_cast<int>(i));
    return v;
  }
};

namespace gadget {

inline PortSpec port(coord_t alpha, bool input, Side side, int depth) {
  Breakpoints g(alpha);
  PortSpec p{input, side, {}, {}, depth};
  switch (side) {
    case Side::left: p.o = {g.A, g.D}, p.o_hat = {g.A, g.C}; break;
    case Side::bottom: p.o = {g.D, g.A}, p.o_hat = {g.C, g.A}; break;
    case Side::right: p.o = {g.F, g.D}, p.o_hat = {g.F, g.C}; break;
    case Side::top: p.o = {g.D, g.F}, p.o_hat = {g.C, g.F}; break;
  }
  return p;
}

struct Builder {
  TileSpec spec;
  Breakpoints g;

  Builder(GadgetKind kind, coord_t alpha) : g(alpha) {
    spec.kind = kind;
    spec.alpha = alpha;
  }
  void term(coord_t x, coord_t y, int d, TermSpec::Tag tag = TermSpec::plain) {
    spec.terminals.push_back({{x, y}, d, tag});
  }
  // two terminals with consecutive depths d, d-1
  void pair(coord_t x, coord_t y, int d) {
    term(x, y, d, TermSpec::pair);
    term(x, y, d - 1, TermSpec::pair);
    ++spec.doubles;
  }
  void cascade(coord_t x, coord_t y, int hi, int lo) {
    for (int d = hi; d >= lo; --d) term(x, y, d, TermSpec::cascade);
  }
  void in(Side s, int d) { spec.ports.push_back(port(spec.alpha, true, s, d)); }
  void out(Side s, int d) { spec.ports.push_back(port(spec.alpha, false, s, d)); }
};

inline Side transpose(Side s) {
  switch (s) {
    case Side::left: return Side::bottom;
    case Side::bottom: return Side::left;
    case Side::right: return Side::top;
    case Side::top: return Side::right;
  }
  return s;
}

inline TileSpec transpose(TileSpec t, GadgetKind kind) {
  t.kind = kind;
  for (auto& x : t.terminals) x.pos = drsa::transpose(x.pos);
  for (auto& p : t.ports) {
    p.side = transpose(p.side);
    p.o = drsa::transpose(p.o);
    p.o_hat = drsa::transpose(p.o_hat);
  }
  return t;
}

}  // namespace gadget

// Variable tile; both outputs at depth k-4.
inline TileSpec variable_tile(coord_t alpha, int k) {
  gadget::Builder b(GadgetKind::variable, alpha);
  auto& g = b.g;
  b.term(g.D, g.D, k);
  b.term(g.C, g.D, k);
  b.term(g.D, g.C, k);
  b.term(g.C, g.C, k);
  b.pair(g.B, g.D, k - 1);
  b.pair(g.D, g.B, k - 1);
  b.term(g.A, g.D, k - 3, TermSpec::port);
  b.term(g.D, g.A, k - 3, TermSpec::port);
  b.out(Side::left, k - 4);
  b.out(Side::bottom, k - 4);
  return b.spec;
}

// Horizontal connection: input on the right at depth k, output left at k-6.
inline TileSpec connection_h_tile(coord_t alpha, int k) {
  gadget::Builder b(GadgetKind::connection_h, alpha);
  auto& g = b.g;
  b.in(Side::right, k);
  b.pair(g.E, g.D, k);
  b.term(g.D, g.D, k - 2);
  b.pair(g.B, g.D, k - 3);
  b.term(g.A, g.D, k - 5, TermSpec::port);
  b.out(Side::left, k - 6);
  return b.spec;
}

inline TileSpec connection_v_tile(coord_t alpha, int k) {
  return gadget::transpose(connection_h_tile(alpha, k), GadgetKind::connection_v);
}

// Overlay of a horizontal pass at depth kh and a vertical pass at depth kv.
// Ports: right in, top in, left out, bottom out.
inline TileSpec crossing_tile(coord_t alpha, int kh, int kv) {
  auto h = connection_h_tile(alpha, kh);
  auto v = connection_v_tile(alpha, kv);
  TileSpec t = h;
  t.kind = GadgetKind::crossing;
  t.terminals.insert(t.terminals.end(), v.terminals.begin(), v.terminals.end());
  t.doubles += v.doubles;
  t.ports = {h.ports[0], v.ports[0], h.ports[1], v.ports[1]};
  return t;
}

// Clause tile: inputs right and top at depth k, output bottom at k-beta-6.
inline TileSpec clause_tile(coord_t alpha, int k, int beta) {
  gadget::Builder b(GadgetKind::clause, alpha);
  auto& g = b.g;
  b.in(Side::right, k);
  b.in(Side::top, k);
  b.pair(g.E, g.D, k);
  b.pair(g.D, g.E, k);
  b.cascade(g.D, g.D, k - 2, k - beta - 1);
  b.cascade(g.C, g.C, k - 2, k - beta - 1);
  b.pair(g.D, g.B, k - beta - 3);
  b.term(g.D, g.A, k - beta - 5, TermSpec::port);
  b.out(Side::bottom, k - beta - 6);
  return b.spec;
}

// Horizontal splitter: input right at depth k; the through output (left) at
// k-5; the turn output (bottom) at k-gamma-5 below a cascade of gamma
// terminals.
inline TileSpec splitter_h_tile(coord_t alpha, int k, int gamma) {
  gadget::Builder b(GadgetKind::splitter_h, alpha);
  auto& g = b.g;
  const int kb = k - gamma - 1;
  b.in(Side::right, k);
  b.pair(g.E, g.D, k);
  b.term(g.C, g.DD, k - 2);
  b.cascade(g.D, g.DD, k - 2, kb);
  b.pair(g.B, g.D, k - 2);
  b.term(g.A, g.D, k - 4, TermSpec::port);
  b.out(Side::left, k - 5);
  b.pair(g.D, g.B, kb - 1);
  b.term(g.D, g.A, kb - 3, TermSpec::port);
  b.out(Side::bottom, kb - 4);
  return b.spec;
}

// Vertical splitter: input top, through output bottom, turn output left.
inline TileSpec splitter_v_tile(coord_t alpha, int k, int gamma) {
  return gadget::transpose(splitter_h_tile(alpha, k, gamma), GadgetKind::splitter_v);
}

// Column-0 merge: wire from above at depth k_through, row tail from the right
// at depth k_side; output bottom at min(k_through, k_side) - 7. The deeper
// input is lifted by a cascade at (C,C).
inline TileSpec merge_down_tile(coord_t alpha, int k_through, int k_side) {
  gadget::Builder b(GadgetKind::root_filler, alpha);
  b.spec.role = FillerRole::merge_down;
  auto& g = b.g;
  b.in(Side::top, k_through);
  b.in(Side::right, k_side);
  b.pair(g.D, g.E, k_through);
  b.pair(g.E, g.D, k_side);
  const int lo = std::min(k_through, k_side) - 2, hi = std::max(k_through, k_side) - 2;
  b.cascade(g.C, g.C, hi, lo + 1);
  const int mu = lo - 1;
  b.term(g.C, g.C, mu, TermSpec::cascade);
  b.pair(g.D, g.B, mu - 1);
  b.term(g.D, g.A, mu - 3, TermSpec::port);
  b.out(Side::bottom, mu - 4);
  return b.spec;
}

// Row-0 merge: wire from the right, column tail from above, output left.
inline TileSpec merge_left_tile(coord_t alpha, int k_through, int k_side) {
  auto t = gadget::transpose(merge_down_tile(alpha, k_through, k_side), GadgetKind::root_filler);
  t.role = FillerRole::merge_left;
  return t;
}

// Top of column 0: row tail from the right turns down; output at k-6.
inline TileSpec corner_down_tile(coord_t alpha, int k) {
  gadget::Builder b(GadgetKind::root_filler, alpha);
  b.spec.role = FillerRole::corner_down;
  auto& g = b.g;
  b.in(Side::right, k);
  b.pair(g.E, g.D, k);
  b.term(g.C, g.C, k - 2, TermSpec::cascade);
  b.pair(g.D, g.B, k - 3);
  b.term(g.D, g.A, k - 5, TermSpec::port);
  b.out(Side::bottom, k - 6);
  return b.spec;
}

// Right end of row 0: column tail from above turns left.
inline TileSpec corner_left_tile(coord_t alpha, int k) {
  auto t = gadget::transpose(corner_down_tile(alpha, k), GadgetKind::root_filler);
  t.role = FillerRole::corner_left;
  return t;
}

// Cell (0,0). The instance root coincides with the local point (C,C); the
// cascade there runs down to depth 1 so that the root's child sits on it at
// depth 0. The output port stands for that child.
inline TileSpec root_tile(coord_t alpha, int k_top, int k_right) {
  gadget::Builder b(GadgetKind::root_filler, alpha);
  b.spec.role = FillerRole::root;
  auto& g = b.g;
  b.in(Side::top, k_top);
  b.in(Side::right, k_right);
  b.pair(g.D, g.E, k_top);
  b.pair(g.E, g.D, k_right);
  const int lo = std::min(k_top, k_right) - 2, hi = std::max(k_top, k_right) - 2;
  b.cascade(g.C, g.C, hi, lo + 1);
  b.cascade(g.C, g.C, lo - 1, 1);
  PortSpec child{false, Side::left, {g.C, g.C}, {g.C, g.C}, 0};
  b.spec.ports.push_back(child);
  return b.spec;
}

// Local offset of the instance root inside the root tile.
inline Point root_anchor(coord_t alpha) { return {2 * alpha, 2 * alpha}; }

inline TileProblem to_problem(const TileSpec& t, const std::vector<int>& parity) {
  TileProblem p;
  p.width = p.height = tile_side(t.alpha);
  for (auto& x : t.terminals) p.terminals.push_back({x.pos, x.depth});
  for (std::size_t i = 0; i < t.ports.size(); ++i) {
    const auto& s = t.ports[i];
    p.ports.push_back({s.input, s.side, s.o, s.o_hat, s.depth, i < parity.size() ? parity[i] : -1});
  }
  return p;
}

// ---- reference formulas and the gadget verifier ---------------------------

struct GadgetParams {
  coord_t alpha = 8;
  int beta = 4;
  int gamma = 5;
};

// One row of a gadget's parity table. `parities` lists port parities in port
// order; '*' marks a free output.
struct GadgetRow {
  std::string kind;
  std::string parities;
  coord_t dp = 0;
  std::optional<coord_t> lemma;
  bool feasible = true;

  std::optional<coord_t> delta() const {
    if (!feasible || !lemma) return std::nullopt;
    return dp - *lemma;
  }
};

inline TileSpec sample_tile(GadgetKind kind, const GadgetParams& p, FillerRole role = FillerRole::none) {
  const int k = p.beta + p.gamma + 24;
  switch (kind) {
    case GadgetKind::variable: return variable_tile(p.alpha, k);
    case GadgetKind::clause: return clause_tile(p.alpha, k, p.beta);
    case GadgetKind::connection_h: return connection_h_tile(p.alpha, k);
    case GadgetKind::connection_v: return connection_v_tile(p.alpha, k);
    case GadgetKind::crossing: return crossing_tile(p.alpha, k, k + 9);
    case GadgetKind::splitter_h: return splitter_h_tile(p.alpha, k, p.gamma);
    case GadgetKind::splitter_v: return splitter_v_tile(p.alpha, k, p.gamma);
    case GadgetKind::root_filler:
      switch (role) {
        case FillerRole::merge_left: return merge_left_tile(p.alpha, k, k + 3);
        case FillerRole::corner_down: return corner_down_tile(p.alpha, k);
        case FillerRole::corner_left: return corner_left_tile(p.alpha, k);
        case FillerRole::root: return root_tile(p.alpha, k, k + 3);
        default: return merge_down_tile(p.alpha, k, k + 3);
      }
  }
  throw Error("unknown gadget kind");
}

inline std::optional<coord_t> lemma_value(GadgetKind kind, const GadgetParams& p,
                                          const std::string& par) {
  const coord_t a = p.alpha;
  switch (kind) {
    case GadgetKind::variable:
      if (par == "10" || par == "01" || par == "**") return 4 * a + 5;
      return std::nullopt;
    case GadgetKind::connection_h:
    case GadgetKind::connection_v:
      if (par == "11") return 4 * a + 2;
      if (par == "00") return 4 * a + 8;
      return std::nullopt;
    case GadgetKind::crossing: {
      coord_t v = 8 * a + 4;
      if (par.size() == 4 && par[0] == par[2] && par[1] == par[3])
        return v + 6 * ((par[0] == '0') + (par[1] == '0'));
      return std::nullopt;
    }
    case GadgetKind::clause:
      if (par == "11*") return 6 * a + 9;
      if (par == "10*" || par == "01*") return 6 * a + 10;
      if (par == "00*") return 6 * a + 11 + p.beta;
      return std::nullopt;
    case GadgetKind::splitter_h:
    case GadgetKind::splitter_v: {
      coord_t L = 6 * a + p.gamma + 3;
      if (par == "111") return L;
      if (par == "000") return L + 8;
      if (par == "011") return L + 1 + 2 * p.gamma;
      return std::nullopt;
    }
    case GadgetKind::root_filler: return std::nullopt;
  }
  return std::nullopt;
}

inline std::vector<int> parse_parities(const std::string& s) {
  std::vector<int> v;
  for (char c : s) v.push_back(c == '1' ? 1 : c == '0' ? 0 : -1);
  return v;
}

// Minimum tile branching for one parity combination, by the level DP.
inline GadgetRow verify_gadget(GadgetKind kind, const GadgetParams& p, const std::string& parities,
                               FillerRole role = FillerRole::none) {
  auto tile = sample_tile(kind, p, role);
  if (parities.size() != tile.ports.size()) throw Error("parity string does not match the ports");
  GadgetRow row;
  row.kind = kind == GadgetKind::root_filler ? std::string(to_string(role)) : to_string(kind);
  row.parities = parities;
  row.lemma = lemma_value(kind, p, parities);
  auto r = solve_tile_levels(to_problem(tile, parse_parities(parities)));
  if (!r) {
    row.feasible = false;
    return row;
  }
  row.dp = r.value.length;
  return row;
}

// Parity combinations reported for each gadget.
inline std::vector<std::string> parity_table(GadgetKind kind, FillerRole role = FillerRole::none) {
  switch (kind) {
    case GadgetKind::variable: return {"10", "01", "11", "00", "**"};
    case GadgetKind::connection_h:
    case GadgetKind::connection_v: return {"11", "00", "10", "01"};
    case GadgetKind::crossing: return {"1111", "1010", "0101", "0000"};
    case GadgetKind::clause: return {"11*", "10*", "01*", "00*"};
    case GadgetKind::splitter_h:
    case GadgetKind::splitter_v: return {"111", "000", "011", "001", "010", "100", "110", "101"};
    case GadgetKind::root_filler:
      if (role == FillerRole::corner_down || role == FillerRole::corner_left) return {"1*", "0*"};
      return {"11*", "10*", "01*", "00*"};
  }
  return {};
}

inline std::vector<GadgetRow> gadget_table(GadgetKind kind, const GadgetParams& p,
                                           FillerRole role = FillerRole::none) {
  std::vector<GadgetRow> rows;
  for (auto& s : parity_table(kind, role)) rows.push_back(verify_gadget(kind, p, s, role));
  return rows;
}

// Smallest alpha in [4, 16] at which the variable, connection and clause
// tables reproduce their reference formulas exactly and the crossing is the sum of
// its two passes.
inline std::optional<coord_t> find_alpha_min(int beta = 4, int gamma = 5) {
  for (coord_t a = 4; a <= 16; ++a) {
    GadgetParams p{a, beta, gamma};
    bool ok = true;
    for (auto kind : {GadgetKind::variable, GadgetKind::connection_h, GadgetKind::clause,
                      GadgetKind::crossing}) {
      for (auto& row : gadget_table(kind, p))
        if (row.lemma && (!row.feasible || row.dp != *row.lemma)) ok = false;
    }
    if (ok) return a;
  }
  return std::nullopt;
}

}  // namespace drsa
