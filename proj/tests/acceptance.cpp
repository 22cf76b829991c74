// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <unistd.h>

#include <drsa/exact.hpp>
#include <drsa/io.hpp>
#include <drsa/oracle.hpp>
#include <drsa/realize.hpp>

#include "support.hpp"

using namespace drsa;
namespace fs = std::filesystem;

namespace {

// tolerances
constexpr coord_t kOracleTolerance = 0;
constexpr coord_t kFormulaSlack = 4;  // per-tile additive slack on absolute DP values
constexpr int kRandomInstances = 500;
constexpr int kMaxTerminals = 5;
constexpr coord_t kMaxCoord = 6;
constexpr unsigned kManyThreads = 4;

struct Line {
  bool ok;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Line& l, double secs) {
  char t[32];
  std::snprintf(t, sizeof t, "%.2fs", secs);
  std::cout << (l.ok ? "PASS" : "FAIL") << "  " << id << "  " << name << "  (" << t << ")  " << l.detail
            << std::endl;
  if (!l.ok) ++failures;
}

template <class F>
void run(int id, const std::string& name, F f) {
  auto t0 = std::chrono::steady_clock::now();
  Line l;
  try {
    l = f();
  } catch (const std::exception& e) {
    l = {false, std::string("exception: ") + e.what()};
  }
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  report(id, name, l, dt.count());
}

std::string data(const std::string& name) { return read_file(std::string(DRSA_DATA) + "/" + name); }

// ---- 1 ----

Line kraft_round_trip() {
  int total = 0, bad = 0;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int lo) {
    if (!cur.empty()) {
      ++total;
      const bool want = support::kraft_equal(cur);
      auto t = build_depth_topology(cur);
      bool ok = kraft_check(cur).feasible == want && static_cast<bool>(t) == want;
      if (ok && want) {
        auto sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        ok = support::leaf_depths(t.value) == sorted;
      }
      bad += !ok;
    }
    if (cur.size() == 8) return;
    for (int d = lo; d <= 6; ++d) {
      cur.push_back(d);
      rec(d);
      cur.pop_back();
    }
  };
  rec(0);
  return {bad == 0, std::to_string(total) + " multisets, " + std::to_string(bad) + " mismatches"};
}

// ---- 2 and 3 ----

std::vector<std::pair<Instance, EmbeddedSolution>> solved;

Line oracle_equivalence() {
  std::mt19937_64 rng(20240501);
  int bad = 0;
  for (int i = 0; i < kRandomInstances; ++i) {
    auto inst = support::random_instance(rng, 1 + i % kMaxTerminals, kMaxCoord);
    auto r = solve_exact(inst);
    auto want = bruteforce_min_length(inst);
    if (!r || !want || std::llabs(r.value.length - *want) > kOracleTolerance) {
      ++bad;
      continue;
    }
    solved.emplace_back(inst, r.value);
  }
  return {bad == 0, std::to_string(kRandomInstances) + " instances, " + std::to_string(bad) + " mismatches"};
}

Line monotone_and_hanan() {
  int bad = 0;
  std::size_t nodes = 0;
  for (auto& [inst, sol] : solved) {
    std::vector<Point> pts{{0, 0}};
    for (auto& t : inst.terminals) pts.push_back(t.pos);
    auto grid = hanan_grid(pts);
    bool ok = verify_solution(inst, sol).ok;
    for (std::size_t v = 0; v < sol.topo.nodes.size(); ++v) {
      const auto& n = sol.topo.nodes[v];
      ++nodes;
      ok = ok && support::on_grid(grid, sol.place[v]);
      if (n.label < 0)
        ok = ok && sol.place[v] == pmin(sol.place[n.children[0]], sol.place[n.children[1]]);
      for (int c : n.children) ok = ok && dominated(sol.place[v], sol.place[c]);
    }
    bad += !ok;
  }
  return {bad == 0 && !solved.empty(), std::to_string(solved.size()) + " solutions, " + std::to_string(nodes) +
                                           " nodes, " + std::to_string(bad) + " violations"};
}

// ---- 4 ----

Line gadget_tables() {
  const int beta = 4, gamma = 5;
  auto amin = find_alpha_min(beta, gamma);
  if (!amin) return {false, "no alpha in [4,16] reproduces the reference formulas"};
  std::vector<std::string> problems;
  std::map<std::string, std::set<coord_t>> deltas;
  auto dp = [&](GadgetKind k, const GadgetParams& p, const std::string& par) {
    auto row = verify_gadget(k, p, par);
    if (!row.feasible) throw Error(std::string(to_string(k)) + " " + par + " has no branching");
    if (row.lemma) deltas[row.kind + " " + par].insert(*row.delta());
    return row.dp;
  };
  auto expect = [&](const std::string& what, coord_t got, coord_t want) {
    if (got != want)
      problems.push_back(what + " " + std::to_string(got) + " (want " + std::to_string(want) + ")");
  };
  for (coord_t a : {*amin, *amin + 4}) {
    GadgetParams p{a, beta, gamma};
    const std::string at = "@" + std::to_string(a) + ":";
    dp(GadgetKind::variable, p, "**");
    dp(GadgetKind::variable, p, "10");
    dp(GadgetKind::variable, p, "01");
    for (auto k : {GadgetKind::connection_h, GadgetKind::connection_v})
      expect(at + to_string(k) + " 0-1", dp(k, p, "00") - dp(k, p, "11"), 6);
    coord_t c11 = dp(GadgetKind::clause, p, "11*");
    expect(at + "clause 10-11", dp(GadgetKind::clause, p, "10*") - c11, 1);
    expect(at + "clause 01-11", dp(GadgetKind::clause, p, "01*") - c11, 1);
    expect(at + "clause 00-11", dp(GadgetKind::clause, p, "00*") - c11, 2 + beta);
    for (auto k : {GadgetKind::splitter_h, GadgetKind::splitter_v}) {
      coord_t s111 = dp(k, p, "111");
      expect(at + to_string(k) + " 000-111", dp(k, p, "000") - s111, 8);
      expect(at + to_string(k) + " forbidden-111", dp(k, p, "011") - s111, 1 + 2 * gamma);
    }
  }
  for (auto& [row, ds] : deltas) {
    if (ds.size() != 1)
      problems.push_back(row + " delta varies with alpha");
    else if (std::llabs(*ds.begin()) > kFormulaSlack)
      problems.push_back(row + " delta " + std::to_string(*ds.begin()));
  }
  std::string detail = "alpha_min=" + std::to_string(*amin);
  for (auto& s : problems) detail += "; " + s;
  return {problems.empty(), detail};
}

// ---- 5 and 6 ----

struct Bridge {
  std::string name;
  Compiled c;
  std::vector<Realization> real;
  coord_t L = 0;
};

std::vector<Bridge> bridges;

Bridge make_bridge(const std::string& name, const std::string& cnf, coord_t alpha, std::optional<int> glo,
                   std::optional<int> ghi) {
  auto sat = parse_dimacs(data(cnf));
  auto p = default_parameters(sat.n, sat.m());
  p.alpha = alpha;
  if (glo) p.gamma_lo = *glo;
  if (ghi) p.gamma_hi = *ghi;
  Bridge b{name, compile_reduction(sat, p), {}, 0};
  TileCache cache;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << sat.n); ++a)
    b.real.push_back(build_realization(b.c.grid, b.c.instance, a, cache));
  b.L = tile_minimum_sum(b.c.grid, cache);
  return b;
}

Line realization_bridge() {
  // (2,2): alpha raised so the cascades fit; the default window cannot hold
  // the non-cascade overhead at this size
  bridges.push_back(make_bridge("2x2", "small22.cnf", 1'000'000, 1000, 4000));
  bridges.push_back(make_bridge("3x5", "five_clauses.cnf", 1'000'000, std::nullopt, std::nullopt));
  bool ok = true;
  std::string detail;
  for (auto& b : bridges) {
    const auto& g = b.c.grid;
    const int n = g.sat.n, m = g.sat.m();
    int outside = 0;
    coord_t worst = 0;
    std::string misses;
    for (auto& r : b.real) {
      if (!verify_solution(b.c.instance, r.solution).ok) throw Error(b.name + ": realization fails verification");
      auto band = length_band(r.u, b.L, g.params, n, m);
      if (!band.contains(r.length)) {
        ++outside;
        worst = std::max(worst, std::max(band.lo - r.length, r.length - band.hi));
        misses += " " + assignment_string(r.assignment, n) + "(u=" + std::to_string(r.u) + ",+" +
                  std::to_string(r.length - band.lo) + ")";
      }
    }
    bool disjoint = true;
    for (int u = 0; u < m; ++u)
      disjoint &= length_band(u, b.L, g.params, n, m).hi < length_band(u + 1, b.L, g.params, n, m).lo;
    auto best = std::min_element(b.real.begin(), b.real.end(),
                                 [](auto& x, auto& y) { return x.length < y.length; });
    const int want_u = m - max2sat_bruteforce(g.sat).value.satisfied;
    const bool bridge = best->u == want_u;
    ok &= outside == 0 && disjoint && bridge;
    detail += b.name + ": " + std::to_string(b.real.size() - outside) + "/" + std::to_string(b.real.size()) +
              " in band";
    if (outside) detail += " (outside by up to " + std::to_string(worst) + ":" + misses + ")";
    detail += ", disjoint=" + std::string(disjoint ? "yes" : "no") + ", argmin u=" + std::to_string(best->u) +
              " want " + std::to_string(want_u) + ". ";
  }
  return {ok, detail};
}

Line assumption_guards() {
  if (bridges.empty()) return {false, "no compiled instances"};
  bool ok = true;
  std::string detail;
  for (auto& b : bridges) {
    const auto& g = b.c.grid;
    const coord_t a = g.params.alpha, k = g.doubles;
    coord_t best = detail::kInf, sum_g = 0, min_g = detail::kInf;
    bool floor = true;
    for (auto& r : b.real) {
      best = std::min(best, r.length);
      floor &= 2 * k * a <= r.length;
    }
    for (int x : g.gammas()) sum_g += x, min_g = std::min<coord_t>(min_g, x);
    const bool a1 = best < (2 * k + 1) * a;
    const bool a2 = best < 2 * k * a + sum_g + min_g;
    ok &= a1 && a2 && floor;
    detail += b.name + ": A1 " + (a1 ? "ok" : "fails") + " A2 " + (a2 ? "ok" : "fails") + " (margin " +
              std::to_string(2 * k * a + sum_g + min_g - best) + ") floor " + (floor ? "ok" : "fails") + ". ";
  }
  return {ok, detail};
}

// ---- 7 ----

Line reference_solution() {
  auto inst = parse_instance(data("four.drsa"));
  auto sol = parse_solution(data("four.sol"));
  auto rep = verify_solution(inst, sol);
  const coord_t len = tree_length(sol.topo, sol.place);
  return {rep.ok && len == 14 && sol.length == 14,
          std::string(rep.ok ? "valid" : "invalid") + ", length " + std::to_string(len)};
}

// ---- 8 ----

Line cli_determinism() {
  const fs::path work = fs::temp_directory_path() / ("drsa_accept_" + std::to_string(::getpid()));
  fs::create_directories(work);
  const std::string cli = DRSA_CLI, d = DRSA_DATA;
  struct Cmd {
    std::string name, args;
    std::vector<std::string> outputs;  // files written besides stdout
  };
  std::vector<Cmd> cmds = {
      {"feasible", "feasible " + d + "/four.drsa", {}},
      {"infeasible", "feasible " + d + "/infeasible.drsa", {}},
      {"solve", "solve " + d + "/five.drsa", {}},
      {"verify", "verify " + d + "/four.drsa " + d + "/four.sol", {}},
      {"gadgets", "gadgets --alpha 4", {}},
      {"reduce", "reduce " + d + "/small22.cnf -o @/inst.drsa --grid @/grid.json", {"inst.drsa", "grid.json"}},
      {"realize", "realize --grid @/grid.json --assign 01", {}},
      {"render", "render " + d + "/four.drsa " + d + "/four.sol --labels -o @/four.svg", {"four.svg"}},
      {"render-grid", "render @/inst.drsa --grid @/grid.json -o @/grid.svg", {"grid.svg"}},
  };
  auto subst = [](std::string s, const std::string& dir) {
    for (auto p = s.find('@'); p != std::string::npos; p = s.find('@')) s.replace(p, 1, dir);
    return s;
  };
  std::vector<std::string> differ;
  int runs = 0;
  fs::path reduced;
  for (auto& c : cmds) {
    std::vector<std::string> seen;
    for (unsigned threads : {1u, kManyThreads, 1u, kManyThreads}) {
      const std::string dir = (work / ("t" + std::to_string(runs++))).string();
      fs::create_directories(dir);
      // later commands read what reduce wrote in the first run
      if (c.name == "realize" || c.name == "render-grid")
        for (auto f : {"inst.drsa", "grid.json"}) fs::copy_file(reduced / f, fs::path(dir) / f);
      const std::string out = dir + "/stdout";
      const std::string line = cli + " --quiet --threads " + std::to_string(threads) + " " + subst(c.args, dir) +
                               " > " + out + " 2>/dev/null";
      const int rc = std::system(line.c_str());
      std::string blob = "rc=" + std::to_string(rc) + "\n" + read_file(out);
      for (auto& f : c.outputs) blob += "\n--" + f + "\n" + read_file(dir + "/" + f);
      seen.push_back(blob);
      if (c.name == "reduce" && reduced.empty()) reduced = dir;
    }
    if (std::adjacent_find(seen.begin(), seen.end(), std::not_equal_to<>()) != seen.end())
      differ.push_back(c.name);
  }
  fs::remove_all(work);
  std::string detail = std::to_string(cmds.size()) + " commands x 4 runs (threads 1/" +
                       std::to_string(kManyThreads) + ")";
  for (auto& s : differ) detail += "; differs: " + s;
  return {differ.empty(), detail};
}

}  // namespace

int main() {
  run(1, "kraft/huffman round-trip", kraft_round_trip);
  run(2, "exact solver vs exhaustive oracle", oracle_equivalence);
  run(3, "monotone embedding on the hanan grid", monotone_and_hanan);
  run(4, "gadget parity tables", gadget_tables);
  run(5, "realization bands and optimum bridge", realization_bridge);
  run(6, "assumption guards and double-terminal floor", assumption_guards);
  run(7, "four-terminal reference solution", reference_solution);
  run(8, "cli determinism", cli_determinism);
  std::cout << (failures ? std::to_string(failures) + " of 8 criteria failed" : "all 8 criteria passed")
            << std::endl;
  return failures;
}
