#include <CLI11.hpp>
#include <drsa/embedding.hpp>
#include <drsa/exact.hpp>
#include <drsa/io.hpp>
#include <drsa/oracle.hpp>
#include <drsa/render.hpp>
#include <iostream>
#include <thread>

using namespace drsa;

namespace {

enum Exit { kOk = 0, kError = 1, kInfeasible = 2, kBudget = 3 };

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
  unsigned threads = 1;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

int exit_for(Status s) {
  switch (s) {
    case Status::ok: return kOk;
    case Status::infeasible: return kInfeasible;
    case Status::budget_exceeded: return kBudget;
    case Status::no_connection: return kInfeasible;
  }
  return kError;
}

std::string gadget_tsv(const GadgetParams& p, const std::string& only) {
  struct Entry {
    GadgetKind kind;
    FillerRole role;
  };
  std::vector<Entry> all = {
      {GadgetKind::variable, FillerRole::none},       {GadgetKind::connection_h, FillerRole::none},
      {GadgetKind::connection_v, FillerRole::none},   {GadgetKind::crossing, FillerRole::none},
      {GadgetKind::clause, FillerRole::none},         {GadgetKind::splitter_h, FillerRole::none},
      {GadgetKind::splitter_v, FillerRole::none},     {GadgetKind::root_filler, FillerRole::merge_down},
      {GadgetKind::root_filler, FillerRole::merge_left}, {GadgetKind::root_filler, FillerRole::corner_down},
      {GadgetKind::root_filler, FillerRole::corner_left}, {GadgetKind::root_filler, FillerRole::root},
  };
  std::ostringstream out;
  out << "kind\tparities\tdp\tlemma\tdelta\n";
  bool any = false;
  for (auto& e : all) {
    std::string name = e.role == FillerRole::none ? to_string(e.kind) : to_string(e.role);
    if (!only.empty() && only != name && !(only == "root-filler" && e.kind == GadgetKind::root_filler))
      continue;
    any = true;
    for (auto& row : gadget_table(e.kind, p, e.role)) {
      out << row.kind << '\t' << row.parities << '\t';
      if (row.feasible)
        out << row.dp;
      else
        out << "infeasible";
      out << '\t' << (row.lemma ? std::to_string(*row.lemma) : "-") << '\t';
      auto d = row.delta();
      out << (d ? std::to_string(*d) : "-") << '\n';
    }
  }
  if (!any) throw Error("unknown gadget kind '" + only + "'");
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-restricted rectilinear Steiner arborescences"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Reserved; every command is deterministic");
  app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));

  std::string inst_path, sol_path, out_path, grid_path, cnf_path, assign, kind;

  auto* feasible = app.add_subcommand("feasible", "Kraft test of an instance");
  feasible->add_option("instance", inst_path)->required();

  auto* solve = app.add_subcommand("solve", "Exact minimum solution");
  std::uint64_t budget = SolveOptions{}.budget;
  bool oracle = false;
  solve->add_option("instance", inst_path)->required();
  solve->add_option("--budget", budget, "Maximum number of topologies");
  solve->add_flag("--oracle", oracle, "Cross-check against the exhaustive placement search");
  solve->add_option("-o,--output", out_path);

  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  verify->add_option("instance", inst_path)->required();
  verify->add_option("solution", sol_path)->required();

  auto* reduce = app.add_subcommand("reduce", "Compile a 2-CNF formula into an instance");
  std::optional<coord_t> alpha;
  std::optional<int> beta, gamma_lo, gamma_hi;
  reduce->add_option("cnf", cnf_path)->required();
  reduce->add_option("--alpha", alpha);
  reduce->add_option("--beta", beta);
  reduce->add_option("--gamma-lo", gamma_lo, "Smallest allowed cascade size");
  reduce->add_option("--gamma-hi", gamma_hi, "Largest allowed cascade size");
  reduce->add_option("-o,--output", out_path)->required();
  reduce->add_option("--grid", grid_path)->required();

  auto* realize = app.add_subcommand("realize", "Solution induced by a truth assignment");
  realize->add_option("--grid", grid_path)->required();
  realize->add_option("--assign", assign, "Truth values of x1..xn, e.g. 101")->required();
  realize->add_option("-o,--output", out_path);

  auto* gadgets = app.add_subcommand("gadgets", "Parity-cost table of the gadgets");
  GadgetParams gp;
  gadgets->add_option("--alpha", gp.alpha);
  gadgets->add_option("--beta", gp.beta);
  gadgets->add_option("--gamma", gp.gamma);
  gadgets->add_option("--kind", kind);

  auto* render = app.add_subcommand("render", "SVG drawing");
  RenderOptions ropt;
  bool labels = false;
  render->add_option("instance", inst_path)->required();
  render->add_option("solution", sol_path);
  render->add_option("--grid", grid_path);
  render->add_option("--scale", ropt.scale, "Pixels per unit (default: fit to 1000px)");
  render->add_flag("--labels", labels, "Print terminal depths");
  render->add_option("-o,--output", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }
  auto note = [&](const std::string& s) {
    if (!g.quiet) std::cerr << s << '\n';
  };

  try {
    if (*feasible) {
      auto k = kraft_check(parse_instance(read_file(inst_path)));
      if (k.feasible) {
        std::cout << "FEASIBLE\n";
        return kOk;
      }
      std::cout << "INFEASIBLE sum=" << k.fraction() << '\n';
      return kInfeasible;
    }

    if (*solve) {
      auto inst = parse_instance(read_file(inst_path));
      auto r = solve_exact(inst, {budget, g.threads});
      if (!r) {
        std::cerr << to_string(r.status) << ": " << r.detail << '\n';
        return exit_for(r.status);
      }
      if (oracle) {
        auto ref = bruteforce_min_length(inst);
        if (!ref || *ref != r.value.length) {
          std::cerr << "oracle mismatch: solver " << r.value.length << ", oracle "
                    << (ref ? std::to_string(*ref) : "none") << '\n';
          return kError;
        }
        note("oracle agrees: " + std::to_string(*ref));
      }
      emit(out_path, to_text(r.value));
      return kOk;
    }

    if (*verify) {
      auto inst = parse_instance(read_file(inst_path));
      auto sol = parse_solution(read_file(sol_path));
      auto rep = verify_solution(inst, sol);
      if (rep.ok) {
        std::cout << "VALID length=" << sol.length << '\n';
        return kOk;
      }
      std::cout << "INVALID\n";
      for (auto& v : rep.violations) std::cout << v.condition << ": " << v.detail << '\n';
      return kError;
    }

    if (*reduce) {
      auto sat = parse_dimacs(read_file(cnf_path));
      Parameters p = default_parameters(sat.n, sat.m());
      if (alpha) p.alpha = *alpha;
      if (beta) p.beta = *beta;
      if (gamma_lo) p.gamma_lo = *gamma_lo;
      if (gamma_hi) p.gamma_hi = *gamma_hi;
      auto c = compile_reduction(sat, p);
      emit(out_path, to_text(c.instance));
      write_file(grid_path, grid_to_json(c.grid).dump(1) + "\n");
      note("grid " + std::to_string(c.grid.side) + "x" + std::to_string(c.grid.side) + ", " +
           std::to_string(c.instance.terminals.size()) + " terminals, " + std::to_string(c.grid.doubles) +
           " double terminals");
      return kOk;
    }

    if (*realize) {
      auto c = grid_from_json(nlohmann::json::parse(read_file(grid_path)));
      const auto& gr = c.grid;
      auto a = parse_assignment(assign, gr.sat.n);
      TileCache cache;
      auto r = build_realization(gr, c.instance, a, cache);
      auto rep = verify_solution(c.instance, r.solution);
      if (!rep.ok) throw Error("realization failed verification: " + rep.violations.front().detail);
      coord_t L = tile_minimum_sum(gr, cache);
      auto band = length_band(r.u, L, gr.params, gr.sat.n, gr.sat.m());
      emit(out_path, to_text(r.solution));
      note("u=" + std::to_string(r.u) + " length=" + std::to_string(r.length) + " L=" + std::to_string(L) +
           " band=[" + std::to_string(band.lo) + "," + std::to_string(band.hi) + "]" +
           (band.contains(r.length) ? "" : " (outside band)"));
      return kOk;
    }

    if (*gadgets) {
      std::cout << gadget_tsv(gp, kind);
      return kOk;
    }

    if (*render) {
      auto inst = parse_instance(read_file(inst_path));
      std::optional<EmbeddedSolution> sol;
      if (!sol_path.empty()) sol = parse_solution(read_file(sol_path));
      std::optional<Compiled> c;
      if (!grid_path.empty()) c = grid_from_json(nlohmann::json::parse(read_file(grid_path)));
      ropt.depth_labels = labels;
      emit(out_path, render_svg(inst, sol ? &*sol : nullptr, c ? &c->grid : nullptr, ropt));
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
