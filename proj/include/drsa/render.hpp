#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "realize.hpp"

namespace drsa {

struct RenderOptions {
  double scale = 0;  // pixels per unit; 0 fits the drawing into `fit` pixels
  double fit = 1000;
  bool terminals = true;
  bool steiner = true;
  bool edges = true;
  bool tile_borders = true;
  bool depth_labels = false;
  struct Box {
    coord_t x0, y0, x1, y1;
  };
  std::optional<Box> viewport;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  // trailing zeros only bloat the file
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

struct Canvas {
  double scale, margin = 20;
  coord_t x0, y0, x1, y1;
  double px(coord_t x) const { return margin + (x - x0) * scale; }
  double py(coord_t y) const { return margin + (y1 - y) * scale; }
  double width() const { return 2 * margin + (x1 - x0) * scale; }
  double height() const { return 2 * margin + (y1 - y0) * scale; }
};

// Glyphs sharing a point fan out on a small ring; the geometry stays put.
struct Ring {
  std::map<Point, int> total, placed;
  void count(Point p) { ++total[p]; }
  std::pair<double, double> offset(Point p) {
    const int n = total[p], k = placed[p]++;
    if (n <= 1) return {0, 0};
    const double a = 2 * M_PI * k / n;
    return {5 * std::cos(a), 5 * std::sin(a)};
  }
};

}  // namespace detail

inline std::string render_svg(const Instance& inst, const EmbeddedSolution* sol, const TileGrid* grid,
                              const RenderOptions& opt = {}) {
  using detail::num;
  if (opt.scale < 0 || (opt.scale == 0 && opt.fit <= 0)) throw Error("scale must be positive");
  if (sol) {
    auto rep = verify_solution(inst, *sol);
    if (!rep.ok) {
      std::string msg = "refusing to render an invalid solution:";
      for (auto& v : rep.violations) msg += "\n  " + v.condition + ": " + v.detail;
      throw Error(msg);
    }
  }

  detail::Canvas cv{};
  if (opt.viewport) {
    cv.x0 = opt.viewport->x0, cv.y0 = opt.viewport->y0, cv.x1 = opt.viewport->x1, cv.y1 = opt.viewport->y1;
  } else {
    cv.x0 = cv.y0 = cv.x1 = cv.y1 = 0;
    auto grow = [&](Point p) {
      cv.x0 = std::min(cv.x0, p.x), cv.y0 = std::min(cv.y0, p.y);
      cv.x1 = std::max(cv.x1, p.x), cv.y1 = std::max(cv.y1, p.y);
    };
    for (auto& t : inst.terminals) grow(t.pos);
    if (sol)
      for (auto& p : sol->place) grow(p);
    if (grid) {
      grow(grid->origin(0, 0));
      grow(grid->origin(grid->side, grid->side));
    }
  }
  if (cv.x1 <= cv.x0) cv.x1 = cv.x0 + 1;
  if (cv.y1 <= cv.y0) cv.y1 = cv.y0 + 1;
  cv.scale = opt.scale > 0 ? opt.scale
                           : opt.fit / static_cast<double>(std::max(cv.x1 - cv.x0, cv.y1 - cv.y0));

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(cv.width())
      << "\" height=\"" << num(cv.height()) << "\" viewBox=\"0 0 " << num(cv.width()) << ' '
      << num(cv.height()) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (grid && opt.tile_borders) {
    svg << "<g class=\"tiles\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\">\n";
    const coord_t s = grid->tile();
    for (const auto& c : grid->cells) {
      Point o = grid->origin(c.col, c.row);
      svg << "<rect x=\"" << num(cv.px(o.x)) << "\" y=\"" << num(cv.py(o.y + s)) << "\" width=\""
          << num(s * cv.scale) << "\" height=\"" << num(s * cv.scale) << "\"";
      if (c.used) {
        svg << "><title>" << (c.role != FillerRole::none ? to_string(c.role) : to_string(c.kind))
            << "</title></rect>\n";
      } else {
        svg << "/>\n";
      }
    }
    svg << "</g>\n";
  }

  int edge_count = 0;
  if (sol && opt.edges) {
    // every edge is an L (horizontal leg first); collinear legs that touch
    // are drawn as one straight run
    std::map<coord_t, std::vector<std::pair<coord_t, coord_t>>> rows, cols;
    auto edge = [&](Point a, Point b) {
      if (a.x != b.x) rows[a.y].push_back({std::min(a.x, b.x), std::max(a.x, b.x)});
      if (a.y != b.y) cols[b.x].push_back({std::min(a.y, b.y), std::max(a.y, b.y)});
    };
    const auto& topo = sol->topo;
    edge(Point{}, sol->place[topo.top]);
    for (std::size_t v = 0; v < topo.nodes.size(); ++v)
      for (int c : topo.nodes[v].children) edge(sol->place[v], sol->place[c]);
    auto runs = [](std::vector<std::pair<coord_t, coord_t>> iv) {
      std::sort(iv.begin(), iv.end());
      std::vector<std::pair<coord_t, coord_t>> out;
      for (auto& x : iv)
        if (!out.empty() && x.first <= out.back().second)
          out.back().second = std::max(out.back().second, x.second);
        else
          out.push_back(x);
      return out;
    };
    svg << "<g class=\"edges\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
    auto line = [&](Point a, Point b) {
      svg << "<polyline points=\"" << num(cv.px(a.x)) << ',' << num(cv.py(a.y)) << ' ' << num(cv.px(b.x)) << ','
          << num(cv.py(b.y)) << "\" data-length=\"" << l1(a, b) << "\"/>\n";
      ++edge_count;
    };
    for (auto& [y, iv] : rows)
      for (auto& [a, b] : runs(iv)) line({a, y}, {b, y});
    for (auto& [x, iv] : cols)
      for (auto& [a, b] : runs(iv)) line({x, a}, {x, b});
    svg << "</g>\n";
  }

  // classify terminal groups
  std::map<Point, std::vector<int>> groups;
  for (std::size_t i = 0; i < inst.terminals.size(); ++i)
    groups[inst.terminals[i].pos].push_back(inst.terminals[i].depth);
  detail::Ring ring;
  ring.count(Point{});
  if (opt.terminals)
    for (auto& [p, ds] : groups) ring.count(p);
  if (sol && opt.steiner)
    for (std::size_t v = 0; v < sol->topo.nodes.size(); ++v)
      if (sol->topo.nodes[v].label < 0) ring.count(sol->place[v]);

  {
    auto [dx, dy] = ring.offset(Point{});
    svg << "<circle class=\"root\" cx=\"" << num(cv.px(0) + dx) << "\" cy=\"" << num(cv.py(0) + dy)
        << "\" r=\"5\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }

  if (opt.terminals) {
    svg << "<g class=\"terminals\">\n";
    for (auto& [p, ds] : groups) {
      auto [dx, dy] = ring.offset(p);
      const double x = cv.px(p.x) + dx, y = cv.py(p.y) + dy;
      std::vector<int> sorted = ds;
      std::sort(sorted.begin(), sorted.end());
      bool consecutive = true;
      for (std::size_t i = 1; i < sorted.size(); ++i) consecutive &= sorted[i] == sorted[i - 1] + 1;
      if (sorted.size() >= 3 && consecutive) {
        svg << "<polygon class=\"cascade\" points=\"" << num(x) << ',' << num(y - 5) << ' ' << num(x + 5) << ','
            << num(y) << ' ' << num(x) << ',' << num(y + 5) << ' ' << num(x - 5) << ',' << num(y)
            << "\" fill=\"black\"/>\n";
      } else if (sorted.size() == 2 && consecutive) {
        svg << "<g class=\"double\"><rect x=\"" << num(x - 5) << "\" y=\"" << num(y - 5)
            << "\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"black\"/><rect x=\"" << num(x - 3)
            << "\" y=\"" << num(y - 3) << "\" width=\"6\" height=\"6\" fill=\"black\"/></g>\n";
      } else {
        svg << "<rect class=\"terminal\" x=\"" << num(x - 3) << "\" y=\"" << num(y - 3)
            << "\" width=\"6\" height=\"6\" fill=\"black\"/>\n";
      }
      if (opt.depth_labels) {
        std::string label;
        for (std::size_t i = 0; i < sorted.size(); ++i) label += (i ? "," : "") + std::to_string(sorted[i]);
        if (sorted.size() > 2 && consecutive)
          label = std::to_string(sorted.front()) + ".." + std::to_string(sorted.back());
        svg << "<text x=\"" << num(x + 6) << "\" y=\"" << num(y - 6)
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << label << "</text>\n";
      }
    }
    svg << "</g>\n";
  }

  if (sol && opt.steiner) {
    svg << "<g class=\"steiner\" fill=\"black\">\n";
    for (std::size_t v = 0; v < sol->topo.nodes.size(); ++v) {
      if (sol->topo.nodes[v].label >= 0) continue;
      Point p = sol->place[v];
      auto [dx, dy] = ring.offset(p);
      svg << "<circle cx=\"" << num(cv.px(p.x) + dx) << "\" cy=\"" << num(cv.py(p.y) + dy) << "\" r=\"2.5\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "<!-- edges: " << edge_count << " -->\n</svg>\n";
  return svg.str();
}

}  // namespace drsa
