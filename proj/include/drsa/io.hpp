#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "model.hpp"

namespace drsa {

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] inline void parse_fail(int lineno, const std::string& what) {
  throw Error("line " + std::to_string(lineno) + ": " + what);
}

}  // namespace detail

inline Instance parse_instance(std::istream& in) {
  Instance inst;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(detail::strip_comment(line));
    std::string tag;
    if (!(ss >> tag)) continue;
    if (!header) {
      int version = 0;
      if (tag != "DRSA" || !(ss >> version) || version != 1)
        detail::parse_fail(lineno, "expected header 'DRSA 1'");
      header = true;
      continue;
    }
    if (tag != "t") detail::parse_fail(lineno, "unknown record '" + tag + "'");
    Terminal t;
    if (!(ss >> t.pos.x >> t.pos.y >> t.depth)) detail::parse_fail(lineno, "malformed terminal");
    std::string rest;
    if (ss >> rest) detail::parse_fail(lineno, "trailing tokens");
    inst.terminals.push_back(t);
  }
  if (!header) detail::parse_fail(lineno, "missing header 'DRSA 1'");
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline void write_instance(std::ostream& out, const Instance& inst) {
  out << "DRSA 1\n";
  for (const auto& t : inst.terminals)
    out << "t " << t.pos.x << ' ' << t.pos.y << ' ' << t.depth << '\n';
}

inline std::string to_text(const Instance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

inline void write_solution(std::ostream& out, const EmbeddedSolution& sol) {
  const auto& nodes = sol.topo.nodes;
  std::vector<std::string> id(nodes.size());
  int steiner = 0;
  for (std::size_t v = 0; v < nodes.size(); ++v)
    id[v] = nodes[v].label >= 0 ? terminal_name(nodes[v].label) : "s" + std::to_string(steiner++);
  out << "SOL 1\n";
  out << "n r 0 0\n";
  for (std::size_t v = 0; v < nodes.size(); ++v)
    out << "n " << id[v] << ' ' << sol.place[v].x << ' ' << sol.place[v].y << '\n';
  if (sol.topo.top >= 0) out << "e r " << id[sol.topo.top] << '\n';
  for (std::size_t v = 0; v < nodes.size(); ++v)
    for (int c : nodes[v].children) out << "e " << id[v] << ' ' << id[c] << '\n';
  out << "len " << sol.length << '\n';
}

inline std::string to_text(const EmbeddedSolution& sol) {
  std::ostringstream out;
  write_solution(out, sol);
  return out.str();
}

inline EmbeddedSolution parse_solution(std::istream& in) {
  EmbeddedSolution sol;
  std::map<std::string, int> index;
  std::string line;
  int lineno = 0;
  bool header = false, have_len = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(detail::strip_comment(line));
    std::string tag;
    if (!(ss >> tag)) continue;
    if (!header) {
      int version = 0;
      if (tag != "SOL" || !(ss >> version) || version != 1)
        detail::parse_fail(lineno, "expected header 'SOL 1'");
      header = true;
      continue;
    }
    if (tag == "n") {
      std::string id;
      Point p;
      if (!(ss >> id >> p.x >> p.y)) detail::parse_fail(lineno, "malformed node");
      if (id == "r") {
        if (p != Point{}) detail::parse_fail(lineno, "root must sit at the origin");
        continue;
      }
      if (index.count(id)) detail::parse_fail(lineno, "duplicate node id '" + id + "'");
      int label = -1;
      if (id.size() > 1 && id[0] == 't' &&
          id.find_first_not_of("0123456789", 1) == std::string::npos)
        label = std::stoi(id.substr(1));
      index[id] = static_cast<int>(sol.topo.nodes.size());
      sol.topo.nodes.push_back({-1, {}, label});
      sol.place.push_back(p);
    } else if (tag == "e") {
      std::string a, b;
      if (!(ss >> a >> b)) detail::parse_fail(lineno, "malformed edge");
      if (!index.count(b)) throw Error("malformed solution: unknown node '" + b + "'");
      int c = index[b];
      if (a == "r") {
        if (sol.topo.top >= 0) throw Error("malformed solution: root has two children");
        sol.topo.top = c;
        continue;
      }
      if (!index.count(a)) throw Error("malformed solution: unknown node '" + a + "'");
      int p = index[a];
      if (sol.topo.nodes[c].parent >= 0)
        throw Error("malformed solution: node '" + b + "' has two parents");
      sol.topo.nodes[c].parent = p;
      sol.topo.nodes[p].children.push_back(c);
    } else if (tag == "len") {
      if (!(ss >> sol.length)) detail::parse_fail(lineno, "malformed length");
      have_len = true;
    } else {
      detail::parse_fail(lineno, "unknown record '" + tag + "'");
    }
  }
  if (!header) detail::parse_fail(lineno, "missing header 'SOL 1'");
  if (!have_len) detail::parse_fail(lineno, "missing 'len' record");
  return sol;
}

inline EmbeddedSolution parse_solution(const std::string& text) {
  std::istringstream in(text);
  return parse_solution(in);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

}  // namespace drsa
