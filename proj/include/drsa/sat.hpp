#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "model.hpp"

namespace drsa {

// Literals use DIMACS signs: +v is x_v, -v is its negation.
struct Max2SatInstance {
  int n = 0;
  std::vector<std::array<int, 2>> clauses;

  int m() const { return static_cast<int>(clauses.size()); }
};

inline Max2SatInstance parse_dimacs(const std::string& text) {
  Max2SatInstance sat;
  std::istringstream in(text);
  std::string line;
  int lineno = 0, declared = -1;
  bool header = false;
  std::vector<int> pending;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok == "c" || tok[0] == 'c' || tok[0] == '%') continue;
    if (tok == "p") {
      std::string fmt;
      if (header || !(ss >> fmt >> sat.n >> declared) || fmt != "cnf" || sat.n < 0 || declared < 0)
        throw Error("line " + std::to_string(lineno) + ": malformed header");
      header = true;
      continue;
    }
    if (!header) throw Error("line " + std::to_string(lineno) + ": clause before header");
    ss.clear();
    ss.str(line);
    int lit;
    while (ss >> lit) {
      if (lit == 0) {
        if (pending.size() != 2) throw Error("not 2-CNF");
        sat.clauses.push_back({pending[0], pending[1]});
        pending.clear();
        continue;
      }
      if (lit > sat.n || -lit > sat.n)
        throw Error("line " + std::to_string(lineno) + ": literal out of range");
      pending.push_back(lit);
    }
    if (!ss.eof()) throw Error("line " + std::to_string(lineno) + ": malformed clause");
  }
  if (!header) throw Error("line " + std::to_string(lineno) + ": missing header");
  if (!pending.empty()) throw Error("not 2-CNF");
  if (sat.clauses.empty()) throw Error("no clauses");
  return sat;
}

inline std::string to_dimacs(const Max2SatInstance& sat) {
  std::ostringstream out;
  out << "p cnf " << sat.n << ' ' << sat.m() << '\n';
  for (auto& c : sat.clauses) out << c[0] << ' ' << c[1] << " 0\n";
  return out.str();
}

// Assignment bit j-1 holds x_j.
inline bool literal_true(int lit, std::uint64_t assignment) {
  bool v = (assignment >> (std::abs(lit) - 1)) & 1;
  return lit > 0 ? v : !v;
}

inline int satisfied_count(const Max2SatInstance& sat, std::uint64_t assignment) {
  int c = 0;
  for (auto& cl : sat.clauses) c += literal_true(cl[0], assignment) || literal_true(cl[1], assignment);
  return c;
}

struct MaxSatResult {
  std::vector<bool> assignment;
  int satisfied = 0;
};

// Exhaustive. Ties go to the lexicographically smallest assignment, reading
// x_1 first with false < true.
inline Result<MaxSatResult> max2sat_bruteforce(const Max2SatInstance& sat) {
  using R = Result<MaxSatResult>;
  if (sat.n > 24) return R::fail(Status::budget_exceeded, "more than 24 variables");
  int best = -1;
  std::uint64_t arg = 0;
  auto lex_rank = [&](std::uint64_t a) {
    std::uint64_t r = 0;
    for (int j = 0; j < sat.n; ++j) r = (r << 1) | ((a >> j) & 1);
    return r;
  };
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << sat.n); ++a) {
    int s = satisfied_count(sat, a);
    if (s > best || (s == best && lex_rank(a) < lex_rank(arg))) best = s, arg = a;
  }
  MaxSatResult res;
  res.satisfied = best;
  for (int j = 0; j < sat.n; ++j) res.assignment.push_back((arg >> j) & 1);
  return {Status::ok, res, {}};
}

// "101" means x_1 = true, x_2 = false, x_3 = true.
inline std::uint64_t parse_assignment(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n) throw Error("assignment needs " + std::to_string(n) + " bits");
  std::uint64_t a = 0;
  for (int j = 0; j < n; ++j) {
    if (s[j] != '0' && s[j] != '1') throw Error("assignment must be a 0/1 string");
    if (s[j] == '1') a |= std::uint64_t{1} << j;
  }
  return a;
}

inline std::string assignment_string(std::uint64_t a, int n) {
  std::string s;
  for (int j = 0; j < n; ++j) s += ((a >> j) & 1) ? '1' : '0';
  return s;
}

}  // namespace drsa
