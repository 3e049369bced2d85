#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "iqplab/error.hpp"

namespace iqplab {

struct Literal {
  int var = 0;
  bool negated = false;

  bool value(std::uint64_t x) const noexcept { return static_cast<bool>((x >> var) & 1u) != negated; }
  bool operator==(const Literal&) const = default;
};

using Clause = std::array<Literal, 3>;

/// Conjunction of m >= 1 clauses of exactly three literals each.
class Cnf3 {
public:
  Cnf3(int n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
    detail::require(n >= 1 && n <= 63, "Cnf3: 1 <= n <= 63");
    detail::require(!clauses_.empty(), "Cnf3: at least one clause (m >= 1)");
    for (const auto& c : clauses_) {
      for (const auto& l : c) detail::require(l.var >= 0 && l.var < n, "Cnf3: literal variable out of range");
    }
  }

  int n() const noexcept { return n_; }
  int m() const noexcept { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }

  bool evaluate(std::uint64_t x) const noexcept {
    for (const auto& c : clauses_) {
      if (!(c[0].value(x) || c[1].value(x) || c[2].value(x))) return false;
    }
    return true;
  }

private:
  int n_;
  std::vector<Clause> clauses_;
};

/// DIMACS CNF. Every clause must have exactly three literals.
inline Cnf3 parse_dimacs(std::istream& in) {
  std::string line;
  int n = -1;
  long declared = -1;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "%") break;  // SATLIB trailer
    if (tok == "p") {
      std::string fmt;
      if (n >= 0) throw ParseError("dimacs: duplicate problem line");
      if (!(ls >> fmt >> n >> declared) || fmt != "cnf" || n < 1 || declared < 1) {
        throw ParseError("dimacs: malformed problem line (expected \"p cnf <vars> <clauses>\")");
      }
      continue;
    }
    if (n < 0) throw ParseError("dimacs: clause before problem line");
    ls.clear();
    ls.str(line);
    long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (pending.size() != 3) {
          throw ParseError("dimacs: line " + std::to_string(line_no) + ": clause has " +
                           std::to_string(pending.size()) + " literals, exactly 3 required");
        }
        clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        const long v = lit < 0 ? -lit : lit;
        if (v > n) throw ParseError("dimacs: literal " + std::to_string(lit) + " exceeds declared variable count");
        pending.push_back(Literal{static_cast<int>(v - 1), lit < 0});
      }
    }
    if (!ls.eof()) throw ParseError("dimacs: line " + std::to_string(line_no) + ": non-integer token");
  }
  if (n < 0) throw ParseError("dimacs: missing problem line");
  if (!pending.empty()) throw ParseError("dimacs: last clause is not terminated by 0");
  if (clauses.empty()) throw ParseError("dimacs: no clauses (m >= 1 required)");
  if (static_cast<long>(clauses.size()) != declared) {
    throw ParseError("dimacs: problem line declares " + std::to_string(declared) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  try {
    return Cnf3(n, std::move(clauses));
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("dimacs: ") + e.what());
  }
}

inline Cnf3 parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

inline Cnf3 read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open DIMACS file: " + path);
  return parse_dimacs(in);
}

inline std::string to_dimacs(const Cnf3& g) {
  std::ostringstream out;
  out << "p cnf " << g.n() << ' ' << g.m() << '\n';
  for (const auto& c : g.clauses()) {
    for (const auto& l : c) out << (l.negated ? -(l.var + 1) : (l.var + 1)) << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace iqplab
