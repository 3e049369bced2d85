#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "iqplab/error.hpp"
#include "iqplab/gf2poly.hpp"

namespace iqplab {

/// {"n": <int>, "monomials": [[0], [0,1], ...]} with 0-based indices.
inline nlohmann::json to_json(const Gf2Polynomial& f) {
  nlohmann::json mons = nlohmann::json::array();
  for (const auto& m : f.monomials()) mons.push_back(m);
  return {{"n", f.n()}, {"monomials", mons}};
}

inline Gf2Polynomial polynomial_from_json(const nlohmann::json& j, int max_degree = 3) {
  if (!j.is_object()) throw ParseError("polynomial: top-level value must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError("polynomial: integer field \"n\" required");
  if (!j.contains("monomials") || !j["monomials"].is_array()) {
    throw ParseError("polynomial: array field \"monomials\" required");
  }
  const auto n = j["n"].get<long long>();
  if (n < 1 || n > 4096) throw ParseError("polynomial: n must be a positive integer");
  std::vector<Monomial> mons;
  for (const auto& m : j["monomials"]) {
    if (!m.is_array()) throw ParseError("polynomial: each monomial must be an array of indices");
    Monomial mono;
    for (const auto& v : m) {
      if (!v.is_number_integer()) throw ParseError("polynomial: monomial indices must be integers");
      mono.push_back(v.get<int>());
    }
    mons.push_back(std::move(mono));
  }
  try {
    return Gf2Polynomial(static_cast<int>(n), std::move(mons), max_degree);
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("polynomial: ") + e.what());
  }
}

inline Gf2Polynomial read_polynomial_file(const std::string& path, int max_degree = 3) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open polynomial file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polynomial: invalid JSON: ") + e.what());
  }
  return polynomial_from_json(j, max_degree);
}

}  // namespace iqplab
