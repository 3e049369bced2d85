#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iqplab/error.hpp"

namespace iqplab {

enum class BoolOp { And, Or, Not, Xor };

struct BoolGate {
  BoolOp op;
  std::vector<int> in;
};

/// Fan-in <= 2 circuit over {AND, OR, NOT, XOR}. Ids 0..n-1 are the inputs,
/// gate i has id n+i. Gates may be listed in any order as long as the graph
/// is acyclic.
class BooleanCircuit {
public:
  BooleanCircuit(int n, std::vector<BoolGate> gates, int output)
      : n_(n), gates_(std::move(gates)), output_(output) {
    detail::require(n >= 1 && n <= 63, "BooleanCircuit: 1 <= n <= 63");
    const int ids = n + static_cast<int>(gates_.size());
    detail::require(output >= 0 && output < ids, "BooleanCircuit: output id out of range");
    for (const auto& g : gates_) {
      const std::size_t want = g.op == BoolOp::Not ? 1 : 2;
      detail::require(g.in.size() == want, "BooleanCircuit: NOT takes one input, AND/OR/XOR take two");
      for (int id : g.in) detail::require(id >= 0 && id < ids, "BooleanCircuit: gate input id out of range");
    }
    order_ = topological_order();
    depth_ = compute_depth();
  }

  int n() const noexcept { return n_; }
  int output() const noexcept { return output_; }
  const std::vector<BoolGate>& gates() const noexcept { return gates_; }

  /// Longest input-to-output path, counted in gates.
  int depth() const noexcept { return depth_; }

  /// x packed with bit i = input i.
  bool evaluate(std::uint64_t x) const {
    std::vector<char> val(static_cast<std::size_t>(n_) + gates_.size(), 0);
    for (int i = 0; i < n_; ++i) val[i] = static_cast<char>((x >> i) & 1u);
    for (int gi : order_) {
      const auto& g = gates_[gi];
      const bool a = val[g.in[0]];
      bool r = false;
      switch (g.op) {
        case BoolOp::And: r = a && val[g.in[1]]; break;
        case BoolOp::Or: r = a || val[g.in[1]]; break;
        case BoolOp::Xor: r = a != static_cast<bool>(val[g.in[1]]); break;
        case BoolOp::Not: r = !a; break;
      }
      val[n_ + gi] = r;
    }
    return val[output_];
  }

  /// The zero function on n inputs (XOR of input 0 with itself).
  static BooleanCircuit zero(int n) { return BooleanCircuit(n, {{BoolOp::Xor, {0, 0}}}, n); }

private:
  std::vector<int> topological_order() const {
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<char> state(gates_.size(), 0);
    std::vector<int> order;
    order.reserve(gates_.size());
    std::vector<std::pair<int, std::size_t>> stack;
    for (int root = 0; root < static_cast<int>(gates_.size()); ++root) {
      if (state[root]) continue;
      stack.push_back({root, 0});
      state[root] = 1;
      while (!stack.empty()) {
        auto& [gi, next] = stack.back();
        if (next < gates_[gi].in.size()) {
          const int id = gates_[gi].in[next++];
          if (id < n_) continue;
          const int child = id - n_;
          if (state[child] == 1) throw ArgumentError("BooleanCircuit: gate graph has a cycle");
          if (state[child] == 0) {
            state[child] = 1;
            stack.push_back({child, 0});
          }
        } else {
          state[gi] = 2;
          order.push_back(gi);
          stack.pop_back();
        }
      }
    }
    return order;
  }

  int compute_depth() const {
    std::vector<int> d(static_cast<std::size_t>(n_) + gates_.size(), 0);
    for (int gi : order_) {
      int m = 0;
      for (int id : gates_[gi].in) m = std::max(m, d[id]);
      d[n_ + gi] = m + 1;
    }
    return d[output_];
  }

  int n_;
  std::vector<BoolGate> gates_;
  int output_;
  std::vector<int> order_;
  int depth_ = 0;
};

/// {"n": <int, optional>, "gates": [{"op": "AND", "in": [0, 1]}, ...], "output": <id>}.
inline BooleanCircuit boolean_circuit_from_json(const nlohmann::json& j, std::optional<int> n_hint = std::nullopt) {
  if (!j.is_object()) throw ParseError("boolean circuit: top-level value must be an object");
  int n = 0;
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) throw ParseError("boolean circuit: \"n\" must be an integer");
    n = j["n"].get<int>();
    if (n_hint && *n_hint != n) throw ParseError("boolean circuit: \"n\" does not match the polynomial");
  } else if (n_hint) {
    n = *n_hint;
  } else {
    throw ParseError("boolean circuit: input count \"n\" is required");
  }
  if (!j.contains("gates") || !j["gates"].is_array()) throw ParseError("boolean circuit: array \"gates\" required");
  if (!j.contains("output") || !j["output"].is_number_integer()) {
    throw ParseError("boolean circuit: integer \"output\" required");
  }
  std::vector<BoolGate> gates;
  for (const auto& g : j["gates"]) {
    if (!g.is_object() || !g.contains("op") || !g["op"].is_string() || !g.contains("in") || !g["in"].is_array()) {
      throw ParseError("boolean circuit: each gate needs string \"op\" and array \"in\"");
    }
    const std::string op = g["op"].get<std::string>();
    BoolGate bg{};
    if (op == "AND") bg.op = BoolOp::And;
    else if (op == "OR") bg.op = BoolOp::Or;
    else if (op == "NOT") bg.op = BoolOp::Not;
    else if (op == "XOR") bg.op = BoolOp::Xor;
    else throw ParseError("boolean circuit: unknown op \"" + op + "\"");
    for (const auto& id : g["in"]) {
      if (!id.is_number_integer()) throw ParseError("boolean circuit: gate inputs must be integer ids");
      bg.in.push_back(id.get<int>());
    }
    gates.push_back(std::move(bg));
  }
  try {
    return BooleanCircuit(n, std::move(gates), j["output"].get<int>());
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

inline BooleanCircuit read_boolean_circuit_file(const std::string& path, std::optional<int> n_hint = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open circuit file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("boolean circuit: invalid JSON: ") + e.what());
  }
  return boolean_circuit_from_json(j, n_hint);
}

}  // namespace iqplab
