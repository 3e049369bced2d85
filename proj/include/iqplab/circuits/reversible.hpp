#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iqplab/bitvec.hpp"
#include "iqplab/circuits/cnf.hpp"
#include "iqplab/error.hpp"

namespace iqplab {

enum class RevKind { X, Cnot, Toffoli };

struct RevGate {
  RevKind kind;
  std::array<int, 3> wires{-1, -1, -1};  // controls first, target last used slot

  int arity() const noexcept { return kind == RevKind::X ? 1 : kind == RevKind::Cnot ? 2 : 3; }
  int target() const noexcept { return wires[arity() - 1]; }
};

/// Wires 0..n-1 carry x, wires n..n+ancillas-1 start in |0>.
struct ReversibleCircuit {
  int inputs = 0;
  int ancillas = 0;
  std::vector<RevGate> gates;
  int output = 0;

  int width() const noexcept { return inputs + ancillas; }

  std::size_t toffoli_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [](const RevGate& g) { return g.kind == RevKind::Toffoli; }));
  }

  void validate() const {
    detail::require(output >= 0 && output < width(), "ReversibleCircuit: output wire out of range");
    for (const auto& g : gates) {
      for (int a = 0; a < g.arity(); ++a) {
        detail::require(g.wires[a] >= 0 && g.wires[a] < width(), "ReversibleCircuit: wire out of range");
        for (int b = 0; b < a; ++b) detail::require(g.wires[a] != g.wires[b], "ReversibleCircuit: gate wires must differ");
      }
    }
  }

  /// Runs the gate list on a basis state.
  BitVector run(BitVector state) const {
    detail::require(state.size() == static_cast<std::size_t>(width()), "ReversibleCircuit::run: width mismatch");
    for (const auto& g : gates) apply(g, state);
    return state;
  }

  BitVector run_inverse(BitVector state) const {
    detail::require(state.size() == static_cast<std::size_t>(width()), "ReversibleCircuit::run: width mismatch");
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) apply(*it, state);
    return state;
  }

  /// Basis input |x>|0^ancillas>, x packed with bit i = x_i.
  BitVector run_on_input(std::uint64_t x) const {
    BitVector s(static_cast<std::size_t>(width()));
    for (int i = 0; i < inputs; ++i) s.set(static_cast<std::size_t>(i), (x >> i) & 1u);
    return run(std::move(s));
  }

  static void apply(const RevGate& g, BitVector& s) {
    switch (g.kind) {
      case RevKind::X: s.flip(g.wires[0]); break;
      case RevKind::Cnot:
        if (s.get(g.wires[0])) s.flip(g.wires[1]);
        break;
      case RevKind::Toffoli:
        if (s.get(g.wires[0]) && s.get(g.wires[1])) s.flip(g.wires[2]);
        break;
    }
  }
};

namespace detail {

struct CnfCompiler {
  std::vector<RevGate> gates;

  void x(int w) { gates.push_back({RevKind::X, {w, -1, -1}}); }
  void cnot(int c, int t) { gates.push_back({RevKind::Cnot, {c, t, -1}}); }
  void toffoli(int a, int b, int t) { gates.push_back({RevKind::Toffoli, {a, b, t}}); }

  /// out ^= (a OR b) on a fresh |0> target via De Morgan: X-conjugated controls, one Toffoli, X on out.
  /// A wire is "positive" when it holds the operand itself and needs an X to hold its negation.
  void or_gate(int a, bool a_positive, int b, bool b_positive, int out) {
    if (a_positive) x(a);
    if (b_positive) x(b);
    toffoli(a, b, out);
    if (a_positive) x(a);
    if (b_positive) x(b);
    x(out);
  }

  /// out ^= (l1 OR l2) where both literals read the same wire w. `one` is a clean
  /// ancilla borrowed as a constant-1 control.
  void or_same_wire(int w, bool l1_negated, bool l2_negated, int one, int out) {
    x(one);
    if (l1_negated) x(w);
    toffoli(w, one, out);  // out = l1
    if (l1_negated) x(w);
    x(one);
    if (l1_negated != l2_negated) {
      // l1 OR NOT l1 = 1: out = l1 xor l2
      if (l2_negated) x(w);
      cnot(w, out);
      if (l2_negated) x(w);
    }
  }
};

}  // namespace detail

/// U(|x>|0^xi>) = |...>: ancillas hold the 2m clause ORs and the m-1 AND chain, output carries g(x).
/// Uses exactly 3m-1 Toffolis and xi = 3m-1 ancillas.
inline ReversibleCircuit compile_cnf(const Cnf3& g) {
  const int n = g.n();
  const int m = g.m();
  ReversibleCircuit rc;
  rc.inputs = n;
  rc.ancillas = 3 * m - 1;
  detail::CnfCompiler cc;
  std::vector<int> clause_out;
  for (int j = 0; j < m; ++j) {
    Clause c = g.clauses()[j];
    // Put two distinct variables first when possible.
    if (c[0].var == c[1].var) {
      if (c[2].var != c[0].var) std::swap(c[1], c[2]);
    }
    const int o1 = n + 2 * j;
    const int o2 = n + 2 * j + 1;
    if (c[0].var != c[1].var) {
      cc.or_gate(c[0].var, !c[0].negated, c[1].var, !c[1].negated, o1);
    } else {
      cc.or_same_wire(c[0].var, c[0].negated, c[1].negated, o2, o1);
    }
    cc.or_gate(o1, true, c[2].var, !c[2].negated, o2);
    clause_out.push_back(o2);
  }
  int acc = clause_out[0];
  for (int j = 1; j < m; ++j) {
    const int a = n + 2 * m + (j - 1);
    cc.toffoli(acc, clause_out[j], a);
    acc = a;
  }
  rc.gates = std::move(cc.gates);
  rc.output = acc;
  rc.validate();
  return rc;
}

/// T gates of the full construction: U and U^dagger, 7 per Toffoli each, i.e. 14(3m-1).
inline long long t_count(const Cnf3& g) { return 14LL * (3LL * g.m() - 1); }

}  // namespace iqplab
