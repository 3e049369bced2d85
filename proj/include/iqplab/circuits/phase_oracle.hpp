#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "iqplab/circuits/boolean_circuit.hpp"
#include "iqplab/circuits/cnf.hpp"
#include "iqplab/circuits/distribution.hpp"
#include "iqplab/circuits/iqp.hpp"
#include "iqplab/circuits/reversible.hpp"
#include "iqplab/circuits/statevector.hpp"
#include "iqplab/gf2poly.hpp"

namespace iqplab {

namespace detail {

inline void check_phase_polynomial(const Gf2Polynomial& f, int g_inputs) {
  require(f.degree() <= 2, "phase construction: f must have degree <= 2 (only Z and CZ are applied)");
  require(f.n() == g_inputs, "phase construction: f and g must have the same number of inputs");
  check_enumerable(f.n(), "phase distribution");
}

/// gaps[z] = sum_x (-1)^{f(x) + g(x) + x.z}, with g given pointwise.
template <typename G>
DistributionTable phase_distribution(const Gf2Polynomial& f, G&& g) {
  auto table = truth_table(f);
  const std::uint64_t entries = std::uint64_t{1} << f.n();
  for (std::uint64_t x = 0; x < entries; ++x) {
    if (g(x)) table[x >> 6] ^= std::uint64_t{1} << (x & 63);
  }
  return DistributionTable(f.n(), sign_spectrum(table, f.n()));
}

}  // namespace detail

/// p_z(f+g) = gap(g + f_z)^2 / 4^n for a Boolean circuit g and degree-2 f.
inline DistributionTable boolean_phase_distribution(const Gf2Polynomial& f, const BooleanCircuit& g) {
  detail::check_phase_polynomial(f, g.n());
  return detail::phase_distribution(f, [&](std::uint64_t x) { return g.evaluate(x); });
}

/// Same contract with g a 3-CNF evaluated clause by clause.
inline DistributionTable cnf_phase_distribution(const Gf2Polynomial& f, const Cnf3& g) {
  detail::check_phase_polynomial(f, g.n());
  return detail::phase_distribution(f, [&](std::uint64_t x) { return g.evaluate(x); });
}

/// Statevector run of the seven-step construction with a Boolean-function oracle
/// U|x>|0> = e^{i h(x)} |x>|g(x)> on n+1 qubits. Returns the distribution of the
/// first n qubits. `h` may be empty (zero phase).
inline std::vector<double> simulate_boolean_phase_construction(const Gf2Polynomial& f, const BooleanCircuit& g,
                                                               const std::function<double(std::uint64_t)>& h = {}) {
  detail::check_phase_polynomial(f, g.n());
  const int n = f.n();
  StateVector psi(n + 1);
  const std::uint64_t inputs = (std::uint64_t{1} << n) - 1;
  auto eval = [&](std::uint64_t x) { return g.evaluate(x); };
  for (int q = 0; q < n; ++q) psi.h(q);
  psi.classical_oracle(inputs, n, eval, h, +1);
  psi.z(n);
  psi.classical_oracle(inputs, n, eval, h, -1);
  apply_diagonal_layer(psi, build_iqp(f).gates);
  for (int q = 0; q < n; ++q) psi.h(q);
  return psi.marginal_low(n);
}

/// Statevector run of the Clifford+Toffoli construction for a 3-CNF on n + (3m-1) qubits:
/// H on inputs, U = compile_cnf(g), Z on the output wire, U^dagger, Z/CZ for f, H on inputs.
inline std::vector<double> simulate_cnf_construction(const Gf2Polynomial& f, const Cnf3& g) {
  detail::check_phase_polynomial(f, g.n());
  const auto u = compile_cnf(g);
  const int n = f.n();
  StateVector psi(u.width());
  auto apply = [&psi](const RevGate& gate) {
    switch (gate.kind) {
      case RevKind::X: psi.x(gate.wires[0]); break;
      case RevKind::Cnot: psi.cnot(gate.wires[0], gate.wires[1]); break;
      case RevKind::Toffoli: psi.toffoli(gate.wires[0], gate.wires[1], gate.wires[2]); break;
    }
  };
  for (int q = 0; q < n; ++q) psi.h(q);
  for (const auto& gate : u.gates) apply(gate);
  psi.z(u.output);
  for (auto it = u.gates.rbegin(); it != u.gates.rend(); ++it) apply(*it);
  apply_diagonal_layer(psi, build_iqp(f).gates);
  for (int q = 0; q < n; ++q) psi.h(q);
  return psi.marginal_low(n);
}

}  // namespace iqplab
