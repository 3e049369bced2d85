#pragma once

#include <array>
#include <complex>
#include <vector>

#include "iqplab/circuits/distribution.hpp"
#include "iqplab/circuits/statevector.hpp"
#include "iqplab/error.hpp"
#include "iqplab/gf2poly.hpp"

namespace iqplab {

class UnsupportedGateError : public ArgumentError {
public:
  using ArgumentError::ArgumentError;
};

enum class DiagonalKind { Z = 1, CZ = 2, CCZ = 3 };

struct DiagonalGate {
  DiagonalKind kind;
  std::array<int, 3> qubits{-1, -1, -1};

  int arity() const noexcept { return static_cast<int>(kind); }
  bool operator==(const DiagonalGate&) const = default;
};

/// H^n, then the diagonal layer, then H^n; measured in the computational basis.
struct IqpCircuit {
  int n = 0;
  std::vector<DiagonalGate> gates;

  void validate() const {
    detail::require(n >= 1, "IqpCircuit: n >= 1");
    for (const auto& g : gates) {
      for (int a = 0; a < g.arity(); ++a) {
        detail::require(g.qubits[a] >= 0 && g.qubits[a] < n, "IqpCircuit: qubit index out of range");
        for (int b = 0; b < a; ++b) detail::require(g.qubits[a] != g.qubits[b], "IqpCircuit: repeated qubit in gate");
      }
    }
  }
};

/// One Z / CZ / CCZ per linear / quadratic / cubic monomial.
inline IqpCircuit build_iqp(const Gf2Polynomial& f) {
  if (f.degree() > 3) throw UnsupportedGateError("build_iqp: only Z, CZ and CCZ gates (degree <= 3) are supported");
  IqpCircuit c{f.n(), {}};
  c.gates.reserve(f.size());
  for (const auto& m : f.monomials()) {
    DiagonalGate g{static_cast<DiagonalKind>(m.size())};
    for (std::size_t i = 0; i < m.size(); ++i) g.qubits[i] = m[i];
    c.gates.push_back(g);
  }
  return c;
}

inline void apply_diagonal_layer(StateVector& psi, const std::vector<DiagonalGate>& gates) {
  for (const auto& g : gates) {
    switch (g.kind) {
      case DiagonalKind::Z: psi.z(g.qubits[0]); break;
      case DiagonalKind::CZ: psi.cz(g.qubits[0], g.qubits[1]); break;
      case DiagonalKind::CCZ: psi.ccz(g.qubits[0], g.qubits[1], g.qubits[2]); break;
    }
  }
}

/// Amplitudes of H^n D H^n |0^n>.
inline std::vector<std::complex<double>> simulate_statevector(const IqpCircuit& c,
                                                              int limit = kStatevectorQubitLimit) {
  c.validate();
  StateVector psi(c.n, limit);
  for (int q = 0; q < c.n; ++q) psi.h(q);
  apply_diagonal_layer(psi, c.gates);
  for (int q = 0; q < c.n; ++q) psi.h(q);
  return psi.amplitudes();
}

/// p_z(f) = gap(f_z)^2 / 4^n for every z.
inline DistributionTable iqp_distribution(const Gf2Polynomial& f) {
  return DistributionTable(f.n(), gap_spectrum(f));
}

}  // namespace iqplab
