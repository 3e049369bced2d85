#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iqplab/error.hpp"

namespace iqplab {

inline constexpr int kStatevectorQubitLimit = 20;

/// Dense statevector; qubit q is bit q of the basis index.
class StateVector {
public:
  using amplitude = std::complex<double>;

  explicit StateVector(int qubits, int limit = kStatevectorQubitLimit) : qubits_(qubits) {
    detail::require(qubits >= 1, "StateVector: need at least one qubit");
    if (qubits > limit) {
      throw ResourceError("statevector: " + std::to_string(qubits) + " qubits exceeds limit " +
                          std::to_string(limit));
    }
    amps_.assign(std::size_t{1} << qubits, amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  int qubits() const noexcept { return qubits_; }
  const std::vector<amplitude>& amplitudes() const noexcept { return amps_; }

  void h(int q) {
    check(q);
    const std::size_t bit = std::size_t{1} << q;
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const amplitude a = amps_[i];
      const amplitude b = amps_[i | bit];
      amps_[i] = s * (a + b);
      amps_[i | bit] = s * (a - b);
    }
  }

  void x(int q) {
    check(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
    }
  }

  void z(int q) { phase_flip_if_all(mask_of({q})); }
  void cz(int a, int b) { phase_flip_if_all(mask_of({a, b})); }
  void ccz(int a, int b, int c) { phase_flip_if_all(mask_of({a, b, c})); }

  void cnot(int control, int target) { controlled_x(mask_of({control}), target); }
  void toffoli(int c1, int c2, int target) { controlled_x(mask_of({c1, c2}), target); }

  /// |x, a> -> e^{i sign*phase(x)} |x, a xor g(x)> where x = index & input_mask.
  /// With sign = +1 this is U, with sign = -1 it is U^dagger.
  void classical_oracle(std::uint64_t input_mask, int target, const std::function<bool(std::uint64_t)>& g,
                        const std::function<double(std::uint64_t)>& phase, int sign = 1) {
    check(target);
    const std::size_t bit = std::size_t{1} << target;
    detail::require((input_mask & bit) == 0, "classical_oracle: target overlaps inputs");
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const std::uint64_t xin = i & input_mask;
      if (phase) {
        const amplitude ph = std::polar(1.0, sign * phase(xin));
        amps_[i] *= ph;
        amps_[i | bit] *= ph;
      }
      if (g(xin)) std::swap(amps_[i], amps_[i | bit]);
    }
  }

  /// Marginal probabilities of the low `width` qubits.
  std::vector<double> marginal_low(int width) const {
    detail::require(width >= 0 && width <= qubits_, "marginal_low: bad width");
    std::vector<double> p(std::size_t{1} << width, 0.0);
    const std::size_t mask = (std::size_t{1} << width) - 1;
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i & mask] += std::norm(amps_[i]);
    return p;
  }

private:
  void check(int q) const { detail::require(q >= 0 && q < qubits_, "qubit index out of range"); }

  std::size_t mask_of(std::initializer_list<int> qs) const {
    std::size_t m = 0;
    for (int q : qs) {
      check(q);
      const std::size_t bit = std::size_t{1} << q;
      detail::require((m & bit) == 0, "gate qubits must be distinct");
      m |= bit;
    }
    return m;
  }

  void phase_flip_if_all(std::size_t mask) {
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & mask) == mask) amps_[i] = -amps_[i];
    }
  }

  void controlled_x(std::size_t controls, int target) {
    const std::size_t bit = mask_of({target});
    detail::require((controls & bit) == 0, "target must differ from controls");
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (!(i & bit) && (i & controls) == controls) std::swap(amps_[i], amps_[i | bit]);
    }
  }

  int qubits_;
  std::vector<amplitude> amps_;
};

}  // namespace iqplab
