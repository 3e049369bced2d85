#pragma once

#include <cstdint>
#include <vector>

#include "iqplab/error.hpp"

namespace iqplab {

/// Exact output distribution p_z = gaps[z]^2 / 4^n over z in {0,1}^n.
struct DistributionTable {
  int n = 0;
  std::vector<std::int64_t> gaps;

  DistributionTable() = default;
  DistributionTable(int width, std::vector<std::int64_t> g) : n(width), gaps(std::move(g)) {
    detail::require(width >= 0 && width < 32, "DistributionTable: unsupported width");
    detail::require(gaps.size() == (std::size_t{1} << width), "DistributionTable: need 2^n gap entries");
  }

  std::size_t size() const noexcept { return gaps.size(); }

  double prob(std::size_t z) const {
    const double g = static_cast<double>(gaps[z]);
    return g * g / static_cast<double>(std::uint64_t{1} << (2 * n));
  }

  std::vector<double> probs() const {
    std::vector<double> p(gaps.size());
    for (std::size_t z = 0; z < gaps.size(); ++z) p[z] = prob(z);
    return p;
  }

  /// Sum of gaps^2 in exact integer arithmetic.
  __uint128_t squared_sum() const noexcept {
    __uint128_t s = 0;
    for (auto g : gaps) s += static_cast<__uint128_t>(g < 0 ? -g : g) * static_cast<__uint128_t>(g < 0 ? -g : g);
    return s;
  }

  /// Sum_z p_z = 1 exactly, i.e. sum gaps^2 = 4^n.
  bool normalized() const noexcept { return squared_sum() == (static_cast<__uint128_t>(1) << (2 * n)); }

  bool gaps_even() const noexcept {
    if (n == 0) return true;
    for (auto g : gaps) {
      if (g % 2 != 0) return false;
    }
    return true;
  }
};

}  // namespace iqplab
