#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "iqplab/circuits/distribution.hpp"
#include "iqplab/experiments/adversary.hpp"

namespace iqplab {

struct MarkovTail {
  std::uint64_t count = 0;  // z with |p_z - q_z| >= threshold
  std::uint64_t size = 0;   // 2^n
  double fraction = 0.0;
  double threshold = 0.0;   // eps / (2^n delta)
  double l1 = 0.0;
};

/// Fraction of z with |p_z - q_z| >= eps / (2^n delta). Requires sum |p - q| <= eps.
inline MarkovTail markov_tail(std::span<const double> p, std::span<const double> q, double eps, double delta) {
  detail::require(p.size() == q.size(), "markov_tail_check: p and q differ in size");
  detail::require(!p.empty() && std::has_single_bit(p.size()), "markov_tail_check: distributions need 2^n entries");
  detail::require(eps > 0.0 && std::isfinite(eps), "markov_tail_check: eps must be > 0");
  detail::require(delta > 0.0 && std::isfinite(delta), "markov_tail_check: delta must be > 0");
  MarkovTail out;
  out.size = p.size();
  out.l1 = l1_distance(p, q);
  if (out.l1 > eps) {
    throw ArgumentError("markov_tail_check: sum |p - q| = " + std::to_string(out.l1) + " exceeds eps = " +
                        std::to_string(eps));
  }
  out.threshold = eps / (static_cast<double>(p.size()) * delta);
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (std::fabs(p[z] - q[z]) >= out.threshold) ++out.count;
  }
  out.fraction = static_cast<double>(out.count) / static_cast<double>(out.size);
  return out;
}

inline MarkovTail markov_tail_check(const DistributionTable& p, std::span<const double> q, double eps, double delta) {
  const auto probs = p.probs();
  return markov_tail(probs, q, eps, delta);
}

}  // namespace iqplab
