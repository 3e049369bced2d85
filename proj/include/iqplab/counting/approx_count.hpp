#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "iqplab/counting/oracle.hpp"
#include "iqplab/hashing.hpp"
#include "iqplab/rng.hpp"

namespace iqplab {

/// Hash-restricted acceptance threshold of a hashed round.
inline constexpr std::uint64_t kHashedThreshold = 48;
/// Largest k answered by an exact |S| >= 2^{k+1} query.
inline constexpr int kExactBranchMax = 5;

/// KL(1/2 || 3/4) = ln(4/3)/2: Chernoff exponent per round for a majority vote
/// over rounds that are correct with probability >= 3/4.
inline double majority_chernoff_rate() { return std::log(4.0 / 3.0) / 2.0; }

/// R(r): smallest odd R with exp(-R * KL(1/2 || 3/4)) <= e^{-r}.
inline int repetitions(int r) {
  detail::require(r >= 1, "repetitions: r >= 1");
  int rounds = static_cast<int>(std::ceil(r / majority_chernoff_rate() - 1e-12));
  if (rounds % 2 == 0) ++rounds;
  return rounds;
}

namespace detail {

inline void check_k(const MembershipPredicate& pred, int k) {
  if (k < 0 || k > pred.width()) {
    throw ArgumentError("A_k: k = " + std::to_string(k) + " outside [0, n] with n = " + std::to_string(pred.width()));
  }
}

}  // namespace detail

/// One round of A_k. k <= 5: exact query |S| >= 2^{k+1}. k >= 6: draw a Toeplitz
/// hasher with m = k - 5 output bits and ask whether |{x in S : h(x) = 0^m}| >= 48.
/// k = 0 is accepted as an extension (exact query |S| >= 2).
inline bool a_k_round(const MembershipPredicate& pred, int k, CountOracle& oracle, Rng& rng) {
  detail::check_k(pred, k);
  if (k <= kExactBranchMax) return oracle.threshold_query(pred, nullptr, std::uint64_t{1} << (k + 1));
  const std::uint64_t seed = rng.next_u64();
  Rng hrng(seed);
  const auto h = sample_hasher(pred.width(), k - kExactBranchMax, hrng);
  return oracle.threshold_query(pred, &h, kHashedThreshold, seed);
}

struct AkResult {
  bool accepted = false;
  int rounds = 0;
  int accepts = 0;
};

/// Majority vote over R(r) rounds, stopping as soon as the vote is decided.
/// The exact branch (k <= 5) is deterministic and runs a single round.
inline AkResult a_k(const MembershipPredicate& pred, int k, int r, CountOracle& oracle, Rng& rng) {
  detail::check_k(pred, k);
  AkResult res;
  if (k <= kExactBranchMax) {
    res.accepted = a_k_round(pred, k, oracle, rng);
    res.rounds = 1;
    res.accepts = res.accepted;
    return res;
  }
  const int total = repetitions(r);
  const int majority = total / 2 + 1;
  while (res.accepts < majority && res.rounds - res.accepts < majority) {
    res.accepts += a_k_round(pred, k, oracle, rng);
    ++res.rounds;
  }
  res.accepted = res.accepts >= majority;
  return res;
}

}  // namespace iqplab
