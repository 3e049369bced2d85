#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iqplab/counting/approx_count.hpp"
#include "iqplab/counting/randomized.hpp"
#include "json.hpp"

namespace iqplab {

/// xi(alpha) = (2^{1/alpha} - 2^{-1/alpha}) / 2.
inline double xi_for_alpha(int alpha) {
  const double a = std::exp2(1.0 / alpha);
  return (a - 1.0 / a) / 2.0;
}

/// Binary-search probes per estimate: the search runs over {-1, ..., alpha*T+1}.
inline int search_probes(int alpha, int t) { return std::bit_width(static_cast<unsigned>(alpha * t + 1)); }

/// Oracle calls per attempt: the |S| >= 1 query, the search, and the two boundary re-checks.
inline std::uint64_t stockmeyer_query_bound(int alpha, int t, int r) {
  return 1 + static_cast<std::uint64_t>(repetitions(r)) * static_cast<std::uint64_t>(search_probes(alpha, t) + 2);
}

/// Union bound over the search probes: every probe errs with probability <= e^{-r}.
inline double stockmeyer_success_bound(int alpha, int t, int r) {
  return 1.0 - search_probes(alpha, t) * std::exp(-static_cast<double>(r));
}

struct ProbeRecord {
  int k = 0;
  bool accepted = false;
  int rounds = 0;
};

struct StockmeyerEstimate {
  int alpha = 1;
  int randomness_bits = 0;
  bool empty = false;  // S_z is empty and q~ = 0
  int eta = 0;
  double sigma = 0.0;             // 2^{eta/alpha}
  double q_tilde = 0.0;           // sigma / 2^T
  double q_tilde_mid = 0.0;       // sigma (2^{1/a} + 2^{-1/a}) / 2 / 2^T
  double q_tilde_harmonic = 0.0;  // 2 sigma / (2^{1/a} + 2^{-1/a}) / 2^T
  double xi = 0.0;
  std::uint64_t queries = 0;
  int attempts = 0;
  int monotonicity_violations = 0;
  std::vector<ProbeRecord> probes;

  nlohmann::json to_json() const {
    nlohmann::json pr = nlohmann::json::array();
    for (const auto& p : probes) pr.push_back({{"k", p.k}, {"accepted", p.accepted}, {"rounds", p.rounds}});
    return {{"alpha", alpha},
            {"T", randomness_bits},
            {"empty", empty},
            {"eta", eta},
            {"sigma", sigma},
            {"q_tilde", q_tilde},
            {"q_tilde_mid", q_tilde_mid},
            {"q_tilde_harmonic", q_tilde_harmonic},
            {"xi", xi},
            {"queries", queries},
            {"attempts", attempts},
            {"monotonicity_violations", monotonicity_violations},
            {"probes", pr}};
  }
};

struct StockmeyerOptions {
  int max_attempts = 3;
  bool verify_boundary = true;
};

/// Estimates q_z = |S_z| / 2^T from threshold queries on the alpha-fold product S_z^{x alpha}.
///
/// After an exact |S| >= 1 query, eta is located by binary search on the outcomes
/// of A_k (A_{-1} := accept, A_{alpha T + 1} := reject), so that A_{eta-1} accepts
/// and A_eta rejects. With verification on, A_{eta-1} and A_eta are re-run; a
/// disagreement is a monotonicity violation and the whole search is repeated.
inline StockmeyerEstimate stockmeyer_estimate(const RandomizedAlgorithm& alg, std::uint64_t z, int alpha, int r,
                                              CountOracle& oracle, Rng& rng, const StockmeyerOptions& opt = {}) {
  detail::require(alpha >= 1, "stockmeyer_estimate: alpha >= 1");
  detail::require(r >= 1, "stockmeyer_estimate: r >= 1");
  detail::require(opt.max_attempts >= 1, "stockmeyer_estimate: max_attempts >= 1");
  const int t = alg.randomness_bits();
  StockmeyerEstimate est;
  est.alpha = alpha;
  est.randomness_bits = t;
  est.xi = xi_for_alpha(alpha);
  const ProductPredicate pred(t, alpha, alg.level_set(z));

  est.queries = 1;
  if (!oracle.threshold_query(pred, nullptr, 1)) {
    est.empty = true;
    est.attempts = 1;
    return est;
  }
  const int top = alpha * t + 1;
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    est.attempts = attempt;
    est.probes.clear();
    auto probe = [&](int k) {
      const auto res = a_k(pred, k, r, oracle, rng);
      est.probes.push_back({k, res.accepted, res.rounds});
      est.queries += static_cast<std::uint64_t>(res.rounds);
      return res.accepted;
    };
    int lo = -1, hi = top;
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (probe(mid) ? lo : hi) = mid;
    }
    est.eta = hi;
    if (!opt.verify_boundary) break;
    const bool lower_ok = lo < 0 || probe(lo);
    const bool upper_ok = hi >= top || !probe(hi);
    if (lower_ok && upper_ok) break;
    ++est.monotonicity_violations;
  }

  const double a = std::exp2(1.0 / alpha);
  est.sigma = std::exp2(static_cast<double>(est.eta) / alpha);
  est.q_tilde = std::ldexp(est.sigma, -t);
  est.q_tilde_mid = std::ldexp(est.sigma * (a + 1.0 / a) / 2.0, -t);
  est.q_tilde_harmonic = std::ldexp(2.0 * est.sigma / (a + 1.0 / a), -t);
  return est;
}

inline StockmeyerEstimate stockmeyer_estimate(const RandomizedAlgorithm& alg, const BitVector& z, int alpha, int r,
                                              CountOracle& oracle, Rng& rng, const StockmeyerOptions& opt = {}) {
  detail::require(z.size() == static_cast<std::size_t>(alg.output_bits()), "stockmeyer_estimate: z must have N bits");
  return stockmeyer_estimate(alg, z.to_uint(), alpha, r, oracle, rng, opt);
}

/// 2^{eta-1} < count^alpha < 2^{eta+1}, in exact integer arithmetic.
inline bool sandwich_holds(std::uint64_t count, int alpha, int eta) {
  using boost::multiprecision::cpp_int;
  const cpp_int p = boost::multiprecision::pow(cpp_int(count), static_cast<unsigned>(alpha));
  const cpp_int lo = cpp_int(1) << eta;  // 2^{eta-1} < p  <=>  2^eta < 2p
  return lo < 2 * p && p < (cpp_int(1) << (eta + 1));
}

/// |q - est| <= xi q, with a relative tolerance for floating-point rounding.
inline bool within_relative(double q, double est, double xi, double tol = 1e-12) {
  return std::abs(q - est) <= xi * q * (1.0 + tol) + tol * q;
}

}  // namespace iqplab
