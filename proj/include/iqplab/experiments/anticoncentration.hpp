#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iqplab/experiments/report.hpp"
#include "iqplab/gf2poly.hpp"
#include "iqplab/hashing.hpp"
#include "iqplab/rng.hpp"

namespace iqplab {

inline double anticoncentration_bound(double tau) { return (1.0 - tau) * (1.0 - tau) / 3.0; }

struct TauResult {
  double tau = 0.0;
  std::uint64_t hits = 0;  // pairs (f, z) with gap(f_z)^2 >= tau 2^n
  std::uint64_t trials = 0;
  double empirical = 0.0;
  double bound = 0.0;
  double se = 0.0;  // binomial standard error at the bound; 0 for exhaustive runs
  bool exhaustive = false;

  /// Exhaustive: exact comparison. Sampled: empirical + 3 se >= bound.
  bool pass() const {
    if (exhaustive) return 3.0L * hits >= static_cast<long double>((1.0 - tau) * (1.0 - tau)) * trials;
    return empirical + 3.0 * se >= bound;
  }
};

namespace detail {

inline void check_taus(std::span<const double> taus) {
  require(!taus.empty(), "anticoncentration: empty tau list");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) throw ArgumentError("anticoncentration: tau = " + std::to_string(t) + " outside (0, 1)");
  }
}

inline void count_hits(std::vector<TauResult>& out, std::int64_t g, int n) {
  const long double g2 = static_cast<long double>(g) * static_cast<long double>(g);
  for (auto& r : out) {
    ++r.trials;
    if (g2 >= static_cast<long double>(r.tau) * std::ldexp(1.0L, n)) ++r.hits;
  }
}

inline std::vector<TauResult> init_results(std::span<const double> taus, bool exhaustive) {
  std::vector<TauResult> out;
  for (double t : taus) {
    TauResult r;
    r.tau = t;
    r.bound = anticoncentration_bound(t);
    r.exhaustive = exhaustive;
    out.push_back(r);
  }
  return out;
}

inline void finish(std::vector<TauResult>& out) {
  for (auto& r : out) {
    r.empirical = r.trials ? static_cast<double>(r.hits) / static_cast<double>(r.trials) : 0.0;
    r.se = r.exhaustive ? 0.0 : binomial_se(r.bound, r.trials);
  }
}

}  // namespace detail

/// Pr over uniform (f, z) that p_z(f) >= tau / 2^n, from `trials` independent pairs.
inline std::vector<TauResult> anticoncentration_monte_carlo(int n, int degree, std::span<const double> taus,
                                                            std::uint64_t trials, Rng& rng) {
  detail::require(degree == 2 || degree == 3, "anticoncentration: degree must be 2 or 3");
  detail::require(n >= 1, "anticoncentration: n >= 1");
  detail::require(trials >= 1, "anticoncentration: trials >= 1");
  detail::check_taus(taus);
  detail::check_enumerable(n, "anticoncentration");
  auto out = detail::init_results(taus, false);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto f = random_polynomial(n, degree, rng);
    const auto z = BitVector::from_uint(rng.below(std::uint64_t{1} << n), static_cast<std::size_t>(n));
    detail::count_hits(out, gap(shift_by_z(f, z)), n);
  }
  detail::finish(out);
  return out;
}

inline constexpr int kMaxExhaustiveSlots = 20;

/// The exact probability over every polynomial of degree <= `degree` and every z.
inline std::vector<TauResult> anticoncentration_exhaustive(int n, int degree, std::span<const double> taus) {
  detail::require(degree == 2 || degree == 3, "anticoncentration: degree must be 2 or 3");
  detail::require(n >= 1, "anticoncentration: n >= 1");
  detail::check_taus(taus);
  std::vector<Monomial> slots;
  for (int i = 0; i < n; ++i) slots.push_back({i});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) slots.push_back({i, j});
  }
  if (degree == 3) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) slots.push_back({i, j, k});
      }
    }
  }
  if (slots.size() > kMaxExhaustiveSlots) {
    throw ResourceError("anticoncentration: " + std::to_string(slots.size()) + " monomial slots exceed the exhaustive limit " +
                        std::to_string(kMaxExhaustiveSlots));
  }
  auto out = detail::init_results(taus, true);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Gf2Polynomial f(n, 3);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if ((mask >> s) & 1u) f.toggle(slots[s]);
    }
    for (auto g : gap_spectrum(f)) detail::count_hits(out, g, n);
  }
  detail::finish(out);
  return out;
}

inline nlohmann::json to_json(const TauResult& r) {
  return {{"tau", r.tau},         {"hits", r.hits},   {"trials", r.trials}, {"empirical", r.empirical},
          {"bound", r.bound},     {"se", r.se},       {"exhaustive", r.exhaustive}, {"pass", r.pass()}};
}

inline std::string anticoncentration_csv(const std::vector<TauResult>& rs) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rs) {
    rows.push_back({fmt_double(r.tau), fmt_double(r.empirical), fmt_double(r.bound), fmt_double(r.se),
                    std::to_string(r.hits), std::to_string(r.trials), r.pass() ? "1" : "0"});
  }
  return to_csv({"tau", "empirical", "bound", "se", "hits", "trials", "pass"}, rows);
}

/// Sweep over taus. exhaustive = true enumerates every f and z; otherwise `trials` sampled pairs
/// drawn from a stream derived from `seed`. `raw` receives the per-tau results when given.
inline ExperimentReport anticoncentration_sweep(int n, int degree, std::span<const double> taus, std::uint64_t trials,
                                                std::uint64_t seed, bool exhaustive = false,
                                                std::vector<TauResult>* raw = nullptr) {
  ExperimentReport rep;
  rep.experiment = "anticoncentration";
  rep.seed = seed;
  rep.config = {{"n", n},
                {"degree", degree},
                {"taus", std::vector<double>(taus.begin(), taus.end())},
                {"trials", exhaustive ? 0 : trials},
                {"exhaustive", exhaustive},
                {"slack", "3 binomial standard errors at the bound"}};
  std::vector<TauResult> rs;
  if (exhaustive) {
    rs = anticoncentration_exhaustive(n, degree, taus);
  } else {
    Rng rng(derive_seed(seed, "anticoncentration"));
    rs = anticoncentration_monte_carlo(n, degree, taus, trials, rng);
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) {
    arr.push_back(to_json(r));
    rep.check("tau=" + fmt_double(r.tau), r.pass(),
              "empirical " + fmt_double(r.empirical) + " vs bound " + fmt_double(r.bound));
  }
  rep.results["taus"] = arr;
  if (raw) *raw = std::move(rs);
  return rep;
}

}  // namespace iqplab
