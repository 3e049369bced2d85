#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iqplab/circuits/distribution.hpp"
#include "iqplab/counting/randomized.hpp"
#include "iqplab/error.hpp"
#include "iqplab/rng.hpp"

namespace iqplab {

enum class AdversaryKind { Exact, AdditiveNoise, Sparsified, Uniform };

inline std::string to_string(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::Exact: return "exact";
    case AdversaryKind::AdditiveNoise: return "additive-noise";
    case AdversaryKind::Sparsified: return "sparsified";
    case AdversaryKind::Uniform: return "uniform";
  }
  return "unknown";
}

inline AdversaryKind parse_adversary_kind(const std::string& s) {
  if (s == "exact") return AdversaryKind::Exact;
  if (s == "additive-noise") return AdversaryKind::AdditiveNoise;
  if (s == "sparsified") return AdversaryKind::Sparsified;
  if (s == "uniform") return AdversaryKind::Uniform;
  throw ArgumentError("unknown adversary kind '" + s + "' (exact, additive-noise, sparsified, uniform)");
}

/// sum_z |p_z - q_z|, accumulated in long double.
inline double l1_distance(std::span<const double> p, std::span<const double> q) {
  detail::require(p.size() == q.size(), "l1_distance: size mismatch");
  long double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(static_cast<long double>(p[i]) - q[i]);
  return static_cast<double>(s);
}

/// Output distribution q of a mock sampler, with its l1 distance to the true p.
struct MockSampler {
  AdversaryKind kind = AdversaryKind::Exact;
  double declared_eps = 0.0;
  int n = 0;
  std::vector<double> q;
  double l1 = 0.0;
};

inline constexpr double kBudgetTolerance = 1e-12;

/// Checks that q is a distribution within the declared l1 budget of p.
inline MockSampler make_mock_sampler(AdversaryKind kind, const DistributionTable& base, std::vector<double> q,
                                     double declared_eps) {
  detail::require(q.size() == base.size(), "mock sampler: q must have 2^n entries");
  long double total = 0;
  for (double x : q) {
    detail::require(x >= 0.0 && std::isfinite(x), "mock sampler: q has a negative or non-finite entry");
    total += x;
  }
  detail::require(std::fabs(static_cast<double>(total) - 1.0) <= 1e-9, "mock sampler: q does not sum to 1");
  const auto p = base.probs();
  const double l1 = l1_distance(p, q);
  if (l1 > declared_eps + kBudgetTolerance) {
    throw ArgumentError("mock sampler: sum |p - q| = " + std::to_string(l1) + " exceeds declared budget " +
                        std::to_string(declared_eps));
  }
  return {kind, declared_eps, base.n, std::move(q), l1};
}

namespace detail {

/// Moves mass `m` off donors (proportional reduction) onto receivers (random weights).
inline std::vector<double> additive_noise(const std::vector<double>& p, double m, Rng& rng) {
  const std::size_t size = p.size();
  std::vector<char> donor(size);
  for (auto& d : donor) d = rng.bit();
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = size; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  long double donor_mass = 0;
  for (std::size_t z = 0; z < size; ++z) {
    if (donor[z]) donor_mass += p[z];
  }
  for (std::size_t z : order) {
    if (donor_mass >= m) break;
    if (!donor[z] && p[z] > 0.0) {
      donor[z] = 1;
      donor_mass += p[z];
    }
  }
  std::vector<double> weight(size, 0.0);
  long double weight_sum = 0;
  for (std::size_t z = 0; z < size; ++z) {
    if (!donor[z]) weight_sum += weight[z] = 0.5 + rng.uniform01();
  }
  if (m > 0.0 && (donor_mass < m || weight_sum == 0)) {
    throw ArgumentError("additive-noise: budget too large for this distribution");
  }
  std::vector<double> q = p;
  if (m == 0.0) return q;
  const long double keep = 1.0L - m / donor_mass;
  for (std::size_t z = 0; z < size; ++z) {
    q[z] = donor[z] ? static_cast<double>(p[z] * keep) : static_cast<double>(p[z] + m * weight[z] / weight_sum);
  }
  return q;
}

/// Zeroes the smallest positive entries (the last one partially) until mass m is removed,
/// then scales the untouched positive entries up by the removed mass.
inline std::vector<double> sparsified(const std::vector<double>& p, double m) {
  std::vector<std::size_t> order;
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (p[z] > 0.0) order.push_back(z);
  }
  std::stable_sort(order.begin(), order.end(), [&p](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> q = p;
  if (m == 0.0) return q;
  long double removed = 0;
  std::size_t touched = 0;
  for (; touched < order.size() && removed < m; ++touched) {
    const std::size_t z = order[touched];
    const long double take = std::min<long double>(p[z], m - removed);
    q[z] = static_cast<double>(p[z] - take);
    removed += take;
  }
  long double receiver_mass = 0;
  for (std::size_t i = touched; i < order.size(); ++i) receiver_mass += p[order[i]];
  if (receiver_mass == 0) throw ArgumentError("sparsified: budget too large for this distribution");
  const long double scale = 1.0L + removed / receiver_mass;
  for (std::size_t i = touched; i < order.size(); ++i) q[order[i]] = static_cast<double>(p[order[i]] * scale);
  return q;
}

}  // namespace detail

/// Mock adversary for a true distribution p. exact: q = p. additive-noise: random signed
/// perturbation with sum |p - q| = eps. sparsified: smallest entries zeroed and their mass
/// redistributed, sum |p - q| = eps. uniform: q = 2^{-n}.
inline MockSampler build_adversary(AdversaryKind kind, const DistributionTable& base, double eps, Rng& rng) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ArgumentError("build_adversary: eps must be >= 0");
  if (eps > 2.0) throw ArgumentError("build_adversary: eps > 2 exceeds any l1 distance between distributions");
  const auto p = base.probs();
  std::vector<double> q;
  switch (kind) {
    case AdversaryKind::Exact: q = p; break;
    case AdversaryKind::AdditiveNoise: q = detail::additive_noise(p, eps / 2.0, rng); break;
    case AdversaryKind::Sparsified: q = detail::sparsified(p, eps / 2.0); break;
    case AdversaryKind::Uniform: q.assign(p.size(), std::ldexp(1.0, -base.n)); break;
  }
  return make_mock_sampler(kind, base, std::move(q), eps);
}

/// Integer level-set sizes c_z summing to 2^T that approximate q_z 2^T.
struct DyadicRealization {
  int randomness_bits = 0;
  int mantissa_bits = 0;  // 0: any integer count; otherwise every count has <= this many significant bits
  int output_bits = 0;
  std::vector<std::uint64_t> counts;
  double l1_error = 0.0;  // sum |q_z - c_z / 2^T|

  RandomizedAlgorithm algorithm() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> nz;
    for (std::size_t z = 0; z < counts.size(); ++z) {
      if (counts[z]) nz.emplace_back(z, counts[z]);
    }
    return aligned_block_algorithm(randomness_bits, output_bits, nz);
  }
};

namespace detail {

inline bool representable(std::uint64_t c, int mb) {
  return mb == 0 || c == 0 || std::bit_width(c) - std::countr_zero(c) <= static_cast<unsigned>(mb);
}

inline std::uint64_t step_for(std::uint64_t c, int mb) {
  const int bw = static_cast<int>(std::bit_width(c));
  return std::uint64_t{1} << std::max(0, bw - mb);
}

inline std::uint64_t round_representable(long double x, int mb) {
  if (mb == 0 || x < 1.0L) return static_cast<std::uint64_t>(std::llround(x));
  const std::uint64_t step = step_for(static_cast<std::uint64_t>(x), mb);
  return static_cast<std::uint64_t>(std::llround(x / step)) * step;
}

inline std::uint64_t next_up(std::uint64_t c, int mb) { return mb == 0 || c == 0 ? c + 1 : c + step_for(c, mb); }

inline std::uint64_t next_down(std::uint64_t c, int mb) {
  if (mb == 0) return c - 1;
  const std::uint64_t step = step_for(c - 1, mb);
  return (c - 1) / step * step;
}

}  // namespace detail

/// Rounds q_z 2^T to the nearest representable count, then repairs the total to 2^T by
/// greedy single-entry moves, each chosen to leave the smallest relative error on the moved entry.
/// Entries with q_z = 0 only absorb repair when nothing else can.
inline DyadicRealization realize_dyadic(std::span<const double> q, int randomness_bits, int mantissa_bits = 0) {
  detail::require(randomness_bits >= 1 && randomness_bits <= kMaxRandomnessBits, "realize_dyadic: 1 <= T <= 24");
  detail::require(mantissa_bits >= 0 && mantissa_bits <= 62, "realize_dyadic: mantissa_bits in [0, 62]");
  detail::require(!q.empty() && std::has_single_bit(q.size()) && q.size() <= (std::size_t{1} << 24),
                  "realize_dyadic: q needs 2^N entries");
  DyadicRealization out;
  out.randomness_bits = randomness_bits;
  out.mantissa_bits = mantissa_bits;
  out.output_bits = std::max(1, static_cast<int>(std::countr_zero(q.size())));
  const long double scale = std::ldexp(1.0L, randomness_bits);
  std::vector<long double> target(q.size());
  out.counts.resize(q.size());
  std::int64_t deficit = static_cast<std::int64_t>(1) << randomness_bits;
  for (std::size_t z = 0; z < q.size(); ++z) {
    detail::require(q[z] >= 0.0, "realize_dyadic: negative probability");
    target[z] = q[z] * scale;
    out.counts[z] = detail::round_representable(target[z], mantissa_bits);
    deficit -= static_cast<std::int64_t>(out.counts[z]);
  }
  const std::size_t max_moves = 64 * q.size() + 1024;
  for (std::size_t moves = 0; deficit != 0; ++moves) {
    if (moves > max_moves) throw ResourceError("realize_dyadic: total repair did not converge");
    const bool up = deficit > 0;
    const std::uint64_t need = static_cast<std::uint64_t>(up ? deficit : -deficit);
    std::size_t best = q.size();
    bool best_fits = false;
    std::uint64_t best_step = 0;
    long double best_cost = 0;
    auto consider = [&](std::size_t z, std::uint64_t next) {
      const std::uint64_t c = out.counts[z];
      const std::uint64_t step = up ? next - c : c - next;
      const bool fits = step <= need;
      const long double cost =
          target[z] > 0 ? std::fabs(target[z] - next) / target[z] : std::numeric_limits<long double>::infinity();
      bool better;
      if (best == q.size()) better = true;
      else if (fits != best_fits) better = fits;
      else if (fits) better = cost < best_cost;
      else better = step < best_step || (step == best_step && cost < best_cost);
      if (better) {
        best = z;
        best_fits = fits;
        best_step = step;
        best_cost = cost;
      }
    };
    for (std::size_t z = 0; z < q.size(); ++z) {
      const std::uint64_t c = out.counts[z];
      if (!up && c == 0) continue;
      consider(z, up ? detail::next_up(c, mantissa_bits) : detail::next_down(c, mantissa_bits));
      if ((up || c >= need) && detail::representable(up ? c + need : c - need, mantissa_bits)) {
        consider(z, up ? c + need : c - need);
      }
    }
    if (best == q.size()) throw ResourceError("realize_dyadic: no entry can absorb the total repair");
    out.counts[best] = up ? out.counts[best] + best_step : out.counts[best] - best_step;
    deficit += up ? -static_cast<std::int64_t>(best_step) : static_cast<std::int64_t>(best_step);
  }
  long double err = 0;
  for (std::size_t z = 0; z < q.size(); ++z) err += std::fabs(q[z] - out.counts[z] / scale);
  out.l1_error = static_cast<double>(err);
  return out;
}

}  // namespace iqplab
