#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "iqplab/bitvec.hpp"
#include "iqplab/counting/gf2_basis.hpp"
#include "iqplab/error.hpp"
#include "iqplab/rng.hpp"

namespace iqplab {

inline constexpr int kMaxRandomnessBits = 24;

/// Deterministic map C: {0,1}^T -> {0,1}^N (T <= 24, N <= 64), words packed with bit i = coordinate i.
class RandomizedAlgorithm {
public:
  using Map = std::function<std::uint64_t(std::uint64_t)>;

  RandomizedAlgorithm(int t, int n, Map c, std::string name = "custom")
      : t_(t), n_(n), c_(std::move(c)), name_(std::move(name)) {
    detail::require(t >= 1 && t <= kMaxRandomnessBits, "RandomizedAlgorithm: 1 <= T <= 24");
    detail::require(n >= 1 && n <= 64, "RandomizedAlgorithm: 1 <= N <= 64");
    detail::require(static_cast<bool>(c_), "RandomizedAlgorithm: empty map");
  }

  static RandomizedAlgorithm from_table(int t, int n, std::vector<std::uint64_t> table, std::string name = "table") {
    detail::require(t >= 1 && t <= kMaxRandomnessBits, "RandomizedAlgorithm: 1 <= T <= 24");
    detail::require(table.size() == (std::size_t{1} << t), "RandomizedAlgorithm: table needs 2^T entries");
    const std::uint64_t limit = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (auto z : table) detail::require(z <= limit, "RandomizedAlgorithm: table output exceeds N bits");
    auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(table));
    RandomizedAlgorithm a(t, n, [shared](std::uint64_t r) { return (*shared)[r]; }, std::move(name));
    a.cache_->table = shared;
    return a;
  }

  int randomness_bits() const noexcept { return t_; }
  int output_bits() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }

  std::uint64_t operator()(std::uint64_t r) const { return c_(r); }
  BitVector operator()(const BitVector& r) const {
    detail::require(r.size() == static_cast<std::size_t>(t_), "RandomizedAlgorithm: r must have T bits");
    return BitVector::from_uint(c_(r.to_uint()), static_cast<std::size_t>(n_));
  }

  /// C evaluated on every r, computed once.
  const std::vector<std::uint64_t>& table() const {
    std::call_once(cache_->table_once, [this] {
      if (cache_->table) return;
      std::vector<std::uint64_t> t(std::size_t{1} << t_);
      for (std::uint64_t r = 0; r < t.size(); ++r) t[r] = c_(r);
      cache_->table = std::make_shared<const std::vector<std::uint64_t>>(std::move(t));
    });
    return *cache_->table;
  }

  /// S_z = {r : C(r) = z}, sorted.
  std::vector<std::uint64_t> level_set(std::uint64_t z) const {
    std::vector<std::uint64_t> out;
    const auto& t = table();
    for (std::uint64_t r = 0; r < t.size(); ++r) {
      if (t[r] == z) out.push_back(r);
    }
    return out;
  }

  /// z -> |S_z| over the range of C.
  std::map<std::uint64_t, std::uint64_t> histogram() const {
    std::map<std::uint64_t, std::uint64_t> h;
    for (auto z : table()) ++h[z];
    return h;
  }

private:
  struct Cache {
    std::once_flag table_once;
    std::shared_ptr<const std::vector<std::uint64_t>> table;
  };

  int t_;
  int n_;
  Map c_;
  std::string name_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// q_z = count / 2^T exactly.
struct ExactProbability {
  std::uint64_t count = 0;
  int randomness_bits = 0;

  double value() const { return std::ldexp(static_cast<double>(count), -randomness_bits); }
  bool operator==(const ExactProbability&) const = default;
};

inline ExactProbability exact_probability(const RandomizedAlgorithm& alg, std::uint64_t z) {
  const auto& t = alg.table();
  return {static_cast<std::uint64_t>(std::count(t.begin(), t.end(), z)), alg.randomness_bits()};
}

inline ExactProbability exact_probability(const RandomizedAlgorithm& alg, const BitVector& z) {
  detail::require(z.size() == static_cast<std::size_t>(alg.output_bits()), "exact_probability: z must have N bits");
  return exact_probability(alg, z.to_uint());
}

inline RandomizedAlgorithm constant_algorithm(int t, int n, std::uint64_t value = 0) {
  return RandomizedAlgorithm(t, n, [value](std::uint64_t) { return value; }, "constant");
}

inline RandomizedAlgorithm identity_algorithm(int t) {
  return RandomizedAlgorithm(t, t, [](std::uint64_t r) { return r; }, "identity");
}

/// Every C(r) drawn independently and uniformly from {0,1}^N.
inline RandomizedAlgorithm random_function_algorithm(int t, int n, Rng& rng) {
  detail::require(n >= 1 && n <= 64, "random_function_algorithm: 1 <= N <= 64");
  std::vector<std::uint64_t> table(std::size_t{1} << t);
  for (auto& z : table) z = n == 64 ? rng.next_u64() : rng.below(std::uint64_t{1} << n);
  return RandomizedAlgorithm::from_table(t, n, std::move(table), "random_function");
}

/// C(r) = F(M r) with M a random surjective linear map F_2^T -> F_2^s and F a random
/// function on {0,1}^s. Every level set is a union of cosets of ker M.
inline RandomizedAlgorithm coset_sampler_algorithm(int t, int n, int s, Rng& rng) {
  detail::require(s >= 0 && s <= t && s <= 20, "coset_sampler_algorithm: 0 <= s <= min(T, 20)");
  std::vector<std::uint64_t> rows;
  Gf2Basis<std::uint64_t> check;
  while (static_cast<int>(rows.size()) < s) {
    const std::uint64_t row = rng.below(std::uint64_t{1} << t);
    if (check.insert(row)) rows.push_back(row);
  }
  std::vector<std::uint64_t> f(std::size_t{1} << s);
  for (auto& z : f) z = n == 64 ? rng.next_u64() : rng.below(std::uint64_t{1} << n);
  std::vector<std::uint64_t> table(std::size_t{1} << t);
  for (std::uint64_t r = 0; r < table.size(); ++r) {
    std::uint64_t y = 0;
    for (int i = 0; i < s; ++i) y |= static_cast<std::uint64_t>(std::popcount(rows[static_cast<std::size_t>(i)] & r) & 1) << i;
    table[r] = f[y];
  }
  return RandomizedAlgorithm::from_table(t, n, std::move(table), "coset_sampler");
}

/// Realizes prescribed level-set sizes (summing to 2^T) with every level set a union
/// of aligned blocks: each count is split into its binary digits and the blocks are
/// laid out largest first, so a block of size 2^j starts at a multiple of 2^j.
inline RandomizedAlgorithm aligned_block_algorithm(int t, int n, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& counts) {
  detail::require(t >= 1 && t <= kMaxRandomnessBits, "aligned_block_algorithm: 1 <= T <= 24");
  struct Block {
    int log_size;
    std::uint64_t z;
  };
  std::vector<Block> blocks;
  std::uint64_t total = 0;
  for (const auto& [z, c] : counts) {
    total += c;
    for (int j = 0; j <= t; ++j) {
      if ((c >> j) & 1u) blocks.push_back({j, z});
    }
  }
  detail::require(total == (std::uint64_t{1} << t), "aligned_block_algorithm: counts must sum to 2^T");
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.log_size > b.log_size; });
  std::vector<std::uint64_t> table(std::size_t{1} << t);
  std::uint64_t at = 0;
  for (const auto& b : blocks) {
    std::fill_n(table.begin() + static_cast<std::ptrdiff_t>(at), std::size_t{1} << b.log_size, b.z);
    at += std::uint64_t{1} << b.log_size;
  }
  return RandomizedAlgorithm::from_table(t, n, std::move(table), "aligned_blocks");
}

}  // namespace iqplab
