#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iqplab/bitvec.hpp"
#include "iqplab/error.hpp"
#include "iqplab/rng.hpp"

namespace iqplab {

/// h(x) = A x + b over F_2 with A an m x n Toeplitz matrix.
///
/// Indexing convention: a_{i,j} = diag[i - j + n - 1], so diag[n-1] is the main
/// diagonal, diag[0] is the top-right corner and diag[n+m-2] the bottom-left.
/// Column c of A is the contiguous slice diag[n-1-c .. n-1-c+m).
class ToeplitzHasher {
public:
  ToeplitzHasher(int n, int m, BitVector diag, BitVector offset)
      : n_(n), m_(m), diag_(std::move(diag)), offset_(std::move(offset)) {
    detail::require(n >= 1 && m >= 1, "ToeplitzHasher: n >= 1 and m >= 1");
    detail::require(diag_.size() == static_cast<std::size_t>(n + m - 1), "ToeplitzHasher: diag needs n+m-1 bits");
    detail::require(offset_.size() == static_cast<std::size_t>(m), "ToeplitzHasher: offset needs m bits");
    rows_.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      BitVector row(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) row.set(static_cast<std::size_t>(j), entry(i, j));
      rows_.push_back(std::move(row));
    }
  }

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  const BitVector& diag() const noexcept { return diag_; }
  const BitVector& offset() const noexcept { return offset_; }
  const BitVector& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

  bool entry(int i, int j) const { return diag_.get(static_cast<std::size_t>(i - j + n_ - 1)); }

  BitVector column(int c) const { return diag_.slice(static_cast<std::size_t>(n_ - 1 - c), static_cast<std::size_t>(m_)); }

  /// A x (no offset).
  BitVector linear(const BitVector& x) const {
    detail::require(x.size() == static_cast<std::size_t>(n_), "hash: input length must equal n");
    BitVector y(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      if (rows_[static_cast<std::size_t>(i)].dot(x)) y.set(static_cast<std::size_t>(i), true);
    }
    return y;
  }

  BitVector operator()(const BitVector& x) const { return linear(x) ^ offset_; }

private:
  int n_;
  int m_;
  BitVector diag_;
  BitVector offset_;
  std::vector<BitVector> rows_;
};

inline BitVector hash(const ToeplitzHasher& h, const BitVector& x) { return h(x); }

/// All n+2m-1 defining bits uniform: diag first, then offset.
inline ToeplitzHasher sample_hasher(int n, int m, Rng& rng) {
  detail::require(n >= 1 && m >= 1, "sample_hasher: n >= 1 and m >= 1");
  BitVector diag(static_cast<std::size_t>(n + m - 1));
  for (std::size_t i = 0; i < diag.size(); ++i) diag.set(i, rng.bit());
  BitVector offset(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < offset.size(); ++i) offset.set(i, rng.bit());
  return ToeplitzHasher(n, m, std::move(diag), std::move(offset));
}

/// Member `index` of the family in a fixed enumeration: bits 0..n+m-2 of the
/// index are diag, the next m bits the offset.
inline ToeplitzHasher hasher_from_index(int n, int m, std::uint64_t index) {
  const int dbits = n + m - 1;
  detail::require(dbits + m <= 63, "hasher_from_index: family too large");
  return ToeplitzHasher(n, m, BitVector::from_uint(index & ((std::uint64_t{1} << dbits) - 1), static_cast<std::size_t>(dbits)),
                        BitVector::from_uint(index >> dbits, static_cast<std::size_t>(m)));
}

/// Byte-sliced lookup tables for x -> A x with n, m <= 64: one table of 256
/// syndromes per input byte; evaluation is ceil(n/8) lookups and XORs.
class SyndromeTable {
public:
  explicit SyndromeTable(const ToeplitzHasher& h) : n_(h.n()), offset_(h.offset().to_uint()) {
    detail::require(h.n() <= 64 && h.m() <= 64, "SyndromeTable: n, m <= 64");
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(n_));
    for (int c = 0; c < n_; ++c) cols[static_cast<std::size_t>(c)] = h.column(c).to_uint();
    init(cols);
  }

  /// From explicit column syndromes (column c = A e_c).
  explicit SyndromeTable(std::span<const std::uint64_t> columns, std::uint64_t offset = 0)
      : n_(static_cast<int>(columns.size())), offset_(offset) {
    detail::require(columns.size() <= 64, "SyndromeTable: at most 64 columns");
    init(columns);
  }

  std::uint64_t linear(std::uint64_t x) const noexcept {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < bytes_; ++t) s ^= table_[(t << 8) | ((x >> (8 * t)) & 0xFF)];
    return s;
  }

  std::uint64_t offset() const noexcept { return offset_; }
  std::uint64_t operator()(std::uint64_t x) const noexcept { return linear(x) ^ offset_; }

private:
  void init(std::span<const std::uint64_t> cols) {
    bytes_ = (static_cast<std::size_t>(n_) + 7) / 8;
    table_.assign(bytes_ * 256, 0);
    for (std::size_t t = 0; t < bytes_; ++t) {
      std::uint64_t* tab = table_.data() + (t << 8);
      for (unsigned v = 1; v < 256; ++v) {
        const unsigned low = static_cast<unsigned>(__builtin_ctz(v));
        const std::size_t c = 8 * t + low;
        tab[v] = tab[v & (v - 1)] ^ (c < cols.size() ? cols[c] : 0);
      }
    }
  }

  int n_;
  std::uint64_t offset_;
  std::size_t bytes_ = 0;
  std::vector<std::uint64_t> table_;
};

struct PairwiseViolation {
  std::uint64_t x1, x2, y1, y2, count;
};

struct PairwiseReport {
  int n = 0;
  int m = 0;
  std::uint64_t family_size = 0;
  std::uint64_t expected_count = 0;  // 2^{n+2m-1} / 2^{2m}
  std::uint64_t tuples_checked = 0;
  std::vector<PairwiseViolation> violations;

  bool ok() const noexcept { return violations.empty() && tuples_checked > 0; }
};

inline constexpr int kPairwiseFamilyBits = 22;
inline constexpr int kPairwiseTableBits = 26;

/// Counts, for every x1 != x2 and every (y1, y2), the hashers with h(x1)=y1 and h(x2)=y2.
inline PairwiseReport pairwise_independence_exhaustive(int n, int m) {
  detail::require(n >= 1 && m >= 1, "pairwise_independence_exhaustive: n, m >= 1");
  if (n + 2 * m - 1 > kPairwiseFamilyBits) {
    throw ResourceError("pairwise_independence_exhaustive: family of 2^" + std::to_string(n + 2 * m - 1) +
                        " hashers exceeds budget 2^" + std::to_string(kPairwiseFamilyBits));
  }
  if (2 * n + 2 * m > kPairwiseTableBits) {
    throw ResourceError("pairwise_independence_exhaustive: count table 2^" + std::to_string(2 * n + 2 * m) +
                        " exceeds budget 2^" + std::to_string(kPairwiseTableBits));
  }
  PairwiseReport rep;
  rep.n = n;
  rep.m = m;
  rep.family_size = std::uint64_t{1} << (n + 2 * m - 1);
  rep.expected_count = rep.family_size >> (2 * m);
  const std::uint64_t xs = std::uint64_t{1} << n;
  const std::uint64_t ys = std::uint64_t{1} << m;
  // index = ((x1 * xs + x2) * ys + y1) * ys + y2
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(xs * xs * ys * ys), 0);
  std::vector<std::uint64_t> image(static_cast<std::size_t>(xs));
  for (std::uint64_t idx = 0; idx < rep.family_size; ++idx) {
    const SyndromeTable h(hasher_from_index(n, m, idx));
    for (std::uint64_t x = 0; x < xs; ++x) image[x] = h(x);
    for (std::uint64_t x1 = 0; x1 < xs; ++x1) {
      for (std::uint64_t x2 = 0; x2 < xs; ++x2) {
        if (x1 == x2) continue;
        ++counts[static_cast<std::size_t>(((x1 * xs + x2) * ys + image[x1]) * ys + image[x2])];
      }
    }
  }
  for (std::uint64_t x1 = 0; x1 < xs; ++x1) {
    for (std::uint64_t x2 = 0; x2 < xs; ++x2) {
      if (x1 == x2) continue;
      for (std::uint64_t y1 = 0; y1 < ys; ++y1) {
        for (std::uint64_t y2 = 0; y2 < ys; ++y2) {
          const std::uint64_t c = counts[static_cast<std::size_t>(((x1 * xs + x2) * ys + y1) * ys + y2)];
          ++rep.tuples_checked;
          if (c != rep.expected_count) rep.violations.push_back({x1, x2, y1, y2, c});
        }
      }
    }
  }
  return rep;
}

/// Binomial standard error at rate b (clamped to [0,1]) over `trials` samples.
inline double binomial_se(double b, std::uint64_t trials) {
  const double p = b < 0.0 ? 0.0 : (b > 1.0 ? 1.0 : b);
  return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

struct LeftoverReport {
  std::size_t set_size = 0;
  int m = 0;
  double eps = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t deviations = 0;
  double empirical = 0.0;
  double bound = 0.0;  // 2^m / (eps^2 |S|)
  double se = 0.0;     // binomial standard error at the bound

  bool pass() const noexcept { return empirical <= bound + 3.0 * se; }
};

/// Fraction of sampled hashers h: {0,1}^n -> {0,1}^m whose preimage of 0^m inside S
/// deviates from |S|/2^m by at least eps |S|/2^m.
inline LeftoverReport leftover_deviation_probability(std::span<const BitVector> set, int m, double eps,
                                                     std::uint64_t trials, Rng& rng) {
  detail::require(!set.empty(), "leftover_deviation_probability: S must be nonempty");
  detail::require(eps > 0.0, "leftover_deviation_probability: eps > 0");
  detail::require(m >= 1, "leftover_deviation_probability: m >= 1");
  const int n = static_cast<int>(set.front().size());
  for (const auto& x : set) detail::require(x.size() == static_cast<std::size_t>(n), "leftover: mixed widths in S");

  LeftoverReport rep;
  rep.set_size = set.size();
  rep.m = m;
  rep.eps = eps;
  rep.trials = trials;
  const double mean = std::ldexp(static_cast<double>(set.size()), -m);
  rep.bound = std::ldexp(1.0, m) / (eps * eps * static_cast<double>(set.size()));
  rep.se = binomial_se(rep.bound, trials);

  const bool packed = n <= 64 && m <= 64;
  std::vector<std::uint64_t> words;
  if (packed) {
    words.reserve(set.size());
    for (const auto& x : set) words.push_back(x.to_uint());
  }
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto h = sample_hasher(n, m, rng);
    std::uint64_t hits = 0;
    if (packed) {
      const SyndromeTable table(h);
      const std::uint64_t target = table.offset();  // A x + b = 0  <=>  A x = b
      for (auto x : words) hits += table.linear(x) == target;
    } else {
      for (const auto& x : set) hits += h(x).none();
    }
    if (std::abs(static_cast<double>(hits) - mean) >= eps * mean) ++rep.deviations;
  }
  rep.empirical = trials == 0 ? 0.0 : static_cast<double>(rep.deviations) / static_cast<double>(trials);
  return rep;
}

}  // namespace iqplab
