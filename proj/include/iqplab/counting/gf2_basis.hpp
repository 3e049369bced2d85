#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "iqplab/bitvec.hpp"
#include "iqplab/error.hpp"

namespace iqplab {

/// Fixed 256-bit vector over F_2.
using Vec256 = std::array<std::uint64_t, 4>;

inline Vec256 to_vec256(const BitVector& b) {
  detail::require(b.size() <= 256, "to_vec256: at most 256 bits");
  Vec256 v{};
  for (std::size_t i = 0; i < b.word_count(); ++i) v[i] = b.words()[i];
  return v;
}

namespace gf2 {

inline bool is_zero(std::uint64_t v) noexcept { return v == 0; }
inline bool is_zero(const Vec256& v) noexcept { return (v[0] | v[1] | v[2] | v[3]) == 0; }

inline bool test(std::uint64_t v, int i) noexcept { return (v >> i) & 1u; }
inline bool test(const Vec256& v, int i) noexcept { return (v[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u; }

inline int lowest(std::uint64_t v) noexcept { return std::countr_zero(v); }
inline int lowest(const Vec256& v) noexcept {
  for (int w = 0; w < 4; ++w) {
    if (v[static_cast<std::size_t>(w)]) return 64 * w + std::countr_zero(v[static_cast<std::size_t>(w)]);
  }
  return 256;
}

inline void xor_into(std::uint64_t& a, std::uint64_t b) noexcept { a ^= b; }
inline void xor_into(Vec256& a, const Vec256& b) noexcept {
  a[0] ^= b[0];
  a[1] ^= b[1];
  a[2] ^= b[2];
  a[3] ^= b[3];
}

}  // namespace gf2

/// Basis in reduced row echelon form: every pivot bit appears in exactly one row.
template <typename V>
class Gf2Basis {
public:
  std::size_t rank() const noexcept { return rows_.size(); }
  const std::vector<V>& rows() const noexcept { return rows_; }
  const std::vector<int>& pivots() const noexcept { return pivots_; }

  /// Canonical representative of v modulo the span: all pivot bits cleared.
  V reduce(V v) const noexcept {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (gf2::test(v, pivots_[i])) gf2::xor_into(v, rows_[i]);
    }
    return v;
  }

  bool contains(const V& v) const noexcept { return gf2::is_zero(reduce(v)); }

  /// Returns false when v is already in the span.
  bool insert(V v) {
    v = reduce(v);
    if (gf2::is_zero(v)) return false;
    const int p = gf2::lowest(v);
    for (auto& r : rows_) {
      if (gf2::test(r, p)) gf2::xor_into(r, v);
    }
    rows_.push_back(v);
    pivots_.push_back(p);
    return true;
  }

private:
  std::vector<V> rows_;
  std::vector<int> pivots_;
};

/// Basis of {w in F_2^bits : u.w = 0 for every row u of `b`}.
inline std::vector<std::uint64_t> orthogonal_complement(const Gf2Basis<std::uint64_t>& b, int bits) {
  std::uint64_t pivot_mask = 0;
  for (int p : b.pivots()) pivot_mask |= std::uint64_t{1} << p;
  std::vector<std::uint64_t> out;
  for (int f = 0; f < bits; ++f) {
    if ((pivot_mask >> f) & 1u) continue;
    std::uint64_t w = std::uint64_t{1} << f;
    for (std::size_t i = 0; i < b.rows().size(); ++i) {
      if ((b.rows()[i] >> f) & 1u) w |= std::uint64_t{1} << b.pivots()[i];
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace iqplab
