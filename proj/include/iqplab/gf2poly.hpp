#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "iqplab/bitvec.hpp"
#include "iqplab/error.hpp"
#include "iqplab/fwht.hpp"
#include "iqplab/rng.hpp"

namespace iqplab {

inline constexpr int kDefaultEnumerationBits = 28;

/// Largest n for which exhaustive 2^n work is allowed. Overridable through
/// the IQPLAB_MAX_ENUM_BITS environment variable.
inline int enumeration_limit() {
  if (const char* env = std::getenv("IQPLAB_MAX_ENUM_BITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 40) return static_cast<int>(v);
  }
  return kDefaultEnumerationBits;
}

/// Strictly increasing variable indices; {i} is x_i, {i,j} is x_i x_j, ...
using Monomial = std::vector<int>;

/// Canonical order: by degree, then lexicographic.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// Multilinear polynomial over F_2 in n variables, stored as its set of
/// monomials (a coefficient is 1 iff the monomial is present). The constant
/// monomial is excluded; it only flips the global sign of gap().
class Gf2Polynomial {
public:
  using MonomialSet = std::set<Monomial, MonomialOrder>;

  explicit Gf2Polynomial(int n, int max_degree = 3) : n_(n), max_degree_(max_degree) {
    detail::require(n >= 1, "polynomial needs n >= 1 variables");
    detail::require(max_degree >= 1, "polynomial max degree must be >= 1");
  }

  Gf2Polynomial(int n, std::vector<Monomial> monomials, int max_degree = 3) : Gf2Polynomial(n, max_degree) {
    for (auto& m : monomials) {
      validate(m);
      if (!monomials_.insert(std::move(m)).second) throw ArgumentError("duplicate monomial");
    }
  }

  int n() const noexcept { return n_; }
  int max_degree() const noexcept { return max_degree_; }
  const MonomialSet& monomials() const noexcept { return monomials_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  bool is_zero() const noexcept { return monomials_.empty(); }

  int degree() const noexcept {
    return monomials_.empty() ? 0 : static_cast<int>(monomials_.rbegin()->size());
  }

  bool contains(const Monomial& m) const { return monomials_.count(m) != 0; }

  /// Adds the monomial mod 2.
  void toggle(Monomial m) {
    validate(m);
    if (auto it = monomials_.find(m); it != monomials_.end()) {
      monomials_.erase(it);
    } else {
      monomials_.insert(std::move(m));
    }
  }

  Gf2Polynomial& operator^=(const Gf2Polynomial& other) {
    detail::require(other.n_ == n_, "polynomial xor: variable count mismatch");
    for (const auto& m : other.monomials_) toggle(m);
    return *this;
  }
  friend Gf2Polynomial operator^(Gf2Polynomial a, const Gf2Polynomial& b) { return a ^= b; }

  bool operator==(const Gf2Polynomial& other) const {
    return n_ == other.n_ && monomials_ == other.monomials_;
  }

  /// Variable sets of the monomials as bit masks (requires n <= 64).
  std::vector<std::uint64_t> monomial_masks() const {
    detail::require(n_ <= 64, "monomial masks need n <= 64");
    std::vector<std::uint64_t> masks;
    masks.reserve(monomials_.size());
    for (const auto& m : monomials_) {
      std::uint64_t mask = 0;
      for (int v : m) mask |= std::uint64_t{1} << v;
      masks.push_back(mask);
    }
    return masks;
  }

private:
  void validate(const Monomial& m) const {
    if (m.empty()) throw ArgumentError("empty (constant) monomial is not allowed");
    if (static_cast<int>(m.size()) > max_degree_) {
      throw ArgumentError("monomial degree " + std::to_string(m.size()) + " exceeds maximum " +
                          std::to_string(max_degree_));
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] < 0 || m[i] >= n_) throw ArgumentError("variable index out of range [0, n)");
      if (i > 0 && m[i] <= m[i - 1]) throw ArgumentError("monomial indices must be strictly increasing");
    }
  }

  int n_;
  int max_degree_;
  MonomialSet monomials_;
};

/// f(x) = XOR over monomials of the AND of their variables.
inline bool evaluate(const Gf2Polynomial& f, const BitVector& x) {
  detail::require(x.size() == static_cast<std::size_t>(f.n()), "evaluate: x length must equal n");
  bool acc = false;
  for (const auto& m : f.monomials()) {
    bool term = true;
    for (int v : m) {
      if (!x.get(static_cast<std::size_t>(v))) {
        term = false;
        break;
      }
    }
    acc ^= term;
  }
  return acc;
}

/// Fast path with x packed into a word (bit i = x_i).
inline bool evaluate(std::span<const std::uint64_t> monomial_masks, std::uint64_t x) noexcept {
  bool acc = false;
  for (auto m : monomial_masks) acc ^= (x & m) == m;
  return acc;
}

/// Each monomial of size <= degree is included independently with probability 1/2,
/// visiting slots in canonical order.
inline Gf2Polynomial random_polynomial(int n, int degree, Rng& rng) {
  detail::require(n >= 1, "random_polynomial: n >= 1");
  detail::require(degree >= 1 && degree <= 3, "random_polynomial: 1 <= degree <= 3");
  Gf2Polynomial f(n, 3);
  for (int i = 0; i < n; ++i) {
    if (rng.bit()) f.toggle({i});
  }
  if (degree >= 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bit()) f.toggle({i, j});
      }
    }
  }
  if (degree >= 3) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          if (rng.bit()) f.toggle({i, j, k});
        }
      }
    }
  }
  return f;
}

/// f_z(x) = f(x) + sum_i z_i x_i: toggles the linear monomial of every set bit of z.
inline Gf2Polynomial shift_by_z(const Gf2Polynomial& f, const BitVector& z) {
  detail::require(z.size() == static_cast<std::size_t>(f.n()), "shift_by_z: z length must equal n");
  Gf2Polynomial out = f;
  for (int i = 0; i < f.n(); ++i) {
    if (z.get(static_cast<std::size_t>(i))) out.toggle({i});
  }
  return out;
}

namespace detail {

inline void check_enumerable(int n, const char* what) {
  if (n > enumeration_limit()) {
    throw ResourceError(std::string(what) + ": n = " + std::to_string(n) + " exceeds enumeration limit " +
                        std::to_string(enumeration_limit()));
  }
}

}  // namespace detail

/// Truth table of f packed 64 entries per word (entry x at bit x%64 of word x/64).
/// Built from the monomial coefficients by the binary Moebius transform.
inline std::vector<std::uint64_t> truth_table(const Gf2Polynomial& f) {
  detail::check_enumerable(f.n(), "truth_table");
  const int n = f.n();
  const std::size_t entries = std::size_t{1} << n;
  std::vector<std::uint64_t> t((entries + 63) / 64, 0);
  for (auto mask : f.monomial_masks()) t[mask >> 6] ^= std::uint64_t{1} << (mask & 63);

  static constexpr std::uint64_t kLow[6] = {0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
                                            0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};
  for (int i = 0; i < std::min(n, 6); ++i) {
    const unsigned shift = 1u << i;
    for (auto& w : t) w ^= (w & kLow[i]) << shift;
  }
  for (int i = 6; i < n; ++i) {
    const std::size_t stride = std::size_t{1} << (i - 6);
    for (std::size_t base = 0; base < t.size(); base += stride << 1) {
      for (std::size_t j = 0; j < stride; ++j) t[base + stride + j] ^= t[base + j];
    }
  }
  if (entries < 64) t[0] &= (std::uint64_t{1} << entries) - 1;
  return t;
}

/// gap(f) = sum_x (-1)^{f(x)} = 2^n - 2 |{x : f(x) = 1}|.
inline std::int64_t gap(const Gf2Polynomial& f) {
  detail::check_enumerable(f.n(), "gap");
  std::int64_t ones = 0;
  for (auto w : truth_table(f)) ones += std::popcount(w);
  return (std::int64_t{1} << f.n()) - 2 * ones;
}

/// Entry z is gap(f_z). Walsh-Hadamard transform of the sign vector (-1)^{f(x)}.
inline std::vector<std::int64_t> sign_spectrum(std::span<const std::uint64_t> table, int n) {
  const std::size_t entries = std::size_t{1} << n;
  std::vector<std::int64_t> s(entries);
  for (std::size_t x = 0; x < entries; ++x) s[x] = ((table[x >> 6] >> (x & 63)) & 1u) ? -1 : 1;
  walsh_hadamard(std::span<std::int64_t>(s));
  return s;
}

inline std::vector<std::int64_t> gap_spectrum(const Gf2Polynomial& f) {
  detail::check_enumerable(f.n(), "gap_spectrum");
  const auto table = truth_table(f);
  return sign_spectrum(table, f.n());
}

}  // namespace iqplab
