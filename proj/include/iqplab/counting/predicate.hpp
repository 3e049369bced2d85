#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "iqplab/bitvec.hpp"
#include "iqplab/counting/gf2_basis.hpp"
#include "iqplab/error.hpp"
#include "iqplab/fwht.hpp"

namespace iqplab {

/// Total deterministic decision procedure G on {0,1}^n; S = {x : G(x) = 1}.
class MembershipPredicate {
public:
  virtual ~MembershipPredicate() = default;

  virtual int width() const noexcept = 0;
  virtual bool accepts(const BitVector& x) const = 0;

  /// Size of the predicate description in bits, as reported in query logs.
  virtual std::uint64_t description_bits() const noexcept = 0;
  virtual std::string describe() const = 0;
};

/// G given as a callable on inputs packed into a word (n <= 64).
class FunctionPredicate final : public MembershipPredicate {
public:
  FunctionPredicate(int n, std::function<bool(std::uint64_t)> g, std::string name = "function",
                    std::uint64_t description_bits = 0)
      : n_(n), g_(std::move(g)), name_(std::move(name)), bits_(description_bits) {
    detail::require(n >= 1 && n <= 64, "FunctionPredicate: 1 <= n <= 64");
    detail::require(static_cast<bool>(g_), "FunctionPredicate: empty callable");
  }

  int width() const noexcept override { return n_; }
  bool accepts(const BitVector& x) const override {
    detail::require(x.size() == static_cast<std::size_t>(n_), "predicate: input width mismatch");
    return g_(x.to_uint());
  }
  bool accepts_word(std::uint64_t x) const { return g_(x); }
  std::uint64_t description_bits() const noexcept override { return bits_; }
  std::string describe() const override { return name_ + "(n=" + std::to_string(n_) + ")"; }

private:
  int n_;
  std::function<bool(std::uint64_t)> g_;
  std::string name_;
  std::uint64_t bits_;
};

namespace detail {

inline std::vector<std::uint64_t> sorted_members(std::vector<std::uint64_t> members, int n, const char* who) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (n < 64 && !members.empty()) {
    detail::require(members.back() < (std::uint64_t{1} << n), std::string(who) + ": member out of range");
  }
  return members;
}

}  // namespace detail

/// Explicitly listed accepted set (n <= 64).
class SetPredicate final : public MembershipPredicate {
public:
  SetPredicate(int n, std::vector<std::uint64_t> members)
      : n_(n), members_(detail::sorted_members(std::move(members), n, "SetPredicate")) {
    detail::require(n >= 1 && n <= 64, "SetPredicate: 1 <= n <= 64");
  }

  int width() const noexcept override { return n_; }
  const std::vector<std::uint64_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  bool accepts(const BitVector& x) const override {
    detail::require(x.size() == static_cast<std::size_t>(n_), "predicate: input width mismatch");
    return std::binary_search(members_.begin(), members_.end(), x.to_uint());
  }
  std::uint64_t description_bits() const noexcept override { return members_.size() * static_cast<std::uint64_t>(n_); }
  std::string describe() const override {
    return "set(n=" + std::to_string(n_) + ", size=" + std::to_string(members_.size()) + ")";
  }

private:
  int n_;
  std::vector<std::uint64_t> members_;
};

/// S^{x alpha} for a base set S of T-bit strings: x = (x_1, ..., x_alpha) with
/// block i in bits [iT, (i+1)T) is accepted iff every block lies in S.
/// Membership is evaluated block by block; the alpha-fold set is never materialized.
class ProductPredicate final : public MembershipPredicate {
public:
  /// Coset decomposition S = P + W, W the largest subspace with S + W = S.
  struct Structure {
    std::vector<std::uint64_t> period_basis;
    std::vector<std::uint64_t> reps;
    int dim_w = 0;
  };

  static constexpr int kMaxBlockBits = 24;
  static constexpr int kMaxWidth = 256;

  ProductPredicate(int block_bits, int alpha, std::vector<std::uint64_t> members)
      : t_(block_bits), alpha_(alpha), members_(detail::sorted_members(std::move(members), block_bits, "ProductPredicate")) {
    detail::require(block_bits >= 1 && block_bits <= kMaxBlockBits, "ProductPredicate: 1 <= T <= 24");
    detail::require(alpha >= 1, "ProductPredicate: alpha >= 1");
    if (alpha * block_bits > kMaxWidth) {
      throw ResourceError("ProductPredicate: alpha*T = " + std::to_string(alpha * block_bits) + " exceeds 256 bits");
    }
  }

  int width() const noexcept override { return alpha_ * t_; }
  int block_bits() const noexcept { return t_; }
  int alpha() const noexcept { return alpha_; }
  const std::vector<std::uint64_t>& members() const noexcept { return members_; }
  std::size_t base_size() const noexcept { return members_.size(); }

  bool accepts(const BitVector& x) const override {
    detail::require(x.size() == static_cast<std::size_t>(width()), "predicate: input width mismatch");
    for (int i = 0; i < alpha_; ++i) {
      const auto block = x.slice(static_cast<std::size_t>(i * t_), static_cast<std::size_t>(t_)).to_uint();
      if (!std::binary_search(members_.begin(), members_.end(), block)) return false;
    }
    return true;
  }

  std::uint64_t description_bits() const noexcept override {
    return members_.size() * static_cast<std::uint64_t>(t_) + static_cast<std::uint64_t>(std::bit_width(unsigned(alpha_)));
  }
  std::string describe() const override {
    return "product(T=" + std::to_string(t_) + ", alpha=" + std::to_string(alpha_) +
           ", base_size=" + std::to_string(members_.size()) + ")";
  }

  /// Computed once, thread-safe.
  const Structure& structure() const {
    std::call_once(once_->flag, [this] { once_->value = compute_structure(); });
    return once_->value;
  }

private:
  struct Lazy {
    std::once_flag flag;
    Structure value;
  };

  Structure compute_structure() const {
    Structure s;
    if (members_.empty()) return s;
    // W^perp is spanned by the support of the Walsh transform of the indicator of S.
    std::vector<std::int32_t> ind(std::size_t{1} << t_, 0);
    for (auto x : members_) ind[x] = 1;
    walsh_hadamard(std::span<std::int32_t>(ind));
    Gf2Basis<std::uint64_t> dual;
    for (std::uint64_t u = 0; u < ind.size() && dual.rank() < static_cast<std::size_t>(t_); ++u) {
      if (ind[u] != 0) dual.insert(u);
    }
    s.period_basis = orthogonal_complement(dual, t_);
    s.dim_w = static_cast<int>(s.period_basis.size());
    Gf2Basis<std::uint64_t> w;
    for (auto v : s.period_basis) w.insert(v);
    s.reps.reserve(members_.size() >> s.dim_w);
    for (auto x : members_) s.reps.push_back(w.reduce(x));
    std::sort(s.reps.begin(), s.reps.end());
    s.reps.erase(std::unique(s.reps.begin(), s.reps.end()), s.reps.end());
    return s;
  }

  int t_;
  int alpha_;
  std::vector<std::uint64_t> members_;
  std::shared_ptr<Lazy> once_ = std::make_shared<Lazy>();
};

}  // namespace iqplab
