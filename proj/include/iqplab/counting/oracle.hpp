#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iqplab/counting/gf2_basis.hpp"
#include "iqplab/counting/predicate.hpp"
#include "iqplab/gf2poly.hpp"
#include "iqplab/hashing.hpp"
#include "json.hpp"

namespace iqplab {

using u128 = __uint128_t;
inline constexpr u128 kU128Max = ~u128{0};

namespace detail {

inline u128 sat_add(u128 a, u128 b) noexcept { return a > kU128Max - b ? kU128Max : a + b; }
inline u128 sat_mul(u128 a, u128 b) noexcept { return (a != 0 && b > kU128Max / a) ? kU128Max : a * b; }

inline u128 sat_pow(u128 base, int e) noexcept {
  u128 r = 1;
  for (int i = 0; i < e; ++i) r = sat_mul(r, base);
  return r;
}

/// Number of members x with h(x) = 0^m, counting stops once `stop` is reached.
inline std::uint64_t count_hashed_members(std::span<const std::uint64_t> members, const ToeplitzHasher& h,
                                          std::uint64_t stop) {
  std::uint64_t hits = 0;
  if (h.m() <= 64) {
    const SyndromeTable tab(h);
    const std::uint64_t target = tab.offset();
    for (auto x : members) {
      if (tab.linear(x) == target && ++hits >= stop) break;
    }
  } else {
    // m > n: A x = b needs b in the column space; fall back to the bit-level hasher.
    for (auto x : members) {
      if (h(BitVector::from_uint(x, static_cast<std::size_t>(h.n()))).none() && ++hits >= stop) break;
    }
  }
  return hits;
}

inline std::uint64_t key_xor(std::uint64_t a, std::uint64_t b) noexcept { return a ^ b; }
inline Vec256 key_xor(Vec256 a, const Vec256& b) noexcept {
  gf2::xor_into(a, b);
  return a;
}

template <typename Key>
using Histogram = std::vector<std::pair<Key, u128>>;

/// Distribution of XOR-sums choosing one key per block.
template <typename Key>
Histogram<Key> xor_sum_histogram(std::span<const std::vector<Key>> blocks, std::size_t budget) {
  Histogram<Key> cur{{Key{}, 1}};
  Histogram<Key> next;
  for (const auto& block : blocks) {
    if (cur.size() * block.size() > budget) {
      throw ResourceError("product count: intermediate table of " + std::to_string(cur.size() * block.size()) +
                          " entries exceeds budget " + std::to_string(budget));
    }
    next.clear();
    next.reserve(cur.size() * block.size());
    for (const auto& [k, c] : cur) {
      for (const auto& v : block) next.emplace_back(key_xor(k, v), c);
    }
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    cur.clear();
    for (const auto& e : next) {
      if (!cur.empty() && cur.back().first == e.first) {
        cur.back().second = sat_add(cur.back().second, e.second);
      } else {
        cur.push_back(e);
      }
    }
  }
  return cur;
}

/// #{(k_1..k_a) : k_i in blocks[i], XOR k_i = target}, by meet in the middle; stops at `stop`.
template <typename Key>
u128 count_xor_tuples(const std::vector<std::vector<Key>>& blocks, const Key& target, u128 stop, std::size_t budget) {
  const std::size_t split = blocks.size() / 2;
  std::span<const std::vector<Key>> all(blocks);
  const auto left = xor_sum_histogram<Key>(all.first(split), budget);
  const auto right = xor_sum_histogram<Key>(all.subspan(split), budget);
  u128 total = 0;
  for (const auto& [k, c] : left) {
    const Key want = key_xor(k, target);
    auto it = std::lower_bound(right.begin(), right.end(), want, [](const auto& e, const Key& key) { return e.first < key; });
    if (it != right.end() && it->first == want) {
      total = sat_add(total, sat_mul(c, it->second));
      if (total >= stop) break;
    }
  }
  return total;
}

}  // namespace detail

/// Count of (x_1..x_alpha) in S^alpha with h(x) = 0^m, as tuples * 2^scale.
struct HashedProductCount {
  u128 tuples = 0;  // saturating, and capped at the requested stop value
  int scale = 0;

  boost::multiprecision::cpp_int value() const {
    boost::multiprecision::cpp_int v = static_cast<std::uint64_t>(tuples >> 64);
    v <<= 64;
    v += static_cast<std::uint64_t>(tuples);
    return v << scale;
  }
};

inline constexpr std::size_t kProductCountBudget = std::size_t{1} << 22;

/// Exact hash-restricted count of an alpha-fold product set.
///
/// With S = P + W (W the period subspace of S) and U = sum_i A_i W, each tuple of
/// coset representatives (p_i) contributes either 0 or |W|^alpha / |U| solutions,
/// depending on whether sum_i A_i p_i = b modulo U. The representative tuples are
/// counted in the quotient space by meet in the middle.
inline HashedProductCount hashed_product_count(const ProductPredicate& pred, const ToeplitzHasher& h,
                                               u128 stop = kU128Max, std::size_t budget = kProductCountBudget) {
  detail::require(h.n() == pred.width(), "hashed_product_count: hasher input width must equal alpha*T");
  detail::require(h.m() <= 256, "hashed_product_count: m <= 256");
  HashedProductCount out;
  if (pred.members().empty()) return out;
  const int t = pred.block_bits();
  const int alpha = pred.alpha();
  const auto& st = pred.structure();

  std::vector<Vec256> cols(static_cast<std::size_t>(pred.width()));
  for (int c = 0; c < pred.width(); ++c) cols[static_cast<std::size_t>(c)] = to_vec256(h.column(c));
  auto apply = [&](int block, std::uint64_t v) {
    Vec256 acc{};
    while (v) {
      const int j = std::countr_zero(v);
      gf2::xor_into(acc, cols[static_cast<std::size_t>(block * t + j)]);
      v &= v - 1;
    }
    return acc;
  };

  Gf2Basis<Vec256> u;
  for (int i = 0; i < alpha; ++i) {
    for (auto w : st.period_basis) u.insert(apply(i, w));
  }
  out.scale = alpha * st.dim_w - static_cast<int>(u.rank());
  const Vec256 target = u.reduce(to_vec256(h.offset()));
  const int d = h.m() - static_cast<int>(u.rank());

  // Scaled threshold: tuples needed so that tuples * 2^scale >= stop.
  u128 need = stop;
  if (stop != kU128Max) {
    if (out.scale >= 128) {
      need = stop == 0 ? 0 : 1;
    } else {
      need = (stop >> out.scale) + ((stop & ((u128{1} << out.scale) - 1)) != 0);
    }
  }
  if (need == 0) {
    out.tuples = 0;
    return out;
  }

  if (d <= 64) {
    // Reduced vectors vanish on pivot bits; pack the remaining d free bits.
    std::array<int, 256> rank_of{};
    std::array<bool, 256> pivot{};
    for (int p : u.pivots()) pivot[static_cast<std::size_t>(p)] = true;
    for (int b = 0, r = 0; b < h.m(); ++b) {
      if (!pivot[static_cast<std::size_t>(b)]) rank_of[static_cast<std::size_t>(b)] = r++;
    }
    auto pack = [&](const Vec256& v) {
      std::uint64_t key = 0;
      for (int w = 0; w < 4; ++w) {
        std::uint64_t bits = v[static_cast<std::size_t>(w)];
        while (bits) {
          const int b = 64 * w + std::countr_zero(bits);
          key |= std::uint64_t{1} << rank_of[static_cast<std::size_t>(b)];
          bits &= bits - 1;
        }
      }
      return key;
    };
    std::vector<std::vector<std::uint64_t>> blocks(static_cast<std::size_t>(alpha));
    for (int i = 0; i < alpha; ++i) {
      for (auto p : st.reps) blocks[static_cast<std::size_t>(i)].push_back(pack(u.reduce(apply(i, p))));
    }
    out.tuples = detail::count_xor_tuples<std::uint64_t>(blocks, pack(target), need, budget);
  } else {
    std::vector<std::vector<Vec256>> blocks(static_cast<std::size_t>(alpha));
    for (int i = 0; i < alpha; ++i) {
      for (auto p : st.reps) blocks[static_cast<std::size_t>(i)].push_back(u.reduce(apply(i, p)));
    }
    out.tuples = detail::count_xor_tuples<Vec256>(blocks, target, need, budget);
  }
  return out;
}

/// One logged oracle call.
struct QueryRecord {
  std::uint64_t query_id = 0;
  std::string kind;  // "exact" or "hashed"
  std::uint64_t threshold = 0;
  std::optional<std::uint64_t> hasher_seed;
  bool answer = false;
  std::uint64_t description_bits = 0;

  nlohmann::json to_json() const {
    return {{"query_id", query_id},
            {"kind", kind},
            {"threshold", threshold},
            {"hasher_seed", hasher_seed ? nlohmann::json(*hasher_seed) : nlohmann::json(nullptr)},
            {"answer", answer},
            {"description_bits", description_bits}};
  }
};

/// Decision oracle: is |{x in S : h(x) = 0^m}| >= threshold? (no hasher: is |S| >= threshold?)
class CountOracle {
public:
  virtual ~CountOracle() = default;
  virtual bool threshold_query(const MembershipPredicate& pred, const ToeplitzHasher* h, std::uint64_t threshold,
                               std::optional<std::uint64_t> hasher_seed = std::nullopt) = 0;
  virtual std::uint64_t query_count() const noexcept = 0;
};

/// Answers every query exactly. Set and product predicates are counted from their
/// structure; any other predicate is enumerated over {0,1}^n (n within the enumeration limit).
class ExactCountOracle final : public CountOracle {
public:
  explicit ExactCountOracle(std::ostream* log = nullptr, std::size_t budget = kProductCountBudget)
      : log_(log), budget_(budget) {}

  bool threshold_query(const MembershipPredicate& pred, const ToeplitzHasher* h, std::uint64_t threshold,
                       std::optional<std::uint64_t> hasher_seed = std::nullopt) override {
    if (h) detail::require(h->n() == pred.width(), "threshold_query: hasher width must equal predicate width");
    const bool answer = decide(pred, h, threshold);
    QueryRecord rec;
    rec.query_id = next_id_.fetch_add(1);
    rec.kind = h ? "hashed" : "exact";
    rec.threshold = threshold;
    rec.hasher_seed = hasher_seed;
    rec.answer = answer;
    rec.description_bits = pred.description_bits() + (h ? static_cast<std::uint64_t>(h->n() + 2 * h->m() - 1) : 0) +
                           static_cast<std::uint64_t>(std::bit_width(threshold));
    if (log_) {
      std::lock_guard<std::mutex> lock(mu_);
      *log_ << rec.to_json().dump() << '\n';
    }
    return answer;
  }

  std::uint64_t query_count() const noexcept override { return next_id_.load(); }

private:
  bool decide(const MembershipPredicate& pred, const ToeplitzHasher* h, std::uint64_t c) const {
    if (c == 0) return true;
    if (const auto* s = dynamic_cast<const SetPredicate*>(&pred)) {
      if (!h) return s->size() >= c;
      return detail::count_hashed_members(s->members(), *h, c) >= c;
    }
    if (const auto* p = dynamic_cast<const ProductPredicate*>(&pred)) {
      if (!h) return detail::sat_pow(p->base_size(), p->alpha()) >= c;
      if (p->alpha() == 1) return detail::count_hashed_members(p->members(), *h, c) >= c;
      return hashed_product_count(*p, *h, c, budget_).value() >= c;
    }
    return enumerate(pred, h, c);
  }

  static bool enumerate(const MembershipPredicate& pred, const ToeplitzHasher* h, std::uint64_t c) {
    const int n = pred.width();
    detail::check_enumerable(n, "ExactCountOracle");
    const auto* fp = dynamic_cast<const FunctionPredicate*>(&pred);
    std::optional<SyndromeTable> tab;
    if (h && h->m() <= 64) tab.emplace(*h);
    std::uint64_t hits = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      if (tab && tab->linear(x) != tab->offset()) continue;
      const BitVector xv = BitVector::from_uint(x, static_cast<std::size_t>(n));
      if (h && !tab && !(*h)(xv).none()) continue;
      if (fp ? fp->accepts_word(x) : pred.accepts(xv)) {
        if (++hits >= c) return true;
      }
    }
    return false;
  }

  std::ostream* log_;
  std::size_t budget_;
  std::atomic<std::uint64_t> next_id_{0};
  std::mutex mu_;
};

}  // namespace iqplab
