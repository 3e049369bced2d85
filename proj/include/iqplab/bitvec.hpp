#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iqplab/error.hpp"

namespace iqplab {

/// Fixed-length packed bit string. Bit i lives in word i/64 at position i%64;
/// bits at positions >= size() are always zero.
class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

  /// Low `length` bits of `value` (bit i of value -> index i).
  static BitVector from_uint(std::uint64_t value, std::size_t length) {
    BitVector v(length);
    if (length > 0) {
      v.words_[0] = length >= 64 ? value : value & ((std::uint64_t{1} << length) - 1);
    }
    return v;
  }

  /// Parses "0110..." where character i is bit i.
  static BitVector from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i, true);
      } else if (bits[i] != '0') {
        throw ArgumentError("bit string may only contain '0' and '1'");
      }
    }
    return v;
  }

  std::size_t size() const noexcept { return length_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& other) {
    detail::require(other.length_ == length_, "BitVector xor: length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool operator==(const BitVector&) const = default;

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const noexcept {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  /// Value of the first min(64, size) bits.
  std::uint64_t to_uint() const {
    detail::require(length_ <= 64, "BitVector::to_uint: more than 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  /// Bits [start, start+len) as a new vector.
  BitVector slice(std::size_t start, std::size_t len) const {
    detail::require(start + len <= length_, "BitVector::slice out of range");
    BitVector out(len);
    const std::size_t shift = start & 63;
    const std::size_t first = start >> 6;
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
      std::uint64_t lo = first + w < words_.size() ? words_[first + w] >> shift : 0;
      std::uint64_t hi = 0;
      if (shift != 0 && first + w + 1 < words_.size()) hi = words_[first + w + 1] << (64 - shift);
      out.words_[w] = lo | hi;
    }
    out.clear_tail();
    return out;
  }

  /// Parity of popcount(this AND other).
  bool dot(const BitVector& other) const {
    detail::require(other.length_ == length_, "BitVector dot: length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

private:
  void clear_tail() noexcept {
    if (length_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (length_ % 64)) - 1;
    }
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace iqplab
