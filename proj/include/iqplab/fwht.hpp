#pragma once

#include <cstddef>
#include <span>

#include "iqplab/error.hpp"

namespace iqplab {

/// In-place unnormalized Walsh-Hadamard transform:
///   out[z] = sum_x (-1)^{popcount(x & z)} in[x].
/// Length must be a power of two. Integer inputs stay exact as long as
/// len * max|in| fits the element type.
template <typename T>
void walsh_hadamard(std::span<T> data) {
  const std::size_t len = data.size();
  detail::require(len != 0 && (len & (len - 1)) == 0, "walsh_hadamard: length must be a power of two");
  // Radix-2 butterflies; the first two stages are fused for the common short strides.
  std::size_t h = 1;
  if (len >= 4) {
    for (std::size_t i = 0; i < len; i += 4) {
      const T a = data[i], b = data[i + 1], c = data[i + 2], d = data[i + 3];
      const T ab = a + b, amb = a - b, cd = c + d, cmd = c - d;
      data[i] = ab + cd;
      data[i + 1] = amb + cmd;
      data[i + 2] = ab - cd;
      data[i + 3] = amb - cmd;
    }
    h = 4;
  }
  for (; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += h << 1) {
      T* lo = data.data() + i;
      T* hi = lo + h;
      for (std::size_t j = 0; j < h; ++j) {
        const T x = lo[j];
        const T y = hi[j];
        lo[j] = x + y;
        hi[j] = x - y;
      }
    }
  }
}

}  // namespace iqplab
