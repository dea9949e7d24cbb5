// SPDX-License-Identifier: Apache-2.0
#include <cstddef>
#include <cstdint>

#include "csat/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace csat {
namespace {

// Byte multiplication mod q is a 16-entry table lookup: source bytes are
// < q <= 13, so pshufb indexes them directly (high bit never set).
void axis_apply_avx2(std::uint8_t* dst, const std::uint8_t* src,
                     std::size_t stride, int q, const std::uint8_t* mat) {
  __m256i mul_tab[16];
  for (int c = 0; c < q; ++c) {
    alignas(32) std::uint8_t t[32];
    for (int x = 0; x < 16; ++x) {
      t[x] = static_cast<std::uint8_t>(c * x % q);
      t[16 + x] = t[x];
    }
    mul_tab[c] = _mm256_load_si256(reinterpret_cast<const __m256i*>(t));
  }
  const __m256i qv = _mm256_set1_epi8(static_cast<char>(q));
  const __m256i qm1 = _mm256_set1_epi8(static_cast<char>(q - 1));

  for (int a = 0; a < q; ++a) {
    std::uint8_t* out = dst + static_cast<std::size_t>(a) * stride;
    const std::uint8_t* row = mat + static_cast<std::size_t>(a) * q;
    std::size_t s = 0;
    for (; s + 32 <= stride; s += 32) {
      __m256i acc = _mm256_setzero_si256();
      for (int e = 0; e < q; ++e) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(
            src + static_cast<std::size_t>(e) * stride + s));
        acc = _mm256_add_epi8(acc, _mm256_shuffle_epi8(mul_tab[row[e]], x));
        // Both addends were < q, so acc < 2q <= 26: signed compare is safe
        // and one conditional subtract folds back below q.
        const __m256i over = _mm256_cmpgt_epi8(acc, qm1);
        acc = _mm256_sub_epi8(acc, _mm256_and_si256(over, qv));
      }
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + s), acc);
    }
    for (; s < stride; ++s) {
      unsigned acc = 0;
      for (int e = 0; e < q; ++e)
        acc += static_cast<unsigned>(row[e]) *
               src[static_cast<std::size_t>(e) * stride + s];
      out[s] = static_cast<std::uint8_t>(acc % static_cast<unsigned>(q));
    }
  }
}

std::uint64_t count_value_avx2(const std::uint8_t* data, std::size_t len,
                               std::uint8_t value) {
  const __m256i v = _mm256_set1_epi8(static_cast<char>(value));
  std::uint64_t n = 0;
  std::size_t i = 0;
  for (; i + 32 <= len; i += 32) {
    const __m256i x =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const unsigned mask =
        static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(x, v)));
    n += static_cast<unsigned>(__builtin_popcount(mask));
  }
  for (; i < len; ++i) n += data[i] == value;
  return n;
}

}  // namespace

const KernelOps& avx2_kernel() {
  static constexpr KernelOps ops{"avx2", axis_apply_avx2, count_value_avx2};
  return ops;
}

}  // namespace csat

#else  // no AVX2 at compile time: dispatch guards against ever calling these

namespace csat {

const KernelOps& avx2_kernel() {
  static constexpr KernelOps ops{"avx2", nullptr, nullptr};
  return ops;
}

}  // namespace csat

#endif
