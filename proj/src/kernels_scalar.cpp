// SPDX-License-Identifier: Apache-2.0
#include <cstddef>
#include <cstdint>

#include "csat/kernels.hpp"

namespace csat {
namespace {

void axis_apply_scalar(std::uint8_t* dst, const std::uint8_t* src,
                       std::size_t stride, int q, const std::uint8_t* mat) {
  for (int a = 0; a < q; ++a) {
    std::uint8_t* out = dst + static_cast<std::size_t>(a) * stride;
    const std::uint8_t* row = mat + static_cast<std::size_t>(a) * q;
    for (std::size_t s = 0; s < stride; ++s) {
      // acc <= q * (q-1)^2 < 2048 for q <= 13; one division at the end.
      unsigned acc = 0;
      for (int e = 0; e < q; ++e)
        acc += static_cast<unsigned>(row[e]) *
               src[static_cast<std::size_t>(e) * stride + s];
      out[s] = static_cast<std::uint8_t>(acc % static_cast<unsigned>(q));
    }
  }
}

std::uint64_t count_value_scalar(const std::uint8_t* data, std::size_t len,
                                 std::uint8_t value) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < len; ++i) n += data[i] == value;
  return n;
}

}  // namespace

const KernelOps& scalar_kernel() {
  static constexpr KernelOps ops{"scalar", axis_apply_scalar, count_value_scalar};
  return ops;
}

}  // namespace csat
