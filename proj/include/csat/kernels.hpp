// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace csat {

// A kernel is the pair of byte-level primitives behind the exhaustive
// polynomial scans. All byte values live in [0, q).
struct KernelOps {
  const char* name;
  // dst[a*stride + s] = sum_e mat[a*q + e] * src[e*stride + s]  (mod q)
  // for a in [0,q), s in [0,stride): one contiguous block of q*stride bytes.
  // mat is a row-major q x q byte matrix. dst must not alias src.
  void (*axis_apply)(std::uint8_t* dst, const std::uint8_t* src,
                     std::size_t stride, int q, const std::uint8_t* mat);
  // Number of bytes equal to value.
  std::uint64_t (*count_value)(const std::uint8_t* data, std::size_t len,
                               std::uint8_t value);
};

enum class KernelKind { kAuto, kScalar, kAvx2 };

const KernelOps& scalar_kernel();
const KernelOps& avx2_kernel();  // entry points valid only when avx2_supported()
bool avx2_supported();

// kAuto resolves to the best kernel this CPU supports; asking for kAvx2
// without hardware support is a usage error.
const KernelOps& select_kernel(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);  // auto|scalar|avx2

// Process-wide kernel used by the poly-module scans; set once at startup.
void set_active_kernel(KernelKind kind);
const KernelOps& active_kernel();

// Row-major Vandermonde matrix V[a*q + e] = a^e mod q, with 0^0 = 1.
std::vector<std::uint8_t> vandermonde(int q);

// Value table of the dense coefficient tensor over all of F_q^n. Tensor
// indexing (shared with the poly module): variable 0 is the most significant
// digit, index = sum_i digit_i * q^(n-1-i); points map to slots of the
// returned table the same way.
std::vector<std::uint8_t> grid_eval(const std::vector<std::uint8_t>& coeffs,
                                    int n_vars, int q, const KernelOps& ops);

}  // namespace csat
