// SPDX-License-Identifier: Apache-2.0
#include "csat/kernels.hpp"

#include "csat/errors.hpp"
#include "csat/gf.hpp"
#include "csat/limits.hpp"

namespace csat {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelOps& select_kernel(KernelKind kind) {
  switch (kind) {
    case KernelKind::kScalar:
      return scalar_kernel();
    case KernelKind::kAvx2:
      if (!avx2_supported()) throw UsageError("this cpu has no avx2 support");
      return avx2_kernel();
    case KernelKind::kAuto:
      break;
  }
  return avx2_supported() ? avx2_kernel() : scalar_kernel();
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "auto") return KernelKind::kAuto;
  if (name == "scalar") return KernelKind::kScalar;
  if (name == "avx2") return KernelKind::kAvx2;
  throw UsageError("unknown kernel '" + name + "' (expected auto|scalar|avx2)");
}

namespace {
const KernelOps* g_active = nullptr;
}  // namespace

void set_active_kernel(KernelKind kind) { g_active = &select_kernel(kind); }

const KernelOps& active_kernel() {
  if (!g_active) g_active = &select_kernel(KernelKind::kAuto);
  return *g_active;
}

std::vector<std::uint8_t> vandermonde(int q) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(q) * q);
  for (int a = 0; a < q; ++a)
    for (int e = 0; e < q; ++e)
      v[static_cast<std::size_t>(a) * q + e] =
          pow_mod(static_cast<std::uint8_t>(a), e, q);
  return v;
}

// Evaluation is one Vandermonde transform per axis: after transforming axis
// i, slot index digit i means "value of x_i" instead of "exponent of x_i".
std::vector<std::uint8_t> grid_eval(const std::vector<std::uint8_t>& coeffs,
                                    int n_vars, int q, const KernelOps& ops) {
  const std::uint64_t size = points_count(q, n_vars);
  check_exhaustion(size, "grid_eval");
  if (coeffs.size() != size) throw UsageError("coefficient tensor size mismatch");
  if (n_vars == 0) return coeffs;

  const auto vmat = vandermonde(q);
  std::vector<std::uint8_t> cur = coeffs;
  std::vector<std::uint8_t> nxt(cur.size());
  std::size_t stride = cur.size() / q;
  for (int axis = 0; axis < n_vars; ++axis) {
    const std::size_t block = stride * q;
    for (std::size_t base = 0; base < cur.size(); base += block)
      ops.axis_apply(nxt.data() + base, cur.data() + base, stride, q, vmat.data());
    cur.swap(nxt);
    stride /= q;
  }
  return cur;
}

}  // namespace csat
