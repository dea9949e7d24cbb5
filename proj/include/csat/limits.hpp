// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "csat/errors.hpp"
#include "csat/version.hpp"

namespace csat {

// One point budget shared by every exhaustive operation (value tables,
// interpolation, brute-force scans). Mutable once at startup via the CLI.
inline std::uint64_t& exhaustion_limit() {
  static std::uint64_t limit = kExhaustionLimit;
  return limit;
}

inline void check_exhaustion(std::uint64_t points, const std::string& what) {
  if (points > exhaustion_limit())
    throw ResourceError(what + " needs " + std::to_string(points) +
                        " points, limit is " + std::to_string(exhaustion_limit()));
}

// q^n, saturating at UINT64_MAX so oversized requests still trip the limit.
inline std::uint64_t points_count(int q, int n) {
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > UINT64_MAX / static_cast<std::uint64_t>(q)) return UINT64_MAX;
    v *= static_cast<std::uint64_t>(q);
  }
  return v;
}

}  // namespace csat
