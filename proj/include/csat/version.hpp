// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace csat {

inline constexpr const char* kVersion = "csat 0.1.0";

// One limit shared by every exhaustive operation (value tables, interpolation,
// brute-force scans): the maximum number of evaluation points.
inline constexpr unsigned long long kExhaustionLimit = 1ull << 24;

}  // namespace csat
