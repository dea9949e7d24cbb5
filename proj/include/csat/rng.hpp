// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace csat {

// All randomness in the project flows through this wrapper. mt19937_64 output
// is pinned by the C++ standard, and bounded draws use rejection sampling
// instead of std distributions (whose mapping is implementation-defined), so
// a seed reproduces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t reject_above = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= reject_above);
    return v % bound;
  }

  std::uint8_t digit(int q) { return static_cast<std::uint8_t>(below(q)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace csat
