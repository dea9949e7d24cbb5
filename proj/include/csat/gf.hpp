// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "csat/errors.hpp"

namespace csat {

// Largest supported field modulus. Every algorithm in this project is
// exponential in structure sizes, so the scalar domain stays table-sized.
inline constexpr int kMaxPrime = 13;

bool is_prime(int q);

// The prime field F_q. Cheap value type; equality means same modulus.
class PrimeField {
 public:
  explicit PrimeField(int q);
  int q() const { return q_; }
  bool operator==(const PrimeField&) const = default;

 private:
  int q_;
};

// Raw digit helpers for hot loops. Inputs must already lie in [0, q).
inline std::uint8_t add_mod(std::uint8_t a, std::uint8_t b, int q) {
  int s = a + b;
  return static_cast<std::uint8_t>(s >= q ? s - q : s);
}
inline std::uint8_t sub_mod(std::uint8_t a, std::uint8_t b, int q) {
  int s = a - b;
  return static_cast<std::uint8_t>(s < 0 ? s + q : s);
}
inline std::uint8_t mul_mod(std::uint8_t a, std::uint8_t b, int q) {
  return static_cast<std::uint8_t>(a * b % q);
}
std::uint8_t pow_mod(std::uint8_t a, long long e, int q);
std::uint8_t inv_mod(std::uint8_t a, int q);  // DomainError on a == 0

// Smallest exponent representing the same power function on F_q:
// 0 for e = 0, otherwise the representative of e in [1, q-1] modulo q-1.
int reduce_exponent(long long e, int q);

// An element of F_q that knows its field, so mixed-field arithmetic
// fails fast instead of silently wrapping at the wrong modulus.
class FieldElement {
 public:
  FieldElement(PrimeField field, long long value);
  std::uint8_t value() const { return value_; }
  PrimeField field() const { return field_; }
  bool operator==(const FieldElement&) const = default;

  friend FieldElement operator+(FieldElement a, FieldElement b);
  friend FieldElement operator-(FieldElement a, FieldElement b);
  friend FieldElement operator*(FieldElement a, FieldElement b);
  FieldElement inverse() const;

 private:
  PrimeField field_;
  std::uint8_t value_;
};

}  // namespace csat
