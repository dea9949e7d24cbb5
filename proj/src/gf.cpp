// SPDX-License-Identifier: Apache-2.0
#include "csat/gf.hpp"

#include <string>

namespace csat {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

PrimeField::PrimeField(int q) : q_(q) {
  if (!is_prime(q))
    throw DomainError("modulus " + std::to_string(q) + " is not prime");
  if (q > kMaxPrime)
    throw DomainError("modulus " + std::to_string(q) + " exceeds the cap " +
                      std::to_string(kMaxPrime));
}

std::uint8_t pow_mod(std::uint8_t a, long long e, int q) {
  int base = a % q;
  int r = 1;
  while (e > 0) {
    if (e & 1) r = r * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return static_cast<std::uint8_t>(r);
}

std::uint8_t inv_mod(std::uint8_t a, int q) {
  if (a % q == 0) throw DomainError("zero has no multiplicative inverse");
  return pow_mod(a, q - 2, q);
}

int reduce_exponent(long long e, int q) {
  if (e < 0) throw UsageError("negative exponent");
  if (e == 0) return 0;
  return static_cast<int>(1 + (e - 1) % (q - 1));
}

FieldElement::FieldElement(PrimeField field, long long value) : field_(field) {
  long long q = field.q();
  value_ = static_cast<std::uint8_t>(((value % q) + q) % q);
}

static void require_same_field(FieldElement a, FieldElement b) {
  if (!(a.field() == b.field()))
    throw UsageError("field elements from different moduli");
}

FieldElement operator+(FieldElement a, FieldElement b) {
  require_same_field(a, b);
  return {a.field_, add_mod(a.value_, b.value_, a.field_.q())};
}

FieldElement operator-(FieldElement a, FieldElement b) {
  require_same_field(a, b);
  return {a.field_, sub_mod(a.value_, b.value_, a.field_.q())};
}

FieldElement operator*(FieldElement a, FieldElement b) {
  require_same_field(a, b);
  return {a.field_, mul_mod(a.value_, b.value_, a.field_.q())};
}

FieldElement FieldElement::inverse() const {
  return {field_, inv_mod(value_, field_.q())};
}

}  // namespace csat
