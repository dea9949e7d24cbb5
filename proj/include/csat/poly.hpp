// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "csat/gf.hpp"

namespace csat {

class Rng;

// Exponent vector, one entry per variable, each already pushed through
// reduce_exponent, so equal monomials denote equal power functions.
using Monomial = std::vector<std::uint8_t>;

int monomial_degree(const Monomial& m);

// Storage and printing order: lower total degree first; within a degree the
// monomial whose exponent vector is lexicographically larger comes first, so
// x1 prints before x2 and constants lead.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Multivariate polynomial over F_q in normal form modulo x^q = x: no zero
// coefficients, every exponent in {0} u [1, q-1]. Normal forms are unique
// per function F_q^n -> F_q, so operator== decides functional equality.
class MultiPoly {
 public:
  using TermMap = std::map<Monomial, std::uint8_t, GradedLexLess>;

  MultiPoly(PrimeField field, int n_vars);  // the zero polynomial
  static MultiPoly constant(PrimeField field, int n_vars, long long value);
  static MultiPoly variable(PrimeField field, int n_vars, int var);

  PrimeField field() const { return field_; }
  int q() const { return field_.q(); }
  int n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::uint8_t constant_term() const;
  int degree() const;  // max total degree; 0 for constants, including zero

  // Adds coeff * x^exps, reducing exponents and dropping cancelled terms.
  void add_term(Monomial exps, long long coeff);

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly pow(long long e) const;

  bool operator==(const MultiPoly&) const = default;

  std::uint8_t evaluate(const std::vector<std::uint8_t>& point) const;
  FieldElement evaluate(const std::vector<FieldElement>& point) const;

  MultiPoly substitute_const(int var, int value) const;
  // x_var := b + sum_j beta[j] * y_j over the n-1 surviving variables y_j,
  // indexed in their original order.
  MultiPoly substitute_affine(int var, const std::vector<std::uint8_t>& beta,
                              int b) const;

  // Dense coefficient tensor / full value table in the shared grid indexing
  // (see kernels.hpp). Both are exhaustion-limited.
  std::vector<std::uint8_t> dense_coeffs() const;
  std::vector<std::uint8_t> value_table() const;

 private:
  PrimeField field_;
  int n_vars_;
  TermMap terms_;
};

// Unique normal-form polynomial matching the value table (q^n entries in the
// shared grid indexing), built from the pointwise indicator basis
// prod_i (1 - (x_i - a_i)^(q-1)).
MultiPoly interpolate(PrimeField field, int n_vars,
                      const std::vector<std::uint8_t>& table);

// Exact |p^{-1}(y)| by exhaustive grid evaluation.
std::uint64_t count_preimage(const MultiPoly& p, std::uint8_t y);

// The guaranteed preimage density q^(n - d - q*log2 q), kept symbolic as
// (q, n-d) so callers can compare exactly.
struct DensityBound {
  int q;
  int n_minus_d;
  double exponent() const;  // n - d - q*log2(q)
  double value() const;     // q^exponent
};
DensityBound density_bound(int n, int d, int q);

// Decides count >= q^(n - d - q*log2 q). For q = 2 the exponent is an
// integer and the comparison is pure integer arithmetic; for q >= 3 the
// threshold is irrational, hence never equal to an integer count, and an
// extended-precision strict compare decides it.
bool meets_density_bound(std::uint64_t count, int n, int d, int q);

enum class DensityStatus { kHolds, kVacuous, kViolation };
// kVacuous when y is not attained; kViolation signals an implementation bug.
DensityStatus check_density(const MultiPoly& p, std::uint8_t y);

// One step of the preimage-shrinking procedure: substituting a variable by a
// constant at least halves the preimage, substituting it by an affine
// combination of the others divides it by at least q.
struct ReductionStep {
  int var;                         // index substituted, in f_i's own numbering
  bool affine;                     // false: constant substitution
  std::uint8_t value;              // constant c, or the affine target b
  std::vector<std::uint8_t> beta;  // affine only: dual vector over f_i's vars;
                                   // x_var := inv(beta[var]) * (b - sum_{j != var} beta[j] x_j)
  std::uint64_t preimage_after;
  int degree_after;
};

struct ReductionTrace {
  int initial_arity;
  int initial_degree;
  std::uint64_t initial_preimage;
  std::vector<ReductionStep> steps;
  MultiPoly final_poly;
  std::uint64_t final_preimage;

  int l() const { return static_cast<int>(steps.size()); }
  int l1() const;  // constant steps
  int l2() const;  // affine steps
};

// Runs the substitution sequence f_0 .. f_l for a non-constant p and an
// attained y, stopping when the preimage is a singleton or f is univariate.
// Deterministic tie-breaks: the substituted variable is the highest index on
// which the preimage still varies (constant case) or the highest index with
// a nonzero beta entry (affine case); the constant is the smallest residue
// minimizing the surviving preimage; beta is the lexicographically smallest
// nonzero vector whose functional maps the preimage onto all of F_q.
ReductionTrace preimage_reduction(const MultiPoly& p, std::uint8_t y);

// Uniform over normal-form polynomials of degree <= max_degree: every
// admissible monomial gets an independent uniform coefficient in [0, q).
MultiPoly random_poly(PrimeField field, int n_vars, int max_degree, Rng& rng);

}  // namespace csat
