// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "csat/bigint.hpp"
#include "csat/gf.hpp"
#include "csat/poly.hpp"

namespace csat {

class Rng;

// Level layout of an algebra of order q^h: levels 1..s of widths alphas[j-1],
// level 1 on top, level s the bottom affine layer. Coordinates are 0-based
// and grouped contiguously by level, level 1 first.
class Coordinatization {
 public:
  Coordinatization(PrimeField field, std::vector<int> alphas);

  PrimeField field() const { return field_; }
  int q() const { return field_.q(); }
  int s() const { return static_cast<int>(alphas_.size()); }
  int h() const { return h_; }
  const std::vector<int>& alphas() const { return alphas_; }
  int alpha(int level) const { return alphas_[level - 1]; }
  int level_of(int coord) const { return level_of_[coord]; }  // 1-based level
  int level_begin(int level) const { return begin_[level - 1]; }
  // First coordinate strictly below level j (== h for j = s).
  int higher_begin(int level) const { return begin_[level - 1] + alphas_[level - 1]; }

  bool operator==(const Coordinatization&) const = default;

 private:
  PrimeField field_;
  std::vector<int> alphas_;
  int h_;
  std::vector<int> level_of_;
  std::vector<int> begin_;
};

// An element is its h coordinates, level-1 block first. The all-zero vector
// is the designated zero element.
using Element = std::vector<std::uint8_t>;

// Digit characters for element strings: 0-9 then a, b, c (q <= 13).
char digit_char(int d);
int digit_value(char c);  // -1 when not a digit character
std::string element_to_string(const Element& e);
Element element_from_string(const Coordinatization& coord, const std::string& text);

// One level of a structured operation: the linear action on same-level
// input coordinates plus the tail in strictly-higher-level coordinates.
struct LevelSpec {
  // linear[i]: alpha_j x alpha_j row-major matrix applied to argument i's
  // level-j block.
  std::vector<std::vector<std::uint8_t>> linear;
  // Bottom level only: the constant tail.
  std::vector<std::uint8_t> tail_const;
  // Higher levels: alpha_j polynomials in the higher-level coordinates of
  // all arguments (argument-major, coordinates ascending).
  std::vector<MultiPoly> tail_polys;
  // Compiled form of tail_polys (alpha_j bytes per input tuple), built at
  // load time when small enough; empty means evaluate symbolically.
  std::vector<std::uint8_t> tail_table;

  bool operator==(const LevelSpec&) const = default;
};

struct OperationSpec {
  enum class Kind { kBuiltinSum, kTable, kStructured };

  std::string name;
  int arity;
  Kind kind;
  // kTable: q^(h*arity) results of h bytes each, argument 0's digits most
  // significant in the index.
  std::vector<std::uint8_t> table;
  // kStructured: one entry per level, level 1 first.
  std::vector<LevelSpec> levels;

  bool operator==(const OperationSpec&) const = default;
};

// A finite algebra presented in coordinatized form. Immutable after
// construction; construction checks shapes, not triangularity (see
// validate_triangular).
class CoordAlgebra {
 public:
  CoordAlgebra(Coordinatization coord, std::vector<OperationSpec> ops);

  const Coordinatization& coord() const { return coord_; }
  PrimeField field() const { return coord_.field(); }
  int q() const { return coord_.q(); }
  int h() const { return coord_.h(); }
  std::uint64_t order() const;  // q^h, saturating
  int max_arity() const { return max_arity_; }

  const std::vector<OperationSpec>& ops() const { return ops_; }
  bool has_op(const std::string& name) const;
  int op_index(const std::string& name) const;  // UsageError when unknown
  const OperationSpec& op(const std::string& name) const;

  Element zero() const { return Element(coord_.h(), 0); }

  Element eval_op(const std::string& name, const std::vector<Element>& args) const;
  // Hot path: args[i] points at h digits; out receives h digits.
  void eval_op_into(const OperationSpec& op, const std::uint8_t* const* args,
                    std::uint8_t* out) const;

  bool operator==(const CoordAlgebra&) const = default;

 private:
  Coordinatization coord_;
  std::vector<OperationSpec> ops_;
  int max_arity_;
};

// Exhaustive semantic check of the triangular form: every output coordinate,
// interpolated over all inputs, may touch same-level inputs only as lone
// degree-1 monomials and lower-level inputs not at all.
struct TriangularReport {
  bool valid = true;
  std::string op;        // offending operation
  int coordinate = -1;   // offending output coordinate (0-based)
  std::string monomial;  // offending monomial in tail naming
  std::string message;
};
TriangularReport validate_triangular(const CoordAlgebra& alg);

// The example family: h stacked copies of Z_q where p_i writes the m-fold
// product of the level-(i+1) coordinates into level i.
CoordAlgebra build_example(int q, int h, int m);

struct DegreeBound {
  BigInt coarse;   // (m*q)^h = |A|^(log_q m + 1)
  BigInt refined;  // (q-1) * (m*q)^(h - alpha_s) * alpha_s
};
DegreeBound degree_bound(const CoordAlgebra& alg);

// Two coordinatized factors with matching signatures; elements are pairs,
// written "<first>:<second>". Not itself a CoordAlgebra (the primes may
// differ) - only circuit projection and solve_product consume it.
struct ProductAlgebra {
  std::shared_ptr<const CoordAlgebra> first;
  std::shared_ptr<const CoordAlgebra> second;
};
ProductAlgebra direct_product(std::shared_ptr<const CoordAlgebra> a,
                              std::shared_ptr<const CoordAlgebra> b);

// File format (see README): parse_algebra accepts the text, load_algebra
// reads a file and also runs validate_triangular, print_algebra emits the
// canonical form that parse_algebra round-trips.
CoordAlgebra parse_algebra(const std::string& text);
CoordAlgebra load_algebra(const std::string& path);
std::string print_algebra(const CoordAlgebra& alg);

}  // namespace csat
