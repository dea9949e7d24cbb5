// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csat/bigint.hpp"
#include "csat/circuit.hpp"
#include "csat/poly.hpp"

namespace csat {

// Variable names for the translated system: one block of h coordinates per
// circuit input, so input 0 becomes x1..xh, input 1 y1..yh, ...
std::vector<std::string> system_var_names(int n_inputs, int h);

// The h output-difference polynomials: p_i interpolates
// (input coordinates) -> pi_i(g1) - pi_i(g2). An assignment satisfies the
// circuit iff every p_i vanishes on its coordinates. Exhaustion-limited.
std::vector<MultiPoly> circuit_to_system(const Circuit& c);

// f = prod_i (1 - p_i^(q-1)): maps into {0,1}, equals 1 exactly on common
// zeros of the system.
MultiPoly combine(const std::vector<MultiPoly>& system);

struct TranslationReport {
  bool iff_holds = false;   // f = 1 exactly on satisfying assignments
  bool in_01 = false;       // f never leaves {0,1}
  bool degree_ok = false;   // deg f <= refined <= coarse
  bool syspol_ok = false;   // aggregate level degrees within their bound
  int deg_f = 0;
  std::vector<int> coord_degrees;  // deg p_i per output coordinate
  BigInt refined;
  BigInt coarse;
  BigInt syspol_aggregate;  // sum over levels of alpha_j * max level degree
  BigInt syspol_bound;      // (m q)^(alpha_1+..+alpha_{s-1}) * alpha_s
  std::uint64_t points = 0;

  bool ok() const { return iff_holds && in_01 && degree_ok && syspol_ok; }
};

// Recomputes the system, then exhaustively confirms the iff between f = 1
// and circuit satisfaction and checks every degree claim.
TranslationReport verify_translation(const Circuit& c, const MultiPoly& f);

// Encodes p(x1..xn) = y as a circuit over build_example(q, h, m): each
// monomial becomes an m-ary tree of p-gates with the embedded variables
// (0,..,0,a_i) at its leaves, padded with unit constants and lifted to level
// 1; coefficients accumulate via '+'; the outputs compare the sum against
// the level-1 embedding of y. Requires deg p <= m^(h-1).
Circuit encode_field_equation(const MultiPoly& p, int y, int h, int m);

}  // namespace csat
