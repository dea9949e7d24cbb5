// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "csat/poly.hpp"

namespace csat {

// Generated variable names: arguments (or circuit inputs) get the letters
// x, y, z, w, u, v, s, t in order, then a9, a10, ...
std::string arg_letter(int arg);
// Coordinate `coord` (1-based) of argument `arg` (0-based): "x2", "y1", ...
std::string coord_var_name(int arg, int coord);
// Plain names for standalone polynomials: x1 .. xn.
std::vector<std::string> default_var_names(int n);

// Textual syntax: terms joined by '+', each a '*'-product of an optional
// integer coefficient and var^exp factors, e.g. "1 + x2*y2", "2*x1^2".
std::string poly_to_string(const MultiPoly& p,
                           const std::vector<std::string>& names);
std::string poly_to_string(const MultiPoly& p);

MultiPoly parse_poly(PrimeField field, const std::vector<std::string>& names,
                     const std::string& text);

}  // namespace csat
