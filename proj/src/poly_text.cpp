// SPDX-License-Identifier: Apache-2.0
#include "csat/poly_text.hpp"

#include <algorithm>
#include <cctype>

#include "csat/errors.hpp"

namespace csat {

std::string arg_letter(int arg) {
  static constexpr char kLetters[] = "xyzwuvst";
  if (arg >= 0 && arg < 8) return std::string(1, kLetters[arg]);
  return "a" + std::to_string(arg + 1);
}

std::string coord_var_name(int arg, int coord) {
  return arg_letter(arg) + std::to_string(coord);
}

std::vector<std::string> default_var_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::string poly_to_string(const MultiPoly& p,
                           const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != p.n_vars())
    throw UsageError("variable name count mismatch");
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    std::vector<std::string> factors;
    if (c != 1 || monomial_degree(m) == 0)
      factors.push_back(std::to_string(static_cast<int>(c)));
    for (int i = 0; i < p.n_vars(); ++i) {
      if (!m[i]) continue;
      std::string f = names[i];
      if (m[i] > 1) f += "^" + std::to_string(static_cast<int>(m[i]));
      factors.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "*";
      out += factors[i];
    }
  }
  return out;
}

std::string poly_to_string(const MultiPoly& p) {
  return poly_to_string(p, default_var_names(p.n_vars()));
}

MultiPoly parse_poly(PrimeField field, const std::vector<std::string>& names,
                     const std::string& text) {
  MultiPoly p(field, static_cast<int>(names.size()));
  for (const std::string& raw_term : split(text, '+')) {
    const std::string term = trim(raw_term);
    if (term.empty())
      throw FormatError("empty term in polynomial '" + trim(text) + "'");
    long long coeff = 1;
    std::vector<long long> exps(names.size(), 0);
    for (const std::string& raw_factor : split(term, '*')) {
      const std::string factor = trim(raw_factor);
      if (factor.empty())
        throw FormatError("empty factor in term '" + term + "'");
      if (all_digits(factor)) {
        if (factor.size() > 9)
          throw FormatError("coefficient too large: '" + factor + "'");
        coeff = coeff * std::stoll(factor) % field.q();
        continue;
      }
      std::string name = factor;
      long long e = 1;
      if (const auto pos = factor.find('^'); pos != std::string::npos) {
        name = trim(factor.substr(0, pos));
        const std::string es = trim(factor.substr(pos + 1));
        if (!all_digits(es) || es.size() > 6)
          throw FormatError("bad exponent in '" + factor + "'");
        e = std::stoll(es);
      }
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end())
        throw FormatError("unknown variable '" + name + "'");
      exps[static_cast<std::size_t>(it - names.begin())] += e;
    }
    Monomial m(names.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = static_cast<std::uint8_t>(reduce_exponent(exps[i], field.q()));
    p.add_term(std::move(m), coeff);
  }
  return p;
}

}  // namespace csat
