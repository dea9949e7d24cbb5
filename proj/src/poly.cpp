// SPDX-License-Identifier: Apache-2.0
#include "csat/poly.hpp"

#include <cmath>
#include <utility>

#include "csat/errors.hpp"
#include "csat/kernels.hpp"
#include "csat/limits.hpp"
#include "csat/rng.hpp"

namespace csat {

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db;
  return a > b;
}

MultiPoly::MultiPoly(PrimeField field, int n_vars)
    : field_(field), n_vars_(n_vars) {
  if (n_vars < 0) throw UsageError("negative polynomial arity");
}

MultiPoly MultiPoly::constant(PrimeField field, int n_vars, long long value) {
  MultiPoly p(field, n_vars);
  p.add_term(Monomial(n_vars, 0), value);
  return p;
}

MultiPoly MultiPoly::variable(PrimeField field, int n_vars, int var) {
  if (var < 0 || var >= n_vars) throw UsageError("variable index out of range");
  MultiPoly p(field, n_vars);
  Monomial m(n_vars, 0);
  m[var] = 1;
  p.add_term(std::move(m), 1);
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0);
}

std::uint8_t MultiPoly::constant_term() const {
  if (terms_.empty()) return 0;
  const auto& front = *terms_.begin();  // graded order: constant comes first
  return monomial_degree(front.first) == 0 ? front.second : 0;
}

int MultiPoly::degree() const {
  return terms_.empty() ? 0 : monomial_degree(terms_.rbegin()->first);
}

void MultiPoly::add_term(Monomial exps, long long coeff) {
  if (static_cast<int>(exps.size()) != n_vars_)
    throw UsageError("monomial arity mismatch");
  const int q = field_.q();
  for (auto& e : exps) e = static_cast<std::uint8_t>(reduce_exponent(e, q));
  const int c = static_cast<int>(((coeff % q) + q) % q);
  if (c == 0) return;
  auto it = terms_.find(exps);
  if (it == terms_.end()) {
    terms_.emplace(std::move(exps), static_cast<std::uint8_t>(c));
    return;
  }
  const int merged = (it->second + c) % q;
  if (merged == 0)
    terms_.erase(it);
  else
    it->second = static_cast<std::uint8_t>(merged);
}

namespace {
void require_compatible(const MultiPoly& a, const MultiPoly& b) {
  if (a.field() != b.field() || a.n_vars() != b.n_vars())
    throw UsageError("polynomial field/arity mismatch");
}
}  // namespace

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  MultiPoly r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  MultiPoly r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, -static_cast<long long>(c));
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  require_compatible(a, b);
  MultiPoly r(a.field_, a.n_vars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(a.n_vars_);
      for (int i = 0; i < a.n_vars_; ++i)
        m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      r.add_term(std::move(m), static_cast<long long>(ca) * cb);
    }
  return r;
}

MultiPoly MultiPoly::pow(long long e) const {
  if (e < 0) throw UsageError("negative polynomial exponent");
  MultiPoly base = *this;
  MultiPoly r = constant(field_, n_vars_, 1);
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

std::uint8_t MultiPoly::evaluate(const std::vector<std::uint8_t>& point) const {
  if (static_cast<int>(point.size()) != n_vars_)
    throw UsageError("evaluation point arity mismatch");
  const int q = field_.q();
  for (auto v : point)
    if (v >= q) throw UsageError("evaluation point digit out of range");
  unsigned acc = 0;
  for (const auto& [m, c] : terms_) {
    unsigned t = c;
    for (int i = 0; i < n_vars_; ++i)
      if (m[i]) t = t * pow_mod(point[i], m[i], q) % static_cast<unsigned>(q);
    acc = (acc + t) % static_cast<unsigned>(q);
  }
  return static_cast<std::uint8_t>(acc);
}

FieldElement MultiPoly::evaluate(const std::vector<FieldElement>& point) const {
  std::vector<std::uint8_t> digits;
  digits.reserve(point.size());
  for (const auto& v : point) {
    if (v.field() != field_) throw UsageError("evaluation point field mismatch");
    digits.push_back(v.value());
  }
  return {field_, evaluate(digits)};
}

MultiPoly MultiPoly::substitute_const(int var, int value) const {
  if (var < 0 || var >= n_vars_) throw UsageError("variable index out of range");
  const int q = field_.q();
  if (value < 0 || value >= q) throw UsageError("substituted constant out of range");
  MultiPoly r(field_, n_vars_ - 1);
  for (const auto& [m, c] : terms_) {
    const std::uint8_t scale =
        pow_mod(static_cast<std::uint8_t>(value), m[var], q);
    if (!scale) continue;
    Monomial rest;
    rest.reserve(n_vars_ - 1);
    for (int i = 0; i < n_vars_; ++i)
      if (i != var) rest.push_back(m[i]);
    r.add_term(std::move(rest), static_cast<long long>(c) * scale);
  }
  return r;
}

MultiPoly MultiPoly::substitute_affine(int var,
                                       const std::vector<std::uint8_t>& beta,
                                       int b) const {
  if (var < 0 || var >= n_vars_) throw UsageError("variable index out of range");
  if (static_cast<int>(beta.size()) != n_vars_ - 1)
    throw UsageError("affine coefficient count mismatch");
  const int q = field_.q();
  if (b < 0 || b >= q) throw UsageError("affine constant out of range");

  MultiPoly repl = constant(field_, n_vars_ - 1, b);
  for (int j = 0; j < n_vars_ - 1; ++j) {
    if (beta[j] >= q) throw UsageError("affine coefficient out of range");
    if (!beta[j]) continue;
    Monomial m(n_vars_ - 1, 0);
    m[j] = 1;
    repl.add_term(std::move(m), beta[j]);
  }

  std::vector<MultiPoly> powers{constant(field_, n_vars_ - 1, 1)};
  MultiPoly r(field_, n_vars_ - 1);
  for (const auto& [m, c] : terms_) {
    while (static_cast<int>(powers.size()) <= m[var])
      powers.push_back(powers.back() * repl);
    Monomial rest;
    rest.reserve(n_vars_ - 1);
    for (int i = 0; i < n_vars_; ++i)
      if (i != var) rest.push_back(m[i]);
    MultiPoly term(field_, n_vars_ - 1);
    term.add_term(std::move(rest), c);
    r = r + term * powers[m[var]];
  }
  return r;
}

std::vector<std::uint8_t> MultiPoly::dense_coeffs() const {
  const int q = field_.q();
  const std::uint64_t size = points_count(q, n_vars_);
  check_exhaustion(size, "dense coefficient tensor");
  std::vector<std::uint8_t> dense(size, 0);
  for (const auto& [m, c] : terms_) {
    std::uint64_t idx = 0;
    for (int i = 0; i < n_vars_; ++i)
      idx = idx * static_cast<std::uint64_t>(q) + m[i];
    dense[idx] = c;
  }
  return dense;
}

std::vector<std::uint8_t> MultiPoly::value_table() const {
  return grid_eval(dense_coeffs(), n_vars_, field_.q(), active_kernel());
}

MultiPoly interpolate(PrimeField field, int n_vars,
                      const std::vector<std::uint8_t>& table) {
  const int q = field.q();
  const std::uint64_t size = points_count(q, n_vars);
  check_exhaustion(size, "interpolation");
  if (table.size() != size) throw UsageError("value table size mismatch");

  // unit[a][e]: coefficient of x^e in the indicator 1 - (x - a)^(q-1).
  std::vector<std::vector<std::uint8_t>> unit(q, std::vector<std::uint8_t>(q));
  for (int a = 0; a < q; ++a) {
    std::vector<int> pw{1};
    for (int k = 1; k <= q - 1; ++k) {
      std::vector<int> nx(pw.size() + 1, 0);
      for (std::size_t i = 0; i < pw.size(); ++i) {
        nx[i] = (nx[i] + pw[i] * ((q - a) % q)) % q;
        nx[i + 1] = (nx[i + 1] + pw[i]) % q;
      }
      pw.swap(nx);
    }
    for (int e = 0; e < q; ++e) {
      const int raw = (e == 0 ? 1 : 0) - (e < static_cast<int>(pw.size()) ? pw[e] : 0);
      unit[a][e] = static_cast<std::uint8_t>(((raw % q) + q) % q);
    }
  }

  std::vector<std::uint8_t> dense(size, 0);
  std::vector<std::uint8_t> digits(n_vars);
  for (std::uint64_t p = 0; p < size; ++p) {
    const std::uint8_t v = table[p];
    if (!v) continue;
    std::uint64_t pp = p;
    for (int i = n_vars - 1; i >= 0; --i) {
      digits[i] = static_cast<std::uint8_t>(pp % q);
      pp /= static_cast<std::uint64_t>(q);
    }
    // dense += v * tensor product of the univariate indicators at `digits`
    auto rec = [&](auto&& self, int axis, std::uint64_t idx, unsigned prod) -> void {
      if (axis == n_vars) {
        dense[idx] = static_cast<std::uint8_t>((dense[idx] + v * prod) % q);
        return;
      }
      const auto& u = unit[digits[axis]];
      for (int e = 0; e < q; ++e)
        if (u[e]) self(self, axis + 1, idx * q + e, prod * u[e] % q);
    };
    rec(rec, 0, 0, 1);
  }

  MultiPoly out(field, n_vars);
  Monomial m(n_vars, 0);
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    if (!dense[idx]) continue;
    std::uint64_t ii = idx;
    for (int i = n_vars - 1; i >= 0; --i) {
      m[i] = static_cast<std::uint8_t>(ii % q);
      ii /= static_cast<std::uint64_t>(q);
    }
    out.add_term(m, dense[idx]);
  }
  return out;
}

std::uint64_t count_preimage(const MultiPoly& p, std::uint8_t y) {
  if (y >= p.q()) throw UsageError("target value out of range");
  const auto table = p.value_table();
  return active_kernel().count_value(table.data(), table.size(), y);
}

double DensityBound::exponent() const {
  return n_minus_d - q * std::log2(static_cast<double>(q));
}

double DensityBound::value() const {
  return std::pow(static_cast<double>(q), exponent());
}

DensityBound density_bound(int n, int d, int q) { return {q, n - d}; }

bool meets_density_bound(std::uint64_t count, int n, int d, int q) {
  if (count == 0) return false;
  if (q == 2) {
    const int e = n - d - 2;  // 2*log2(2) = 2: integer exponent, exact compare
    if (e <= 0) return true;
    if (e >= 64) return false;
    return count >= (std::uint64_t{1} << e);
  }
  // q*log2(q) is irrational for odd primes, so the threshold never equals an
  // integer count and a strict extended-precision compare decides correctly.
  const long double thr = std::pow(
      static_cast<long double>(q),
      static_cast<long double>(n - d) - q * std::log2(static_cast<long double>(q)));
  return static_cast<long double>(count) > thr;
}

DensityStatus check_density(const MultiPoly& p, std::uint8_t y) {
  const std::uint64_t k = count_preimage(p, y);
  if (k == 0) return DensityStatus::kVacuous;
  return meets_density_bound(k, p.n_vars(), p.degree(), p.q())
             ? DensityStatus::kHolds
             : DensityStatus::kViolation;
}

int ReductionTrace::l1() const {
  int n = 0;
  for (const auto& s : steps) n += !s.affine;
  return n;
}

int ReductionTrace::l2() const { return l() - l1(); }

namespace {

std::vector<std::vector<std::uint8_t>> preimage_points(const MultiPoly& p,
                                                       std::uint8_t y) {
  const auto table = p.value_table();
  const int q = p.q(), n = p.n_vars();
  std::vector<std::vector<std::uint8_t>> pts;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    if (table[idx] != y) continue;
    std::vector<std::uint8_t> digits(n);
    std::uint64_t v = idx;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = static_cast<std::uint8_t>(v % q);
      v /= static_cast<std::uint64_t>(q);
    }
    pts.push_back(std::move(digits));
  }
  return pts;
}

// Greedy echelon pass over pts; returns at most `want` of them that are
// linearly independent over F_q.
std::vector<std::vector<std::uint8_t>> independent_subset(
    const std::vector<std::vector<std::uint8_t>>& pts, int q, int want) {
  std::vector<std::vector<std::uint8_t>> rows;  // reduced, pivot normalized to 1
  std::vector<int> pivots;
  std::vector<std::vector<std::uint8_t>> witnesses;
  for (const auto& pt : pts) {
    if (static_cast<int>(witnesses.size()) == want) break;
    std::vector<std::uint8_t> v = pt;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::uint8_t f = v[pivots[r]];
      if (!f) continue;
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = sub_mod(v[i], mul_mod(f, rows[r][i], q), q);
    }
    int piv = -1;
    for (std::size_t i = 0; i < v.size() && piv < 0; ++i)
      if (v[i]) piv = static_cast<int>(i);
    if (piv < 0) continue;
    const std::uint8_t inv = inv_mod(v[piv], q);
    for (auto& x : v) x = mul_mod(x, inv, q);
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    witnesses.push_back(pt);
  }
  return witnesses;
}

std::uint8_t dot_mod(const std::vector<std::uint8_t>& a,
                     const std::vector<std::uint8_t>& b, int q) {
  unsigned acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<unsigned>(a[i]) * b[i];
  return static_cast<std::uint8_t>(acc % static_cast<unsigned>(q));
}

bool next_digit_vector(std::vector<std::uint8_t>& v, int q) {
  for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
    if (v[i] + 1 < q) {
      ++v[i];
      return true;
    }
    v[i] = 0;
  }
  return false;
}

}  // namespace

ReductionTrace preimage_reduction(const MultiPoly& p, std::uint8_t y) {
  if (p.is_constant())
    throw DomainError("preimage_reduction needs a non-constant polynomial");
  if (y >= p.q()) throw UsageError("target value out of range");
  const int q = p.q();

  MultiPoly f = p;
  auto pre = preimage_points(f, y);
  if (pre.empty()) throw DomainError("target value is not attained");
  const std::uint64_t initial = pre.size();

  const std::uint64_t qq = points_count(q, q);
  std::vector<ReductionStep> steps;

  while (f.n_vars() > 1 && pre.size() > 1) {
    const std::uint64_t before = pre.size();
    const int arity = f.n_vars();

    if (before < qq) {
      // Highest variable on which the preimage still varies: substituting it
      // leaves at least two nonempty value classes, so the smallest one is
      // at most half of the preimage.
      int var = -1;
      for (int i = arity - 1; i >= 0 && var < 0; --i)
        for (std::size_t k = 1; k < pre.size(); ++k)
          if (pre[k][i] != pre[0][i]) {
            var = i;
            break;
          }
      std::vector<std::uint64_t> bucket(q, 0);
      for (const auto& pt : pre) ++bucket[pt[var]];
      int c = -1;
      for (int v = 0; v < q; ++v)
        if (bucket[v] && (c < 0 || bucket[v] < bucket[static_cast<std::size_t>(c)]))
          c = v;
      f = f.substitute_const(var, c);
      std::vector<std::vector<std::uint8_t>> kept;
      for (auto& pt : pre)
        if (pt[var] == c) {
          pt.erase(pt.begin() + var);
          kept.push_back(std::move(pt));
        }
      pre = std::move(kept);
      if (pre.empty() || pre.size() * 2 > before)
        throw Error("internal: constant step failed to halve the preimage");
      steps.push_back({var, false, static_cast<std::uint8_t>(c), {},
                       pre.size(), f.degree()});
    } else {
      // q^q points cannot fit inside a (q-1)-dimensional span, so q linearly
      // independent preimage vectors exist; they witness that some dual
      // functional maps the preimage onto all of F_q.
      const auto witnesses = independent_subset(pre, q, q);
      if (static_cast<int>(witnesses.size()) < q)
        throw Error("internal: missing independent preimage vectors");
      std::vector<std::uint8_t> beta(arity, 0);
      bool found = false;
      while (next_digit_vector(beta, q)) {
        std::vector<char> seen(q, 0);
        int distinct = 0;
        for (const auto& pt : pre) {
          char& s = seen[dot_mod(beta, pt, q)];
          if (!s) {
            s = 1;
            ++distinct;
          }
          if (distinct == q) break;
        }
        if (distinct == q) {
          found = true;
          break;
        }
      }
      if (!found) throw Error("internal: no surjective dual vector");

      int u = arity - 1;
      while (!beta[u]) --u;
      std::vector<std::uint64_t> bucket(q, 0);
      for (const auto& pt : pre) ++bucket[dot_mod(beta, pt, q)];
      int b = 0;
      for (int v = 1; v < q; ++v)
        if (bucket[v] < bucket[b]) b = v;

      // x_u := inv(beta_u) * (b - sum_{j != u} beta_j x_j)
      const std::uint8_t ibu = inv_mod(beta[u], q);
      std::vector<std::uint8_t> coeffs;
      coeffs.reserve(arity - 1);
      for (int j = 0; j < arity; ++j)
        if (j != u) coeffs.push_back(mul_mod(ibu, sub_mod(0, beta[j], q), q));
      f = f.substitute_affine(u, coeffs,
                              mul_mod(ibu, static_cast<std::uint8_t>(b), q));
      std::vector<std::vector<std::uint8_t>> kept;
      for (auto& pt : pre)
        if (dot_mod(beta, pt, q) == b) {
          pt.erase(pt.begin() + u);
          kept.push_back(std::move(pt));
        }
      pre = std::move(kept);
      if (pre.empty() || pre.size() * q > before)
        throw Error("internal: affine step failed to divide the preimage by q");
      steps.push_back({u, true, static_cast<std::uint8_t>(b), std::move(beta),
                       pre.size(), f.degree()});
    }
  }

  return ReductionTrace{p.n_vars(), p.degree(),       initial,
                        std::move(steps), std::move(f), pre.size()};
}

MultiPoly random_poly(PrimeField field, int n_vars, int max_degree, Rng& rng) {
  const int q = field.q();
  check_exhaustion(points_count(q, n_vars), "random polynomial");
  MultiPoly p(field, n_vars);
  Monomial m(n_vars, 0);
  while (true) {
    if (monomial_degree(m) <= max_degree) {
      const std::uint8_t c = rng.digit(q);
      if (c) p.add_term(m, c);
    }
    if (!next_digit_vector(m, q)) break;
  }
  return p;
}

}  // namespace csat
