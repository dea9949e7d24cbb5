// SPDX-License-Identifier: Apache-2.0
#include "csat/translate.hpp"

#include <algorithm>
#include <utility>

#include "csat/errors.hpp"
#include "csat/limits.hpp"
#include "csat/poly_text.hpp"

namespace csat {

std::vector<std::string> system_var_names(int n_inputs, int h) {
  std::vector<std::string> names;
  for (int i = 0; i < n_inputs; ++i)
    for (int c = 0; c < h; ++c) names.push_back(coord_var_name(i, c + 1));
  return names;
}

std::vector<MultiPoly> circuit_to_system(const Circuit& c) {
  const CoordAlgebra& alg = c.algebra();
  const int q = alg.q();
  const int h = alg.h();
  const int n_vars = c.n_inputs() * h;
  const std::uint64_t points = points_count(q, n_vars);
  check_exhaustion(points, "circuit translation");

  std::vector<std::vector<std::uint8_t>> tables(h, std::vector<std::uint8_t>(points));
  std::vector<std::uint8_t> digits(n_vars, 0);
  std::vector<std::uint8_t> scratch(c.scratch_size());
  auto [o1, o2] = c.outputs();
  for (std::uint64_t idx = 0;; ++idx) {
    c.eval_digits(digits.data(), scratch.data());
    const std::uint8_t* a = scratch.data() + static_cast<std::size_t>(o1) * h;
    const std::uint8_t* b = scratch.data() + static_cast<std::size_t>(o2) * h;
    for (int i = 0; i < h; ++i) tables[i][idx] = sub_mod(a[i], b[i], q);
    int v = n_vars - 1;
    while (v >= 0 && digits[v] == q - 1) digits[v--] = 0;
    if (v < 0) break;
    ++digits[v];
  }

  std::vector<MultiPoly> system;
  system.reserve(h);
  for (int i = 0; i < h; ++i) system.push_back(interpolate(alg.field(), n_vars, tables[i]));
  return system;
}

MultiPoly combine(const std::vector<MultiPoly>& system) {
  if (system.empty()) throw UsageError("combine: empty system");
  const PrimeField field = system.front().field();
  const int n_vars = system.front().n_vars();
  MultiPoly f = MultiPoly::constant(field, n_vars, 1);
  for (const MultiPoly& p : system) {
    if (p.field() != field || p.n_vars() != n_vars)
      throw UsageError("combine: mixed fields or arities");
    f = f * (MultiPoly::constant(field, n_vars, 1) - p.pow(field.q() - 1));
  }
  return f;
}

TranslationReport verify_translation(const Circuit& c, const MultiPoly& f) {
  const CoordAlgebra& alg = c.algebra();
  const int q = alg.q();
  const int h = alg.h();
  const int n_vars = c.n_inputs() * h;
  if (f.q() != q || f.n_vars() != n_vars)
    throw UsageError("verify_translation: f does not match the circuit's shape");

  TranslationReport rep;
  rep.points = points_count(q, n_vars);
  check_exhaustion(rep.points, "translation verification");

  // The iff, pointwise: f = 1 exactly where the outputs agree.
  std::vector<std::uint8_t> fvals = f.value_table();
  std::vector<std::uint8_t> digits(n_vars, 0);
  std::vector<std::uint8_t> scratch(c.scratch_size());
  auto [o1, o2] = c.outputs();
  rep.iff_holds = true;
  rep.in_01 = true;
  for (std::uint64_t idx = 0;; ++idx) {
    c.eval_digits(digits.data(), scratch.data());
    const std::uint8_t* a = scratch.data() + static_cast<std::size_t>(o1) * h;
    const std::uint8_t* b = scratch.data() + static_cast<std::size_t>(o2) * h;
    bool sat = std::equal(a, a + h, b);
    if (fvals[idx] > 1) rep.in_01 = false;
    if ((fvals[idx] == 1) != sat) rep.iff_holds = false;
    int v = n_vars - 1;
    while (v >= 0 && digits[v] == q - 1) digits[v--] = 0;
    if (v < 0) break;
    ++digits[v];
  }

  // Degree claims, with the level degrees aggregated per Lemma sys-pol.
  std::vector<MultiPoly> system = circuit_to_system(c);
  DegreeBound bound = degree_bound(alg);
  rep.deg_f = f.degree();
  rep.refined = bound.refined;
  rep.coarse = bound.coarse;
  for (const MultiPoly& p : system) rep.coord_degrees.push_back(p.degree());
  rep.degree_ok = BigInt(rep.deg_f) <= rep.refined && rep.refined <= rep.coarse;

  const Coordinatization& coord = alg.coord();
  const int s = coord.s();
  const int alpha_s = coord.alphas().back();
  rep.syspol_aggregate = 0;
  for (int j = 1; j <= s; ++j) {
    int dj = 0;
    for (int k = 0; k < h; ++k)
      if (coord.level_of(k) == j) dj = std::max(dj, rep.coord_degrees[k]);
    rep.syspol_aggregate += BigInt(coord.alpha(j)) * dj;
  }
  rep.syspol_bound =
      big_pow(static_cast<std::uint64_t>(alg.max_arity()) * q, h - alpha_s) * alpha_s;
  rep.syspol_ok = rep.syspol_aggregate <= rep.syspol_bound;
  return rep;
}

namespace {

// Builds the encoding circuit gate list; units[j] caches the constant gate
// carrying 1 at level j's first coordinate.
struct EncodeBuilder {
  const CoordAlgebra& alg;
  std::vector<Gate> gates;
  std::vector<int> units;  // 1-based level -> gate id, -1 until created

  EncodeBuilder(const CoordAlgebra& a, int n_inputs) : alg(a), units(a.coord().s() + 1, -1) {
    for (int i = 0; i < n_inputs; ++i) {
      Gate g;
      g.kind = Gate::Kind::kInput;
      g.input_index = i;
      gates.push_back(std::move(g));
    }
  }

  int add_const(Element value) {
    Gate g;
    g.kind = Gate::Kind::kConst;
    g.value = std::move(value);
    gates.push_back(std::move(g));
    return static_cast<int>(gates.size()) - 1;
  }

  int unit(int level) {
    if (units[level] < 0) {
      Element e(alg.h(), 0);
      e[alg.coord().level_begin(level)] = 1;
      units[level] = add_const(std::move(e));
    }
    return units[level];
  }

  int apply(const std::string& op, std::vector<int> args) {
    Gate g;
    g.kind = Gate::Kind::kApply;
    g.op = alg.op_index(op);
    g.args = std::move(args);
    gates.push_back(std::move(g));
    return static_cast<int>(gates.size()) - 1;
  }

  // Product of the gates' values, all pure at `level`, result one level up.
  int product(int level, const std::vector<int>& args) {
    return apply("p" + std::to_string(level - 1), args);
  }
};

}  // namespace

Circuit encode_field_equation(const MultiPoly& p, int y, int h, int m) {
  const int q = p.q();
  const int n = p.n_vars();
  if (y < 0 || y >= q) throw UsageError("encode: y must lie in [0, q)");
  BigInt max_deg = big_pow(m, h - 1);
  if (BigInt(p.degree()) > max_deg)
    throw DomainError("encode: deg " + std::to_string(p.degree()) + " too high for h=" +
                      std::to_string(h) + ", m=" + std::to_string(m));

  auto alg = std::make_shared<const CoordAlgebra>(build_example(q, h, m));
  EncodeBuilder b(*alg, n);

  std::vector<int> term_gates;
  for (const auto& [mono, coeff] : p.terms()) {
    int degree = monomial_degree(mono);
    int gate;
    if (degree == 0) {
      // Constant term: embed it at level 1 directly.
      Element e(h, 0);
      e[0] = coeff;
      gate = b.add_const(std::move(e));
      term_gates.push_back(gate);
      continue;
    }

    // Leaves: each variable repeated by its exponent, values at level h.
    std::vector<int> layer;
    for (int v = 0; v < n; ++v)
      for (int e = 0; e < mono[v]; ++e) layer.push_back(v);

    // Smallest tree depth t with m^t leaves, padded with level-h units.
    int t = 0;
    std::uint64_t cap = 1;
    while (cap < layer.size()) {
      cap *= m;
      ++t;
    }
    while (layer.size() < cap) layer.push_back(b.unit(h));

    // t product layers walk the value from level h up to level h - t.
    for (int d = 1; d <= t; ++d) {
      std::vector<int> next;
      for (std::size_t i = 0; i < layer.size(); i += m)
        next.push_back(b.product(h - d + 1, {layer.begin() + i, layer.begin() + i + m}));
      layer = std::move(next);
    }
    gate = layer.front();

    // Lift the pure value the rest of the way to level 1.
    for (int level = h - t; level > 1; --level) {
      std::vector<int> args{gate};
      for (int i = 1; i < m; ++i) args.push_back(b.unit(level));
      gate = b.product(level, args);
    }

    // Scalar coefficient by repeated addition.
    int acc = gate;
    for (int i = 1; i < coeff; ++i) acc = b.apply("+", {acc, gate});
    term_gates.push_back(acc);
  }

  int sum;
  if (term_gates.empty()) {
    sum = b.add_const(Element(h, 0));
  } else {
    sum = term_gates.front();
    for (std::size_t i = 1; i < term_gates.size(); ++i)
      sum = b.apply("+", {sum, term_gates[i]});
  }
  Element target(h, 0);
  target[0] = static_cast<std::uint8_t>(y);
  int target_gate = b.add_const(std::move(target));
  return Circuit(std::move(alg), n, std::move(b.gates), sum, target_gate);
}

}  // namespace csat
