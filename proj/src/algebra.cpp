// SPDX-License-Identifier: Apache-2.0
#include "csat/algebra.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "csat/errors.hpp"
#include "csat/limits.hpp"
#include "csat/poly_text.hpp"

namespace csat {

namespace {

// Evaluation scratch for gathered tail inputs; bounds h * max_arity.
constexpr int kEvalBufferCap = 256;

// Tail tables are compiled at construction up to this many input tuples.
constexpr std::uint64_t kTailTableCap = 1u << 16;

}  // namespace

Coordinatization::Coordinatization(PrimeField field, std::vector<int> alphas)
    : field_(field), alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw UsageError("coordinatization needs at least one level");
  h_ = 0;
  for (std::size_t j = 0; j < alphas_.size(); ++j) {
    if (alphas_[j] < 1)
      throw UsageError("level width must be positive, got " + std::to_string(alphas_[j]));
    begin_.push_back(h_);
    h_ += alphas_[j];
    for (int k = 0; k < alphas_[j]; ++k) level_of_.push_back(static_cast<int>(j) + 1);
  }
}

char digit_char(int d) {
  return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + (d - 10));
}

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'c') return 10 + (c - 'a');
  return -1;
}

std::string element_to_string(const Element& e) {
  std::string out;
  out.reserve(e.size());
  for (std::uint8_t d : e) out.push_back(digit_char(d));
  return out;
}

Element element_from_string(const Coordinatization& coord, const std::string& text) {
  if (static_cast<int>(text.size()) != coord.h())
    throw FormatError("element '" + text + "' has " + std::to_string(text.size()) +
                      " digits, expected " + std::to_string(coord.h()));
  Element e(coord.h());
  for (int k = 0; k < coord.h(); ++k) {
    int d = digit_value(text[k]);
    if (d < 0 || d >= coord.q())
      throw FormatError("element '" + text + "': digit '" + text[k] +
                        "' out of range for q=" + std::to_string(coord.q()));
    e[k] = static_cast<std::uint8_t>(d);
  }
  return e;
}

namespace {

int tail_var_count(const Coordinatization& coord, int level, int arity) {
  return arity * (coord.h() - coord.higher_begin(level));
}

void validate_spec(const Coordinatization& coord, const OperationSpec& op) {
  const int q = coord.q();
  const int h = coord.h();
  if (op.arity < 1)
    throw UsageError("op '" + op.name + "': arity must be at least 1");
  switch (op.kind) {
    case OperationSpec::Kind::kBuiltinSum:
      if (!op.table.empty() || !op.levels.empty())
        throw UsageError("op '" + op.name + "': builtin-sum carries no data");
      return;
    case OperationSpec::Kind::kTable: {
      std::uint64_t points = points_count(q, h * op.arity);
      check_exhaustion(points, "operation table for '" + op.name + "'");
      if (op.table.size() != points * static_cast<std::uint64_t>(h))
        throw UsageError("op '" + op.name + "': table has " +
                         std::to_string(op.table.size()) + " digits, expected " +
                         std::to_string(points * static_cast<std::uint64_t>(h)));
      for (std::uint8_t d : op.table)
        if (d >= q) throw UsageError("op '" + op.name + "': table digit out of range");
      return;
    }
    case OperationSpec::Kind::kStructured: {
      if (static_cast<int>(op.levels.size()) != coord.s())
        throw UsageError("op '" + op.name + "': expected " + std::to_string(coord.s()) +
                         " level specs, got " + std::to_string(op.levels.size()));
      for (int j = 1; j <= coord.s(); ++j) {
        const LevelSpec& lv = op.levels[j - 1];
        const int a = coord.alpha(j);
        if (static_cast<int>(lv.linear.size()) != op.arity)
          throw UsageError("op '" + op.name + "' level " + std::to_string(j) +
                           ": expected one matrix per argument");
        for (const auto& mat : lv.linear) {
          if (static_cast<int>(mat.size()) != a * a)
            throw UsageError("op '" + op.name + "' level " + std::to_string(j) +
                             ": matrix must be " + std::to_string(a) + "x" + std::to_string(a));
          for (std::uint8_t d : mat)
            if (d >= q)
              throw UsageError("op '" + op.name + "' level " + std::to_string(j) +
                               ": matrix entry out of range");
        }
        if (j == coord.s()) {
          if (!lv.tail_polys.empty() || static_cast<int>(lv.tail_const.size()) != a)
            throw UsageError("op '" + op.name + "': bottom level tail must be " +
                             std::to_string(a) + " constant digits");
          for (std::uint8_t d : lv.tail_const)
            if (d >= q)
              throw UsageError("op '" + op.name + "': bottom tail digit out of range");
        } else {
          if (!lv.tail_const.empty() || static_cast<int>(lv.tail_polys.size()) != a)
            throw UsageError("op '" + op.name + "' level " + std::to_string(j) +
                             ": expected " + std::to_string(a) + " tail polynomials");
          const int nv = tail_var_count(coord, j, op.arity);
          for (const MultiPoly& p : lv.tail_polys) {
            if (p.q() != q || p.n_vars() != nv)
              throw UsageError("op '" + op.name + "' level " + std::to_string(j) +
                               ": tail polynomial must be over F_" + std::to_string(q) +
                               " in " + std::to_string(nv) + " variables");
          }
        }
      }
      return;
    }
  }
  throw UsageError("op '" + op.name + "': unknown kind");
}

// Precomputes the tail value tables of small structured levels so evaluation
// is a single lookup. Layout: alpha_j bytes per input tuple, tuple indexed
// with the first gathered coordinate most significant (the grid convention).
void compile_tails(const Coordinatization& coord, OperationSpec& op) {
  if (op.kind != OperationSpec::Kind::kStructured) return;
  for (int j = 1; j < coord.s(); ++j) {
    LevelSpec& lv = op.levels[j - 1];
    lv.tail_table.clear();
    const int nv = tail_var_count(coord, j, op.arity);
    std::uint64_t points = points_count(coord.q(), nv);
    if (points > kTailTableCap || points > exhaustion_limit()) continue;
    const int a = coord.alpha(j);
    lv.tail_table.assign(points * static_cast<std::uint64_t>(a), 0);
    for (int r = 0; r < a; ++r) {
      std::vector<std::uint8_t> tbl = lv.tail_polys[r].value_table();
      for (std::uint64_t idx = 0; idx < points; ++idx)
        lv.tail_table[idx * a + r] = tbl[idx];
    }
  }
}

}  // namespace

CoordAlgebra::CoordAlgebra(Coordinatization coord, std::vector<OperationSpec> ops)
    : coord_(std::move(coord)), ops_(std::move(ops)), max_arity_(0) {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (ops_[k].name == ops_[i].name)
        throw UsageError("duplicate op name '" + ops_[i].name + "'");
    validate_spec(coord_, ops_[i]);
    compile_tails(coord_, ops_[i]);
    max_arity_ = std::max(max_arity_, ops_[i].arity);
  }
  if (!has_op("+")) throw UsageError("algebra must provide the '+' operation");
  if (op("+").arity != 2) throw UsageError("'+' must be binary");
  if (coord_.h() * max_arity_ > kEvalBufferCap)
    throw UsageError("algebra exceeds the evaluation buffer (h * max arity > " +
                     std::to_string(kEvalBufferCap) + ")");
}

std::uint64_t CoordAlgebra::order() const { return points_count(q(), h()); }

bool CoordAlgebra::has_op(const std::string& name) const {
  for (const auto& o : ops_)
    if (o.name == name) return true;
  return false;
}

int CoordAlgebra::op_index(const std::string& name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return static_cast<int>(i);
  throw UsageError("unknown op '" + name + "'");
}

const OperationSpec& CoordAlgebra::op(const std::string& name) const {
  return ops_[op_index(name)];
}

Element CoordAlgebra::eval_op(const std::string& name, const std::vector<Element>& args) const {
  const OperationSpec& spec = op(name);
  if (static_cast<int>(args.size()) != spec.arity)
    throw UsageError("op '" + name + "' expects " + std::to_string(spec.arity) +
                     " arguments, got " + std::to_string(args.size()));
  std::vector<const std::uint8_t*> ptrs(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (static_cast<int>(args[i].size()) != h())
      throw UsageError("op '" + name + "': argument has wrong coordinate count");
    for (std::uint8_t d : args[i])
      if (d >= q()) throw UsageError("op '" + name + "': argument digit out of range");
    ptrs[i] = args[i].data();
  }
  Element out(h());
  eval_op_into(spec, ptrs.data(), out.data());
  return out;
}

void CoordAlgebra::eval_op_into(const OperationSpec& op, const std::uint8_t* const* args,
                                std::uint8_t* out) const {
  const int q = coord_.q();
  const int h = coord_.h();
  switch (op.kind) {
    case OperationSpec::Kind::kBuiltinSum: {
      for (int k = 0; k < h; ++k) {
        unsigned acc = 0;
        for (int i = 0; i < op.arity; ++i) acc += args[i][k];
        out[k] = static_cast<std::uint8_t>(acc % q);
      }
      return;
    }
    case OperationSpec::Kind::kTable: {
      std::uint64_t idx = 0;
      for (int i = 0; i < op.arity; ++i)
        for (int k = 0; k < h; ++k) idx = idx * q + args[i][k];
      const std::uint8_t* row = op.table.data() + idx * h;
      for (int k = 0; k < h; ++k) out[k] = row[k];
      return;
    }
    case OperationSpec::Kind::kStructured: {
      std::uint8_t buf[kEvalBufferCap];
      for (int j = 1; j <= coord_.s(); ++j) {
        const LevelSpec& lv = op.levels[j - 1];
        const int a = coord_.alpha(j);
        const int base = coord_.level_begin(j);
        for (int r = 0; r < a; ++r) {
          unsigned acc = 0;
          for (int i = 0; i < op.arity; ++i) {
            const std::uint8_t* row = lv.linear[i].data() + r * a;
            for (int c = 0; c < a; ++c) acc += row[c] * args[i][base + c];
          }
          out[base + r] = static_cast<std::uint8_t>(acc % q);
        }
        if (j == coord_.s()) {
          for (int r = 0; r < a; ++r)
            out[base + r] = add_mod(out[base + r], lv.tail_const[r], q);
          continue;
        }
        const int hb = coord_.higher_begin(j);
        int t = 0;
        for (int i = 0; i < op.arity; ++i)
          for (int c = hb; c < h; ++c) buf[t++] = args[i][c];
        if (!lv.tail_table.empty()) {
          std::uint64_t idx = 0;
          for (int u = 0; u < t; ++u) idx = idx * q + buf[u];
          const std::uint8_t* row = lv.tail_table.data() + idx * a;
          for (int r = 0; r < a; ++r) out[base + r] = add_mod(out[base + r], row[r], q);
        } else {
          std::vector<std::uint8_t> point(buf, buf + t);
          for (int r = 0; r < a; ++r)
            out[base + r] = add_mod(out[base + r], lv.tail_polys[r].evaluate(point), q);
        }
      }
      return;
    }
  }
}

TriangularReport validate_triangular(const CoordAlgebra& alg) {
  const Coordinatization& coord = alg.coord();
  const int q = alg.q();
  const int h = alg.h();
  for (const OperationSpec& op : alg.ops()) {
    const int n_in = h * op.arity;
    std::uint64_t points = points_count(q, n_in);
    check_exhaustion(points, "triangularity check for '" + op.name + "'");

    // One value table per output coordinate, built in one exhaustive sweep.
    std::vector<std::vector<std::uint8_t>> tables(h, std::vector<std::uint8_t>(points));
    std::vector<std::uint8_t> digits(n_in, 0);
    std::vector<const std::uint8_t*> ptrs(op.arity);
    for (int i = 0; i < op.arity; ++i) ptrs[i] = digits.data() + i * h;
    Element out(h);
    for (std::uint64_t idx = 0;; ++idx) {
      alg.eval_op_into(op, ptrs.data(), out.data());
      for (int k = 0; k < h; ++k) tables[k][idx] = out[k];
      int v = n_in - 1;
      while (v >= 0 && digits[v] == q - 1) digits[v--] = 0;
      if (v < 0) break;
      ++digits[v];
    }

    // Interpolation variables are argument-major: variable i*h + c is
    // coordinate c of argument i, named coord_var_name(i, c + 1).
    std::vector<std::string> names;
    for (int i = 0; i < op.arity; ++i)
      for (int c = 0; c < h; ++c) names.push_back(coord_var_name(i, c + 1));

    for (int k = 0; k < h; ++k) {
      const int out_level = coord.level_of(k);
      MultiPoly p = interpolate(alg.field(), n_in, tables[k]);
      for (const auto& [mono, coeff] : p.terms()) {
        int same_degree = 0, vars_total = 0;
        bool shallower = false;
        for (int v = 0; v < n_in; ++v) {
          if (mono[v] == 0) continue;
          vars_total += mono[v];
          int lvl = coord.level_of(v % h);
          if (lvl < out_level) shallower = true;
          if (lvl == out_level) same_degree += mono[v];
        }
        bool lone_linear = same_degree == 1 && vars_total == 1;
        if (shallower || (same_degree > 0 && !lone_linear)) {
          MultiPoly one(alg.field(), n_in);
          one.add_term(mono, coeff);
          TriangularReport r;
          r.valid = false;
          r.op = op.name;
          r.coordinate = k;
          r.monomial = poly_to_string(one, names);
          r.message = "op '" + op.name + "' output coordinate " + std::to_string(k + 1) +
                      " (level " + std::to_string(out_level) + "): monomial '" + r.monomial +
                      (shallower ? "' reads a shallower level" : "' is not linear in its own level");
          return r;
        }
      }
    }
  }
  return TriangularReport{};
}

CoordAlgebra build_example(int q, int h, int m) {
  if (h < 1) throw DomainError("build_example: h must be at least 1");
  if (m < 1) throw DomainError("build_example: m must be at least 1");
  Coordinatization coord(PrimeField(q), std::vector<int>(h, 1));

  std::vector<OperationSpec> ops;
  OperationSpec plus;
  plus.name = "+";
  plus.arity = 2;
  plus.kind = OperationSpec::Kind::kBuiltinSum;
  ops.push_back(std::move(plus));

  // p_i writes the m-fold product of the level-(i+1) coordinates into level
  // i and zero everywhere else; with unit widths the level-j tail sees
  // (h - j) coordinates per argument, the level-(j+1) one first.
  for (int i = 1; i <= h - 1; ++i) {
    OperationSpec p;
    p.name = "p" + std::to_string(i);
    p.arity = m;
    p.kind = OperationSpec::Kind::kStructured;
    for (int j = 1; j <= h; ++j) {
      LevelSpec lv;
      lv.linear.assign(m, std::vector<std::uint8_t>{0});
      if (j == h) {
        lv.tail_const = {0};
      } else {
        MultiPoly tail(coord.field(), m * (h - j));
        if (j == i) {
          Monomial mono(m * (h - j), 0);
          for (int arg = 0; arg < m; ++arg) mono[arg * (h - j)] = 1;
          tail.add_term(std::move(mono), 1);
        }
        lv.tail_polys.push_back(std::move(tail));
      }
      p.levels.push_back(std::move(lv));
    }
    ops.push_back(std::move(p));
  }
  return CoordAlgebra(std::move(coord), std::move(ops));
}

DegreeBound degree_bound(const CoordAlgebra& alg) {
  const int q = alg.q();
  const int h = alg.h();
  const int m = alg.max_arity();
  const int alpha_s = alg.coord().alphas().back();
  DegreeBound b;
  b.coarse = big_pow(static_cast<std::uint64_t>(m) * q, h);
  b.refined = BigInt(q - 1) * big_pow(static_cast<std::uint64_t>(m) * q, h - alpha_s) * alpha_s;
  return b;
}

ProductAlgebra direct_product(std::shared_ptr<const CoordAlgebra> a,
                              std::shared_ptr<const CoordAlgebra> b) {
  if (!a || !b) throw UsageError("direct_product: null factor");
  if (a->ops().size() != b->ops().size())
    throw UsageError("direct_product: factors have different op counts");
  for (const OperationSpec& op : a->ops()) {
    if (!b->has_op(op.name))
      throw UsageError("direct_product: second factor lacks op '" + op.name + "'");
    if (b->op(op.name).arity != op.arity)
      throw UsageError("direct_product: op '" + op.name + "' has mismatched arity");
  }
  return ProductAlgebra{std::move(a), std::move(b)};
}

}  // namespace csat
