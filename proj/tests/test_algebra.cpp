// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "csat/algebra.hpp"
#include "csat/errors.hpp"
#include "csat/limits.hpp"

using namespace csat;

namespace {

Element el(const CoordAlgebra& alg, const std::string& text) {
  return element_from_string(alg.coord(), text);
}

// Element with the given 0-based index, first coordinate most significant.
Element decode(const CoordAlgebra& alg, std::uint64_t idx) {
  Element e(alg.h());
  for (int k = alg.h() - 1; k >= 0; --k) {
    e[k] = static_cast<std::uint8_t>(idx % alg.q());
    idx /= alg.q();
  }
  return e;
}

struct LimitGuard {
  std::uint64_t saved = exhaustion_limit();
  ~LimitGuard() { exhaustion_limit() = saved; }
};

const char* kA22Text =
    "ALGEBRA v1\n"
    "q 2\n"
    "alphas 1 1\n"
    "op + 2 builtin-sum\n"
    "op p1 2 structured\n"
    "  level 1 linear [[0]] [[0]] tail poly x2*y2\n"
    "  level 2 linear [[0]] [[0]] tail const 0\n"
    "END\n";

// Arity-1 table op over q=2, alphas {1,1}; out1/out2 give each output
// coordinate as a function of the input digits (x1, x2).
CoordAlgebra table_algebra(std::uint8_t (*out1)(int, int), std::uint8_t (*out2)(int, int)) {
  Coordinatization coord(PrimeField(2), {1, 1});
  OperationSpec plus{"+", 2, OperationSpec::Kind::kBuiltinSum, {}, {}};
  OperationSpec t;
  t.name = "t";
  t.arity = 1;
  t.kind = OperationSpec::Kind::kTable;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      t.table.push_back(out1(x1, x2));
      t.table.push_back(out2(x1, x2));
    }
  return CoordAlgebra(coord, {plus, t});
}

}  // namespace

TEST_CASE("coordinatization exposes the level layout") {
  Coordinatization c(PrimeField(3), {2, 1});
  CHECK(c.q() == 3);
  CHECK(c.s() == 2);
  CHECK(c.h() == 3);
  CHECK(c.alpha(1) == 2);
  CHECK(c.alpha(2) == 1);
  CHECK(c.level_of(0) == 1);
  CHECK(c.level_of(1) == 1);
  CHECK(c.level_of(2) == 2);
  CHECK(c.level_begin(1) == 0);
  CHECK(c.level_begin(2) == 2);
  CHECK(c.higher_begin(1) == 2);
  CHECK(c.higher_begin(2) == 3);

  CHECK_THROWS_AS(Coordinatization(PrimeField(2), {}), UsageError);
  CHECK_THROWS_AS(Coordinatization(PrimeField(2), {1, 0}), UsageError);
}

TEST_CASE("element codec round trips and rejects bad digits") {
  Coordinatization c(PrimeField(2), {1, 1});
  CHECK(element_to_string(Element{1, 0}) == "10");
  CHECK(element_from_string(c, "10") == Element{1, 0});
  CHECK(element_from_string(c, "01") == Element{0, 1});
  CHECK_THROWS_AS(element_from_string(c, "1"), FormatError);
  CHECK_THROWS_AS(element_from_string(c, "012"), FormatError);
  CHECK_THROWS_AS(element_from_string(c, "12"), FormatError);  // 2 >= q
  CHECK_THROWS_AS(element_from_string(c, "1x"), FormatError);

  // Digits 10..12 print as a..c.
  Coordinatization c13(PrimeField(13), {1, 1, 1});
  CHECK(element_to_string(Element{10, 11, 12}) == "abc");
  CHECK(element_from_string(c13, "abc") == Element{10, 11, 12});
  CHECK(digit_char(9) == '9');
  CHECK(digit_value('b') == 11);
  CHECK(digit_value('d') == -1);
}

TEST_CASE("builtin sum is componentwise addition") {
  for (const CoordAlgebra& alg : {build_example(2, 2, 2), build_example(3, 2, 2)}) {
    const std::uint64_t n = alg.order();
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < n; ++j) {
        Element a = decode(alg, i), b = decode(alg, j);
        Element sum = alg.eval_op("+", {a, b});
        for (int k = 0; k < alg.h(); ++k)
          CHECK(sum[k] == (a[k] + b[k]) % alg.q());
      }
  }
}

TEST_CASE("example family: p_i is the product one level up") {
  CoordAlgebra a22 = build_example(2, 2, 2);
  CHECK(a22.eval_op("p1", {el(a22, "01"), el(a22, "01")}) == el(a22, "10"));
  CHECK(a22.eval_op("p1", {el(a22, "01"), el(a22, "00")}) == el(a22, "00"));
  CHECK(a22.eval_op("p1", {el(a22, "11"), el(a22, "01")}) == el(a22, "10"));

  CoordAlgebra a322 = build_example(3, 2, 2);
  CHECK(a322.eval_op("p1", {el(a322, "02"), el(a322, "02")}) == el(a322, "10"));
  CHECK(a322.eval_op("p1", {el(a322, "02"), el(a322, "01")}) == el(a322, "20"));

  // Exhaustively: level i of p_i is the product of the level-(i+1) digits,
  // every other level is zero.
  for (const CoordAlgebra& alg : {build_example(2, 3, 2), build_example(3, 2, 2)}) {
    const std::uint64_t n = alg.order();
    for (int i = 1; i <= alg.h() - 1; ++i) {
      std::string op = "p" + std::to_string(i);
      for (std::uint64_t x = 0; x < n; ++x)
        for (std::uint64_t y = 0; y < n; ++y) {
          Element a = decode(alg, x), b = decode(alg, y);
          Element got = alg.eval_op(op, {a, b});
          Element want(alg.h(), 0);
          want[i - 1] = static_cast<std::uint8_t>(a[i] * b[i] % alg.q());
          CHECK(got == want);
        }
    }
  }

  // Wider product: m = 3 multiplies three level-2 digits into level 1.
  CoordAlgebra a23 = build_example(2, 2, 3);
  CHECK(a23.max_arity() == 3);
  CHECK(a23.eval_op("p1", {el(a23, "01"), el(a23, "01"), el(a23, "01")}) == el(a23, "10"));
  CHECK(a23.eval_op("p1", {el(a23, "01"), el(a23, "01"), el(a23, "00")}) == el(a23, "00"));
}

TEST_CASE("structured ops combine the linear part with the tail") {
  // f(x, y) = (x1 + y1 + x2*y2, x2 + y2 + 1) over q = 2.
  Coordinatization coord(PrimeField(2), {1, 1});
  OperationSpec plus{"+", 2, OperationSpec::Kind::kBuiltinSum, {}, {}};
  OperationSpec f;
  f.name = "f";
  f.arity = 2;
  f.kind = OperationSpec::Kind::kStructured;
  LevelSpec top;
  top.linear = {{1}, {1}};
  MultiPoly tail(PrimeField(2), 2);
  tail.add_term({1, 1}, 1);
  top.tail_polys = {tail};
  LevelSpec bottom;
  bottom.linear = {{1}, {1}};
  bottom.tail_const = {1};
  f.levels = {top, bottom};
  CoordAlgebra alg(coord, {plus, f});

  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y) {
      Element a = decode(alg, x), b = decode(alg, y);
      Element got = alg.eval_op("f", {a, b});
      CHECK(got[0] == (a[0] + b[0] + a[1] * b[1]) % 2);
      CHECK(got[1] == (a[1] + b[1] + 1) % 2);
    }
  CHECK(validate_triangular(alg).valid);
}

TEST_CASE("symbolic tails evaluate like compiled ones") {
  CoordAlgebra compiled = build_example(2, 2, 2);
  CoordAlgebra symbolic = [&] {
    LimitGuard guard;
    exhaustion_limit() = 2;  // below the 4-point level-1 tail: compile skipped
    return build_example(2, 2, 2);
  }();
  CHECK(compiled.op("p1").levels[0].tail_table.size() == 4);  // 2^2 tuples, alpha_1 = 1
  CHECK(symbolic.op("p1").levels[0].tail_table.empty());
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y) {
      Element a = decode(compiled, x), b = decode(compiled, y);
      CHECK(compiled.eval_op("p1", {a, b}) == symbolic.eval_op("p1", {a, b}));
    }
}

TEST_CASE("table ops evaluate by lookup") {
  Coordinatization coord(PrimeField(2), {1});
  OperationSpec plus{"+", 2, OperationSpec::Kind::kBuiltinSum, {}, {}};
  OperationSpec x;
  x.name = "xor";
  x.arity = 2;
  x.kind = OperationSpec::Kind::kTable;
  x.table = {0, 1, 1, 0};  // 00->0 01->1 10->1 11->0
  CoordAlgebra alg(coord, {plus, x});
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b)
      CHECK(alg.eval_op("xor", {decode(alg, a), decode(alg, b)}) ==
            alg.eval_op("+", {decode(alg, a), decode(alg, b)}));
  CHECK(validate_triangular(alg).valid);
}

TEST_CASE("eval_op validates its arguments") {
  CoordAlgebra alg = build_example(2, 2, 2);
  CHECK_THROWS_AS(alg.eval_op("p1", {el(alg, "01")}), UsageError);
  CHECK_THROWS_AS(alg.eval_op("nope", {el(alg, "01"), el(alg, "01")}), UsageError);
  CHECK_THROWS_AS(alg.eval_op("+", {Element{1}, el(alg, "01")}), UsageError);
  CHECK_THROWS_AS(alg.eval_op("+", {Element{2, 0}, el(alg, "01")}), UsageError);
  CHECK(alg.op_index("+") == 0);
  CHECK(alg.has_op("p1"));
  CHECK_FALSE(alg.has_op("p2"));
}

TEST_CASE("algebra construction rejects malformed specs") {
  Coordinatization coord(PrimeField(2), {1, 1});
  OperationSpec plus{"+", 2, OperationSpec::Kind::kBuiltinSum, {}, {}};

  // '+' is mandatory and binary.
  CHECK_THROWS_AS(CoordAlgebra(coord, {}), UsageError);
  {
    OperationSpec bad = plus;
    bad.arity = 3;
    CHECK_THROWS_AS(CoordAlgebra(coord, {bad}), UsageError);
  }
  {
    OperationSpec dup = plus;
    CHECK_THROWS_AS(CoordAlgebra(coord, {plus, dup}), UsageError);
  }
  {
    OperationSpec t;
    t.name = "t";
    t.arity = 1;
    t.kind = OperationSpec::Kind::kTable;
    t.table = {0, 0, 0};  // needs 4 * h = 8 digits
    CHECK_THROWS_AS(CoordAlgebra(coord, {plus, t}), UsageError);
  }
  {
    OperationSpec f;
    f.name = "f";
    f.arity = 1;
    f.kind = OperationSpec::Kind::kStructured;
    f.levels.resize(1);  // needs one spec per level
    CHECK_THROWS_AS(CoordAlgebra(coord, {plus, f}), UsageError);
  }
}

TEST_CASE("triangularity accepts the example family") {
  for (const CoordAlgebra& alg :
       {build_example(2, 2, 2), build_example(2, 2, 3), build_example(2, 3, 2),
        build_example(3, 2, 2), build_example(5, 2, 2)}) {
    TriangularReport r = validate_triangular(alg);
    CHECK(r.valid);
    CHECK(r.message.empty());
  }
}

TEST_CASE("triangularity rejects a shallower-level read") {
  // Level-2 output copies the level-1 input digit.
  CoordAlgebra alg = table_algebra([](int, int) { return static_cast<std::uint8_t>(0); },
                                   [](int x1, int) { return static_cast<std::uint8_t>(x1); });
  TriangularReport r = validate_triangular(alg);
  REQUIRE_FALSE(r.valid);
  CHECK(r.op == "t");
  CHECK(r.coordinate == 1);
  CHECK(r.monomial == "x1");
  CHECK(r.message.find("shallower") != std::string::npos);
}

TEST_CASE("triangularity rejects nonlinear same-level terms") {
  // Level-1 output multiplies its own level with a deeper digit.
  CoordAlgebra alg = table_algebra([](int x1, int x2) { return static_cast<std::uint8_t>(x1 * x2); },
                                   [](int, int x2) { return static_cast<std::uint8_t>(x2); });
  TriangularReport r = validate_triangular(alg);
  REQUIRE_FALSE(r.valid);
  CHECK(r.op == "t");
  CHECK(r.coordinate == 0);
  CHECK(r.monomial == "x1*x2");
  CHECK(r.message.find("not linear") != std::string::npos);
}

TEST_CASE("degree bounds match the closed forms") {
  DegreeBound a22 = degree_bound(build_example(2, 2, 2));
  CHECK(a22.coarse == 16);
  CHECK(a22.refined == 4);

  DegreeBound a322 = degree_bound(build_example(3, 2, 2));
  CHECK(a322.coarse == 36);
  CHECK(a322.refined == 12);

  DegreeBound a23 = degree_bound(build_example(2, 2, 3));
  CHECK(a23.coarse == 36);
  CHECK(a23.refined == 6);

  // With h = 1 the family has no p ops, so the arity in the bound is the 2
  // of '+' whatever m was requested.
  for (int q : {2, 3, 5}) {
    DegreeBound b = degree_bound(build_example(q, 1, 4));
    CHECK(b.coarse == 2 * q);
    CHECK(b.refined == q - 1);
  }

  // coarse = (m q)^h = q^h * m^h, refined never exceeds it, and whenever m
  // is a power of q the coarse bound equals |A|^(log_q m + 1).
  for (int q : {2, 3, 5, 7}) {
    for (int h = 2; h <= 4; ++h) {
      for (int m = 2; m <= 4; ++m) {
        DegreeBound b = degree_bound(build_example(q, h, m));
        CHECK(b.coarse == big_pow(q, h) * big_pow(m, h));
        CHECK(b.refined <= b.coarse);
        CHECK(b.refined == BigInt(q - 1) * big_pow(static_cast<std::uint64_t>(m) * q, h - 1));
      }
    }
  }
  CHECK(degree_bound(build_example(2, 3, 4)).coarse == big_pow(4 * 2, 3));  // |A|=8, log_2 4 + 1 = 3 -> 8^3
  CHECK(big_pow(4 * 2, 3) == BigInt(8) * 8 * 8);
}

TEST_CASE("order and zero") {
  CoordAlgebra alg = build_example(3, 2, 2);
  CHECK(alg.order() == 9);
  CHECK(alg.zero() == Element{0, 0});
  CHECK(build_example(2, 1, 2).order() == 2);
  CHECK(build_example(2, 1, 2).max_arity() == 2);  // h = 1: only '+'
}

TEST_CASE("printing the canonical example is byte-exact") {
  CHECK(print_algebra(build_example(2, 2, 2)) == kA22Text);
}

TEST_CASE("parse and print round trip") {
  CoordAlgebra parsed = parse_algebra(kA22Text);
  CHECK(parsed == build_example(2, 2, 2));
  CHECK(print_algebra(parsed) == kA22Text);

  // Comments and loose whitespace are tolerated.
  CoordAlgebra relaxed = parse_algebra(
      "ALGEBRA v1   # header\n\nq 2\nalphas 1 1\n"
      "op + 2 builtin-sum\n"
      "op p1 2 structured\n"
      "level 1 linear [[0]] [[0]] tail poly x2 * y2\n"
      "level 2 linear [[0]] [[0]] tail const 0  # zero tail\n"
      "END\n");
  CHECK(relaxed == build_example(2, 2, 2));

  // Table ops round trip too.
  std::string xor_text =
      "ALGEBRA v1\nq 2\nalphas 1\nop + 2 builtin-sum\nop xor 2 table\n"
      "  0 0 -> 0\n  0 1 -> 1\n  1 0 -> 1\n  1 1 -> 0\nEND\n";
  CoordAlgebra xalg = parse_algebra(xor_text);
  CHECK(print_algebra(xalg) == xor_text);
  CHECK(parse_algebra(print_algebra(xalg)) == xalg);

  // Wide levels: alphas {2, 1} with two ';'-separated tail rows.
  Coordinatization coord(PrimeField(3), {2, 1});
  OperationSpec plus{"+", 2, OperationSpec::Kind::kBuiltinSum, {}, {}};
  OperationSpec f;
  f.name = "f";
  f.arity = 1;
  f.kind = OperationSpec::Kind::kStructured;
  LevelSpec top;
  top.linear = {{1, 2, 0, 1}};
  MultiPoly t0(PrimeField(3), 1), t1(PrimeField(3), 1);
  t0.add_term({2}, 1);
  t1.add_term({1}, 2);
  top.tail_polys = {t0, t1};
  LevelSpec bottom;
  bottom.linear = {{1}};
  bottom.tail_const = {1};
  f.levels = {top, bottom};
  CoordAlgebra wide(coord, {plus, f});
  CoordAlgebra reparsed = parse_algebra(print_algebra(wide));
  CHECK(reparsed == wide);

  // And the wide algebra evaluates per its formulas.
  for (std::uint64_t i = 0; i < wide.order(); ++i) {
    Element x = decode(wide, i);
    Element got = wide.eval_op("f", {x});
    CHECK(got[0] == (x[0] + 2 * x[1] + x[2] * x[2]) % 3);
    CHECK(got[1] == (x[1] + 2 * x[2]) % 3);
    CHECK(got[2] == (x[2] + 1) % 3);
  }
}

namespace {

int format_error_line(const std::string& text) {
  try {
    parse_algebra(text);
  } catch (const FormatError& e) {
    return e.line();
  }
  return -1;  // parsed cleanly
}

}  // namespace

TEST_CASE("parser reports line numbers") {
  CHECK(format_error_line("q 2\nEND\n") == 1);
  CHECK(format_error_line("ALGEBRA v1\nq 4\nalphas 1\nop + 2 builtin-sum\nEND\n") == 2);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1 0\nop + 2 builtin-sum\nEND\n") == 3);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1\nop + 2 magic\nEND\n") == 4);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1\nop const 1 builtin-sum\nEND\n") == 4);
  // Structured levels must appear in order with in-range matrices.
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1 1\nop + 2 builtin-sum\n"
                          "op f 1 structured\n"
                          "  level 2 linear [[0]] tail poly x2\n"
                          "  level 2 linear [[0]] tail const 0\nEND\n") == 6);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1 1\nop + 2 builtin-sum\n"
                          "op f 1 structured\n"
                          "  level 1 linear [[2]] tail poly x2\n"
                          "  level 2 linear [[0]] tail const 0\nEND\n") == 6);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1 1\nop + 2 builtin-sum\n"
                          "op f 1 structured\n"
                          "  level 1 linear [[0]] tail poly x9\n"
                          "  level 2 linear [[0]] tail const 0\nEND\n") == 6);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1 1\nop + 2 builtin-sum\n"
                          "op f 1 structured\n"
                          "  level 1 linear [[0]] tail poly x2\n"
                          "  level 2 linear [[0]] tail poly x9\nEND\n") == 7);
  // Tables: duplicate and malformed rows.
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1\nop + 2 builtin-sum\nop t 1 table\n"
                          "  0 -> 1\n  0 -> 0\nEND\n") == 7);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1\nop + 2 builtin-sum\nop t 1 table\n"
                          "  0 1 -> 1\n  1 -> 0\nEND\n") == 6);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1\nop + 2 builtin-sum\nEND\nextra\n") == 6);
  // Errors without a line: truncated input, missing END, missing '+'.
  CHECK(format_error_line("ALGEBRA v1\nq 2\n") == 0);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1\nop + 2 builtin-sum\n") == 0);
  CHECK(format_error_line("ALGEBRA v1\nq 2\nalphas 1 1\nop f 2 builtin-sum\nEND\n") == 0);
  CHECK(format_error_line(kA22Text) == -1);
}

TEST_CASE("direct product requires matching signatures") {
  auto a = std::make_shared<CoordAlgebra>(build_example(2, 2, 2));
  auto b = std::make_shared<CoordAlgebra>(build_example(3, 2, 2));
  ProductAlgebra p = direct_product(a, b);
  CHECK(p.first->q() == 2);
  CHECK(p.second->q() == 3);

  auto c = std::make_shared<CoordAlgebra>(build_example(2, 3, 2));  // extra p2
  CHECK_THROWS_AS(direct_product(a, c), UsageError);
  auto d = std::make_shared<CoordAlgebra>(build_example(2, 2, 3));  // p1 arity differs
  CHECK_THROWS_AS(direct_product(a, d), UsageError);
}

TEST_CASE("oversized tables hit the exhaustion limit") {
  LimitGuard guard;
  exhaustion_limit() = 8;
  Coordinatization coord(PrimeField(2), {1, 1});
  OperationSpec plus{"+", 2, OperationSpec::Kind::kBuiltinSum, {}, {}};
  OperationSpec t;
  t.name = "t";
  t.arity = 2;  // 2^(2*2) = 16 points > 8
  t.kind = OperationSpec::Kind::kTable;
  t.table.assign(32, 0);
  CHECK_THROWS_AS(CoordAlgebra(coord, {plus, t}), ResourceError);
}
