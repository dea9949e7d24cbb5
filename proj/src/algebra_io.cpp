// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csat/algebra.hpp"
#include "csat/errors.hpp"
#include "csat/limits.hpp"
#include "csat/poly_text.hpp"
#include "text_lines.hpp"

namespace csat {

namespace {

using lines::Line;
using lines::parse_int;
using lines::tokenize;

// Matrix token "[[a,b],[c,d]]", row-major, no spaces.
std::vector<std::uint8_t> parse_matrix(const std::string& tok, int a, int q, int lineno) {
  auto fail = [&] { return FormatError("bad matrix '" + tok + "'", lineno); };
  if (tok.size() < 4 || tok.substr(0, 2) != "[[" || tok.substr(tok.size() - 2) != "]]") throw fail();
  std::string body = tok.substr(2, tok.size() - 4);
  std::vector<std::string> rows;
  std::size_t pos = 0;
  while (true) {
    std::size_t sep = body.find("],[", pos);
    if (sep == std::string::npos) {
      rows.push_back(body.substr(pos));
      break;
    }
    rows.push_back(body.substr(pos, sep - pos));
    pos = sep + 3;
  }
  if (static_cast<int>(rows.size()) != a)
    throw FormatError("matrix '" + tok + "' must have " + std::to_string(a) + " rows", lineno);
  std::vector<std::uint8_t> out;
  for (const std::string& row : rows) {
    std::vector<std::string> cells;
    std::size_t p = 0;
    while (true) {
      std::size_t c = row.find(',', p);
      cells.push_back(row.substr(p, c == std::string::npos ? c : c - p));
      if (c == std::string::npos) break;
      p = c + 1;
    }
    if (static_cast<int>(cells.size()) != a)
      throw FormatError("matrix '" + tok + "' must have " + std::to_string(a) + " columns", lineno);
    for (const std::string& cell : cells) {
      int v = parse_int(cell, "matrix entry", lineno);
      if (v < 0 || v >= q) throw FormatError("matrix entry " + cell + " out of range", lineno);
      out.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return out;
}

using lines::join;

std::vector<std::string> tail_names(const Coordinatization& coord, int level, int arity) {
  std::vector<std::string> names;
  for (int i = 0; i < arity; ++i)
    for (int c = coord.higher_begin(level); c < coord.h(); ++c)
      names.push_back(coord_var_name(i, c + 1));
  return names;
}

std::string matrix_to_string(const std::vector<std::uint8_t>& mat, int a) {
  std::string out = "[";
  for (int r = 0; r < a; ++r) {
    out += r ? ",[" : "[";
    for (int c = 0; c < a; ++c) {
      if (c) out += ',';
      out += std::to_string(mat[r * a + c]);
    }
    out += ']';
  }
  return out + "]";
}

}  // namespace

CoordAlgebra parse_algebra(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  std::size_t pos = 0;
  auto next = [&]() -> const Line& {
    if (pos >= lines.size()) throw FormatError("unexpected end of file");
    return lines[pos++];
  };

  {
    const Line& hdr = next();
    if (hdr.tokens != std::vector<std::string>{"ALGEBRA", "v1"})
      throw FormatError("expected 'ALGEBRA v1' header", hdr.no);
  }

  const Line& qline = next();
  if (qline.tokens.size() != 2 || qline.tokens[0] != "q")
    throw FormatError("expected 'q <prime>'", qline.no);
  int qv = parse_int(qline.tokens[1], "prime", qline.no);
  PrimeField field = [&] {
    try {
      return PrimeField(qv);
    } catch (const DomainError& e) {
      throw FormatError(e.what(), qline.no);
    }
  }();

  const Line& aline = next();
  if (aline.tokens.size() < 2 || aline.tokens[0] != "alphas")
    throw FormatError("expected 'alphas <width>...'", aline.no);
  std::vector<int> alphas;
  for (std::size_t i = 1; i < aline.tokens.size(); ++i) {
    int w = parse_int(aline.tokens[i], "level width", aline.no);
    if (w < 1) throw FormatError("level width must be positive", aline.no);
    alphas.push_back(w);
  }
  Coordinatization coord(field, alphas);
  const int q = coord.q();
  const int h = coord.h();
  const int s = coord.s();

  std::vector<OperationSpec> ops;
  bool saw_end = false;
  while (pos < lines.size()) {
    const Line& line = next();
    if (line.tokens[0] == "END") {
      if (line.tokens.size() != 1) throw FormatError("unexpected tokens after END", line.no);
      saw_end = true;
      break;
    }
    if (line.tokens[0] != "op")
      throw FormatError("expected 'op' or 'END', got '" + line.tokens[0] + "'", line.no);
    if (line.tokens.size() < 4)
      throw FormatError("expected 'op <name> <arity> <kind>'", line.no);

    OperationSpec op;
    op.name = line.tokens[1];
    if (op.name == "const")
      throw FormatError("'const' is reserved and cannot name an op", line.no);
    for (const OperationSpec& prev : ops)
      if (prev.name == op.name) throw FormatError("duplicate op name '" + op.name + "'", line.no);
    op.arity = parse_int(line.tokens[2], "arity", line.no);
    if (op.arity < 1) throw FormatError("arity must be at least 1", line.no);

    const std::string& kind = line.tokens[3];
    if (kind == "builtin-sum") {
      if (line.tokens.size() != 4) throw FormatError("unexpected tokens after builtin-sum", line.no);
      op.kind = OperationSpec::Kind::kBuiltinSum;
    } else if (kind == "structured") {
      if (line.tokens.size() != 4) throw FormatError("unexpected tokens after structured", line.no);
      op.kind = OperationSpec::Kind::kStructured;
      for (int j = 1; j <= s; ++j) {
        const Line& lv = next();
        const std::size_t tail_at = 3 + static_cast<std::size_t>(op.arity);
        if (lv.tokens.size() < tail_at + 2 || lv.tokens[0] != "level" || lv.tokens[2] != "linear" ||
            lv.tokens[tail_at] != "tail")
          throw FormatError("expected 'level " + std::to_string(j) + " linear <matrix>... tail ...'", lv.no);
        if (parse_int(lv.tokens[1], "level", lv.no) != j)
          throw FormatError("expected level " + std::to_string(j) + ", got " + lv.tokens[1], lv.no);
        LevelSpec spec;
        const int a = coord.alpha(j);
        for (int i = 0; i < op.arity; ++i)
          spec.linear.push_back(parse_matrix(lv.tokens[3 + i], a, q, lv.no));
        const std::string& tkind = lv.tokens[tail_at + 1];
        if (j < s) {
          if (tkind != "poly" || lv.tokens.size() < tail_at + 3)
            throw FormatError("level " + std::to_string(j) + " tail must be 'poly <text>'", lv.no);
          std::string ptext = join(lv.tokens, tail_at + 2);
          std::vector<std::string> names = tail_names(coord, j, op.arity);
          // One polynomial per output coordinate, ';'-separated; single-row
          // tails (alpha_j == 1) need no separator.
          std::vector<std::string> parts;
          std::size_t start = 0;
          while (true) {
            std::size_t sep = ptext.find(';', start);
            parts.push_back(ptext.substr(start, sep == std::string::npos ? sep : sep - start));
            if (sep == std::string::npos) break;
            start = sep + 1;
          }
          if (static_cast<int>(parts.size()) != a)
            throw FormatError("level " + std::to_string(j) + " tail needs " + std::to_string(a) +
                              " ';'-separated polynomials", lv.no);
          for (const std::string& part : parts) {
            try {
              spec.tail_polys.push_back(parse_poly(field, names, part));
            } catch (const FormatError& e) {
              throw FormatError(e.what(), lv.no);
            }
          }
        } else {
          if (tkind != "const" || lv.tokens.size() != tail_at + 3)
            throw FormatError("bottom level tail must be 'const <digits>'", lv.no);
          const std::string& digits = lv.tokens[tail_at + 2];
          if (static_cast<int>(digits.size()) != a)
            throw FormatError("bottom tail needs " + std::to_string(a) + " digits", lv.no);
          for (char c : digits) {
            int d = digit_value(c);
            if (d < 0 || d >= q) throw FormatError("bottom tail digit out of range", lv.no);
            spec.tail_const.push_back(static_cast<std::uint8_t>(d));
          }
        }
        op.levels.push_back(std::move(spec));
      }
    } else if (kind == "table") {
      if (line.tokens.size() != 4) throw FormatError("unexpected tokens after table", line.no);
      op.kind = OperationSpec::Kind::kTable;
      std::uint64_t points = points_count(q, h * op.arity);
      check_exhaustion(points, "operation table for '" + op.name + "'");
      op.table.assign(points * static_cast<std::uint64_t>(h), 0xFF);
      for (std::uint64_t e = 0; e < points; ++e) {
        const Line& row = next();
        if (row.tokens.size() != static_cast<std::size_t>(op.arity) + 2 ||
            row.tokens[op.arity] != "->")
          throw FormatError("expected '" + std::to_string(op.arity) + " arguments -> result'", row.no);
        std::uint64_t idx = 0;
        Element result;
        try {
          for (int i = 0; i < op.arity; ++i) {
            Element arg = element_from_string(coord, row.tokens[i]);
            for (std::uint8_t d : arg) idx = idx * q + d;
          }
          result = element_from_string(coord, row.tokens[op.arity + 1]);
        } catch (const FormatError& err) {
          throw FormatError(err.what(), row.no);
        }
        if (op.table[idx * h] != 0xFF)
          throw FormatError("duplicate table entry for " + join(row.tokens, 0), row.no);
        for (int k = 0; k < h; ++k) op.table[idx * h + k] = result[k];
      }
      for (std::uint8_t d : op.table)
        if (d == 0xFF) throw FormatError("op '" + op.name + "': table is incomplete", line.no);
    } else {
      throw FormatError("unknown op kind '" + kind + "'", line.no);
    }
    ops.push_back(std::move(op));
  }
  if (!saw_end) throw FormatError("missing END");
  if (pos < lines.size()) throw FormatError("unexpected content after END", lines[pos].no);

  try {
    return CoordAlgebra(std::move(coord), std::move(ops));
  } catch (const UsageError& e) {
    throw FormatError(e.what());
  }
}

CoordAlgebra load_algebra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open algebra file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  CoordAlgebra alg = parse_algebra(buf.str());
  TriangularReport rep = validate_triangular(alg);
  if (!rep.valid) throw FormatError(path + ": " + rep.message);
  return alg;
}

std::string print_algebra(const CoordAlgebra& alg) {
  const Coordinatization& coord = alg.coord();
  const int q = alg.q();
  const int h = alg.h();
  std::string out = "ALGEBRA v1\n";
  out += "q " + std::to_string(q) + "\n";
  out += "alphas";
  for (int w : coord.alphas()) out += " " + std::to_string(w);
  out += "\n";
  for (const OperationSpec& op : alg.ops()) {
    out += "op " + op.name + " " + std::to_string(op.arity) + " ";
    switch (op.kind) {
      case OperationSpec::Kind::kBuiltinSum:
        out += "builtin-sum\n";
        break;
      case OperationSpec::Kind::kStructured: {
        out += "structured\n";
        for (int j = 1; j <= coord.s(); ++j) {
          const LevelSpec& lv = op.levels[j - 1];
          const int a = coord.alpha(j);
          out += "  level " + std::to_string(j) + " linear";
          for (const auto& mat : lv.linear) out += " " + matrix_to_string(mat, a);
          if (j == coord.s()) {
            out += " tail const ";
            out += element_to_string(lv.tail_const);
          } else {
            out += " tail poly ";
            std::vector<std::string> names = tail_names(coord, j, op.arity);
            for (int r = 0; r < a; ++r) {
              if (r) out += " ; ";
              out += poly_to_string(lv.tail_polys[r], names);
            }
          }
          out += "\n";
        }
        break;
      }
      case OperationSpec::Kind::kTable: {
        out += "table\n";
        std::uint64_t points = points_count(q, h * op.arity);
        std::vector<std::uint8_t> digits(h * op.arity, 0);
        for (std::uint64_t e = 0; e < points; ++e) {
          out += " ";
          for (int i = 0; i < op.arity; ++i) {
            out += " ";
            for (int k = 0; k < h; ++k) out += digit_char(digits[i * h + k]);
          }
          out += " -> ";
          out += element_to_string(Element(op.table.begin() + e * h, op.table.begin() + (e + 1) * h));
          out += "\n";
          int v = h * op.arity - 1;
          while (v >= 0 && digits[v] == q - 1) digits[v--] = 0;
          if (v >= 0) ++digits[v];
        }
        break;
      }
    }
  }
  out += "END\n";
  return out;
}

}  // namespace csat
