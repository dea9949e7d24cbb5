// SPDX-License-Identifier: Apache-2.0
#include "csat/circuit.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csat/errors.hpp"
#include "csat/rng.hpp"
#include "text_lines.hpp"

namespace csat {

namespace {

using lines::Line;
using lines::parse_int;
using lines::tokenize;

// Apply gates gather at most this many operand pointers on the stack; the
// algebra's evaluation buffer cap keeps arities far below it.
constexpr int kMaxArity = 256;

}  // namespace

Circuit::Circuit(std::shared_ptr<const CoordAlgebra> alg, int n_inputs, std::vector<Gate> gates,
                 int out1, int out2, std::string algebra_ref)
    : alg_(std::move(alg)),
      algebra_ref_(std::move(algebra_ref)),
      n_inputs_(n_inputs),
      gates_(std::move(gates)),
      out1_(out1),
      out2_(out2) {
  if (!alg_) throw UsageError("circuit needs an algebra");
  if (n_inputs_ < 0) throw UsageError("negative input count");
  const int k = static_cast<int>(gates_.size());
  if (k < n_inputs_ || k < 1) throw UsageError("circuit too small for its inputs");
  const int h = alg_->h();
  for (int i = 0; i < k; ++i) {
    const Gate& g = gates_[i];
    if (i < n_inputs_) {
      if (g.kind != Gate::Kind::kInput || g.input_index != i)
        throw UsageError("input gates must be g1..gn in order");
      continue;
    }
    switch (g.kind) {
      case Gate::Kind::kInput:
        throw UsageError("input gates must be g1..gn in order");
      case Gate::Kind::kConst:
        if (static_cast<int>(g.value.size()) != h)
          throw UsageError("const gate has wrong coordinate count");
        for (std::uint8_t d : g.value)
          if (d >= alg_->q()) throw UsageError("const gate digit out of range");
        break;
      case Gate::Kind::kApply: {
        if (g.op < 0 || g.op >= static_cast<int>(alg_->ops().size()))
          throw UsageError("apply gate references an unknown op");
        const OperationSpec& spec = alg_->ops()[g.op];
        if (static_cast<int>(g.args.size()) != spec.arity)
          throw UsageError("op '" + spec.name + "' expects " + std::to_string(spec.arity) +
                           " operands");
        for (int a : g.args)
          if (a < 0 || a >= i) throw UsageError("apply gate must reference earlier gates");
        break;
      }
    }
  }
  if (out1_ < 0 || out1_ >= k || out2_ < 0 || out2_ >= k)
    throw UsageError("output gate out of range");
}

void Circuit::eval_digits(const std::uint8_t* input_digits, std::uint8_t* scratch) const {
  const int h = alg_->h();
  const std::uint8_t* ptrs[kMaxArity];
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    std::uint8_t* out = scratch + i * h;
    switch (g.kind) {
      case Gate::Kind::kInput:
        std::memcpy(out, input_digits + static_cast<std::size_t>(g.input_index) * h, h);
        break;
      case Gate::Kind::kConst:
        std::memcpy(out, g.value.data(), h);
        break;
      case Gate::Kind::kApply:
        for (std::size_t a = 0; a < g.args.size(); ++a)
          ptrs[a] = scratch + static_cast<std::size_t>(g.args[a]) * h;
        alg_->eval_op_into(alg_->ops()[g.op], ptrs, out);
        break;
    }
  }
}

std::pair<Element, Element> Circuit::eval(const Assignment& inputs) const {
  const int h = alg_->h();
  if (static_cast<int>(inputs.size()) != n_inputs_)
    throw UsageError("assignment has " + std::to_string(inputs.size()) + " elements, circuit has " +
                     std::to_string(n_inputs_) + " inputs");
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(n_inputs_) * h);
  for (int i = 0; i < n_inputs_; ++i) {
    if (static_cast<int>(inputs[i].size()) != h)
      throw UsageError("assignment element has wrong coordinate count");
    for (std::uint8_t d : inputs[i])
      if (d >= alg_->q()) throw UsageError("assignment digit out of range");
    std::memcpy(digits.data() + static_cast<std::size_t>(i) * h, inputs[i].data(), h);
  }
  std::vector<std::uint8_t> scratch(scratch_size());
  eval_digits(digits.data(), scratch.data());
  auto at = [&](int g) {
    return Element(scratch.begin() + static_cast<std::size_t>(g) * h,
                   scratch.begin() + static_cast<std::size_t>(g + 1) * h);
  };
  return {at(out1_), at(out2_)};
}

bool Circuit::check(const Assignment& inputs) const {
  auto [a, b] = eval(inputs);
  return a == b;
}

bool Circuit::operator==(const Circuit& other) const {
  // The algebra path is presentation, not semantics.
  return *alg_ == *other.alg_ && n_inputs_ == other.n_inputs_ && gates_ == other.gates_ &&
         out1_ == other.out1_ && out2_ == other.out2_;
}

namespace {

// Shared scaffolding for plain and product circuits: the callback turns a
// const token into the gate value for the factor being built.
Circuit parse_circuit_impl(const std::string& text, std::shared_ptr<const CoordAlgebra> alg,
                           const std::function<Element(const std::string&, int)>& parse_const) {
  if (!alg) throw UsageError("circuit needs an algebra");
  std::vector<Line> ls = tokenize(text);
  std::size_t pos = 0;
  auto next = [&]() -> const Line& {
    if (pos >= ls.size()) throw FormatError("unexpected end of file");
    return ls[pos++];
  };

  {
    const Line& hdr = next();
    if (hdr.tokens != std::vector<std::string>{"CIRCUIT", "v1"})
      throw FormatError("expected 'CIRCUIT v1' header", hdr.no);
  }
  std::string ref;
  {
    const Line& aline = next();
    if (aline.tokens.size() < 2 || aline.tokens[0] != "algebra")
      throw FormatError("expected 'algebra <path>'", aline.no);
    ref = lines::join(aline.tokens, 1);
  }
  int n_inputs = 0;
  {
    const Line& iline = next();
    if (iline.tokens.size() != 2 || iline.tokens[0] != "inputs")
      throw FormatError("expected 'inputs <count>'", iline.no);
    n_inputs = parse_int(iline.tokens[1], "input count", iline.no);
    if (n_inputs < 0) throw FormatError("negative input count", iline.no);
  }

  std::vector<Gate> gates;
  for (int i = 0; i < n_inputs; ++i) {
    Gate g;
    g.kind = Gate::Kind::kInput;
    g.input_index = i;
    gates.push_back(std::move(g));
  }

  auto gate_ref = [&](const std::string& tok, int lineno) {
    if (tok.size() < 2 || tok[0] != 'g')
      throw FormatError("expected a gate reference, got '" + tok + "'", lineno);
    int id = parse_int(tok.substr(1), "gate number", lineno);
    if (id < 1 || id > static_cast<int>(gates.size()))
      throw FormatError("gate " + tok + " is not defined here", lineno);
    return id - 1;
  };

  while (true) {
    const Line& line = next();
    if (line.tokens[0] == "output") {
      if (line.tokens.size() != 3) throw FormatError("expected 'output <gate> <gate>'", line.no);
      int o1 = gate_ref(line.tokens[1], line.no);
      int o2 = gate_ref(line.tokens[2], line.no);
      if (pos < ls.size()) throw FormatError("unexpected content after output", ls[pos].no);
      try {
        return Circuit(std::move(alg), n_inputs, std::move(gates), o1, o2, ref);
      } catch (const UsageError& e) {
        throw FormatError(e.what());
      }
    }

    const std::string want = "g" + std::to_string(gates.size() + 1);
    if (line.tokens.size() < 3 || line.tokens[1] != "=")
      throw FormatError("expected '" + want + " = ...'", line.no);
    if (line.tokens[0] != want)
      throw FormatError("expected gate '" + want + "', got '" + line.tokens[0] + "'", line.no);

    Gate g;
    if (line.tokens[2] == "const") {
      if (line.tokens.size() != 4) throw FormatError("expected 'const <element>'", line.no);
      g.kind = Gate::Kind::kConst;
      g.value = parse_const(line.tokens[3], line.no);
    } else {
      g.kind = Gate::Kind::kApply;
      try {
        g.op = alg->op_index(line.tokens[2]);
      } catch (const UsageError&) {
        throw FormatError("unknown op '" + line.tokens[2] + "'", line.no);
      }
      const int arity = alg->ops()[g.op].arity;
      if (static_cast<int>(line.tokens.size()) != 3 + arity)
        throw FormatError("op '" + line.tokens[2] + "' expects " + std::to_string(arity) +
                          " operands", line.no);
      for (int a = 0; a < arity; ++a) g.args.push_back(gate_ref(line.tokens[3 + a], line.no));
    }
    gates.push_back(std::move(g));
  }
}

std::string print_circuit_impl(const Circuit& c, const std::string& ref_override,
                               const std::function<std::string(int)>& format_const) {
  const std::string& ref = !ref_override.empty() ? ref_override : c.algebra_ref();
  if (ref.empty()) throw UsageError("circuit has no algebra reference to print");
  std::string out = "CIRCUIT v1\n";
  out += "algebra " + ref + "\n";
  out += "inputs " + std::to_string(c.n_inputs()) + "\n";
  for (int i = c.n_inputs(); i < c.size(); ++i) {
    const Gate& g = c.gates()[i];
    out += "g" + std::to_string(i + 1) + " = ";
    if (g.kind == Gate::Kind::kConst) {
      out += "const " + format_const(i);
    } else {
      out += c.algebra().ops()[g.op].name;
      for (int a : g.args) out += " g" + std::to_string(a + 1);
    }
    out += "\n";
  }
  auto [o1, o2] = c.outputs();
  out += "output g" + std::to_string(o1 + 1) + " g" + std::to_string(o2 + 1) + "\n";
  return out;
}

std::pair<std::string, std::string> split_product_const(const std::string& tok, int lineno) {
  auto colon = tok.find(':');
  if (colon == std::string::npos || tok.find(':', colon + 1) != std::string::npos)
    throw FormatError("product constant must be '<first>:<second>', got '" + tok + "'", lineno);
  return {tok.substr(0, colon), tok.substr(colon + 1)};
}

}  // namespace

Circuit parse_circuit(const std::string& text, std::shared_ptr<const CoordAlgebra> alg) {
  const Coordinatization* coord = alg ? &alg->coord() : nullptr;
  return parse_circuit_impl(text, std::move(alg), [coord](const std::string& tok, int lineno) {
    try {
      return element_from_string(*coord, tok);
    } catch (const FormatError& e) {
      throw FormatError(e.what(), lineno);
    }
  });
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open circuit file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  // Pre-scan for the algebra reference; paths resolve relative to the
  // circuit file so bundles stay relocatable.
  std::string ref;
  int ref_line = 0;
  for (const Line& line : tokenize(text))
    if (line.tokens[0] == "algebra" && line.tokens.size() == 2) {
      ref = line.tokens[1];
      ref_line = line.no;
      break;
    }
  if (ref.empty()) throw FormatError("expected 'algebra <path>'", ref_line);
  std::filesystem::path apath(ref);
  if (apath.is_relative()) apath = std::filesystem::path(path).parent_path() / apath;
  auto alg = std::make_shared<CoordAlgebra>(load_algebra(apath.string()));
  return parse_circuit(text, std::move(alg));
}

std::string print_circuit(const Circuit& c, const std::string& algebra_ref) {
  return print_circuit_impl(c, algebra_ref,
                            [&](int i) { return element_to_string(c.gates()[i].value); });
}

Circuit random_circuit(std::shared_ptr<const CoordAlgebra> alg, int n_inputs, int n_gates,
                       std::uint64_t seed) {
  if (!alg) throw UsageError("circuit needs an algebra");
  if (n_inputs < 0) throw UsageError("negative input count");
  if (n_gates < n_inputs + 2)
    throw UsageError("need at least " + std::to_string(n_inputs + 2) + " gates");
  Rng rng(seed);
  const int n_ops = static_cast<int>(alg->ops().size());
  std::vector<Gate> gates;
  for (int i = 0; i < n_inputs; ++i) {
    Gate g;
    g.kind = Gate::Kind::kInput;
    g.input_index = i;
    gates.push_back(std::move(g));
  }
  for (int i = n_inputs; i < n_gates; ++i) {
    Gate g;
    const std::uint64_t pick = rng.below(n_ops + 1);
    if (pick == 0) {
      g.kind = Gate::Kind::kConst;
      for (int k = 0; k < alg->h(); ++k) g.value.push_back(rng.digit(alg->q()));
    } else {
      g.kind = Gate::Kind::kApply;
      g.op = static_cast<int>(pick - 1);
      const int arity = alg->ops()[g.op].arity;
      for (int a = 0; a < arity; ++a) g.args.push_back(static_cast<int>(rng.below(i)));
    }
    gates.push_back(std::move(g));
  }
  int o1 = static_cast<int>(rng.below(n_gates));
  int o2 = static_cast<int>(rng.below(n_gates));
  return Circuit(std::move(alg), n_inputs, std::move(gates), o1, o2);
}

ProductCircuit parse_product_circuit(const std::string& text, const ProductAlgebra& palg) {
  auto factor = [&](std::shared_ptr<const CoordAlgebra> alg, bool second) {
    return parse_circuit_impl(text, alg, [&, second](const std::string& tok, int lineno) {
      auto [a, b] = split_product_const(tok, lineno);
      try {
        return element_from_string(alg->coord(), second ? b : a);
      } catch (const FormatError& e) {
        throw FormatError(e.what(), lineno);
      }
    });
  };
  Circuit first = factor(palg.first, false);
  Circuit second = factor(palg.second, true);
  return ProductCircuit{std::move(first), std::move(second)};
}

ProductCircuit load_product_circuit(const std::string& path, const ProductAlgebra& palg) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open circuit file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_product_circuit(buf.str(), palg);
}

std::string print_product_circuit(const ProductCircuit& pc, const std::string& algebra_ref) {
  return print_circuit_impl(pc.first, algebra_ref, [&](int i) {
    return element_to_string(pc.first.gates()[i].value) + ":" +
           element_to_string(pc.second.gates()[i].value);
  });
}

ProductCircuit random_product_circuit(const ProductAlgebra& palg, int n_inputs, int n_gates,
                                      std::uint64_t seed) {
  if (!palg.first || !palg.second) throw UsageError("product circuit needs both factors");
  if (n_inputs < 0) throw UsageError("negative input count");
  if (n_gates < n_inputs + 2)
    throw UsageError("need at least " + std::to_string(n_inputs + 2) + " gates");
  Rng rng(seed);
  const int n_ops = static_cast<int>(palg.first->ops().size());
  std::vector<Gate> first, second;
  for (int i = 0; i < n_inputs; ++i) {
    Gate g;
    g.kind = Gate::Kind::kInput;
    g.input_index = i;
    first.push_back(g);
    second.push_back(g);
  }
  for (int i = n_inputs; i < n_gates; ++i) {
    Gate a, b;
    const std::uint64_t pick = rng.below(n_ops + 1);
    if (pick == 0) {
      a.kind = b.kind = Gate::Kind::kConst;
      for (int k = 0; k < palg.first->h(); ++k) a.value.push_back(rng.digit(palg.first->q()));
      for (int k = 0; k < palg.second->h(); ++k) b.value.push_back(rng.digit(palg.second->q()));
    } else {
      a.kind = b.kind = Gate::Kind::kApply;
      const std::string& name = palg.first->ops()[pick - 1].name;
      a.op = static_cast<int>(pick - 1);
      b.op = palg.second->op_index(name);
      const int arity = palg.first->ops()[a.op].arity;
      for (int r = 0; r < arity; ++r) {
        int arg = static_cast<int>(rng.below(i));
        a.args.push_back(arg);
        b.args.push_back(arg);
      }
    }
    first.push_back(std::move(a));
    second.push_back(std::move(b));
  }
  int o1 = static_cast<int>(rng.below(n_gates));
  int o2 = static_cast<int>(rng.below(n_gates));
  return ProductCircuit{Circuit(palg.first, n_inputs, std::move(first), o1, o2),
                        Circuit(palg.second, n_inputs, std::move(second), o1, o2)};
}

}  // namespace csat
