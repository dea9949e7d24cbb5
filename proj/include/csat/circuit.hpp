// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "csat/algebra.hpp"

namespace csat {

struct Gate {
  enum class Kind { kInput, kConst, kApply };

  Kind kind;
  int input_index = -1;   // kInput: 0-based input slot
  Element value;          // kConst
  int op = -1;            // kApply: index into the algebra's ops
  std::vector<int> args;  // kApply: 0-based ids of earlier gates

  bool operator==(const Gate&) const = default;
};

// One element per input, in input order.
using Assignment = std::vector<Element>;

// A DAG of gates over one algebra. Gates are stored in evaluation order: the
// first n_inputs are the inputs, every apply gate references earlier gates
// only, and the pair of output gates is compared for satisfaction.
class Circuit {
 public:
  Circuit(std::shared_ptr<const CoordAlgebra> alg, int n_inputs, std::vector<Gate> gates,
          int out1, int out2, std::string algebra_ref = "");

  const CoordAlgebra& algebra() const { return *alg_; }
  const std::shared_ptr<const CoordAlgebra>& algebra_ptr() const { return alg_; }
  const std::string& algebra_ref() const { return algebra_ref_; }
  int n_inputs() const { return n_inputs_; }
  int size() const { return static_cast<int>(gates_.size()); }  // includes inputs
  const std::vector<Gate>& gates() const { return gates_; }
  std::pair<int, int> outputs() const { return {out1_, out2_}; }

  // Hot path: input_digits holds n_inputs * h digits, scratch at least
  // scratch_size() bytes; gate i's value lands at scratch + i * h.
  std::size_t scratch_size() const { return gates_.size() * static_cast<std::size_t>(alg_->h()); }
  void eval_digits(const std::uint8_t* input_digits, std::uint8_t* scratch) const;

  std::pair<Element, Element> eval(const Assignment& inputs) const;
  bool check(const Assignment& inputs) const;  // outputs equal?

  bool operator==(const Circuit&) const;

 private:
  std::shared_ptr<const CoordAlgebra> alg_;
  std::string algebra_ref_;
  int n_inputs_;
  std::vector<Gate> gates_;
  int out1_, out2_;
};

// File format (see README): parse_circuit consumes the text against an
// already-loaded algebra, load_circuit also resolves the 'algebra <path>'
// line relative to the circuit file's directory. print_circuit emits the
// canonical form; a non-empty ref overrides the stored algebra path.
Circuit parse_circuit(const std::string& text, std::shared_ptr<const CoordAlgebra> alg);
Circuit load_circuit(const std::string& path);
std::string print_circuit(const Circuit& c, const std::string& algebra_ref = "");

// Reproducible random circuit: gate kinds drawn uniformly over ops plus
// 'const', operands over earlier gates, outputs over all gates.
// Requires n_gates >= n_inputs + 2.
Circuit random_circuit(std::shared_ptr<const CoordAlgebra> alg, int n_inputs, int n_gates,
                       std::uint64_t seed);

// A circuit over a direct product, stored as one circuit per factor with the
// same wiring; constants in the text are "<first>:<second>".
struct ProductCircuit {
  Circuit first;
  Circuit second;
};

ProductCircuit parse_product_circuit(const std::string& text, const ProductAlgebra& palg);
ProductCircuit load_product_circuit(const std::string& path, const ProductAlgebra& palg);
std::string print_product_circuit(const ProductCircuit& pc, const std::string& algebra_ref = "");
ProductCircuit random_product_circuit(const ProductAlgebra& palg, int n_inputs, int n_gates,
                                      std::uint64_t seed);

}  // namespace csat
