// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "csat/bigint.hpp"
#include "csat/circuit.hpp"

namespace csat {

enum class SolveStatus { kSat, kUnsat, kProbablyUnsat };
const char* to_string(SolveStatus s);

// Which degree bound feeds the hitting set / density: the refined bound is
// the default (correctness needs only d >= deg f), the coarse one is the
// literal |A|^(log_q m + 1).
enum class DChoice { kRefined, kCoarse };
BigInt chosen_degree_bound(const CoordAlgebra& alg, DChoice choice);

struct SolverStats {
  std::uint64_t candidates_checked = 0;
  std::uint64_t trials = 0;
  std::uint64_t gate_evals = 0;
  double elapsed_seconds = 0.0;
};

// A SAT answer always carries a witness re-verified by check() before it is
// returned, so a wrong SAT can never escape. PROBABLY_UNSAT comes only from
// the Monte Carlo solver.
struct SolverAnswer {
  SolveStatus status = SolveStatus::kUnsat;
  Assignment witness;  // SAT only
  SolverStats stats;
};

// Exhaustive scan in lexicographic digit-string order; the ground-truth
// oracle. Exhaustion-limited; budget_ms = 0 means no time budget.
SolverAnswer solve_brute(const Circuit& c, std::uint64_t budget_ms = 0);

// |{v in F_q^N : at most d nonzero coordinates}|, exactly.
BigInt hitting_set_size(int N, const BigInt& d, int q);

// Streams exactly hitting_set_size(N, d, q) distinct vectors in graded
// order: support size ascending, then support positions lexicographic, then
// values lexicographic (each nonzero value in [1, q)). seek() repositions to
// a global rank so scans can be partitioned.
class HittingSetEnumerator {
 public:
  HittingSetEnumerator(int N, const BigInt& d, int q);

  BigInt size() const;
  const BigInt& index() const { return index_; }  // rank of the next vector

  // Fills out (resized to N) with the next vector; false when exhausted.
  bool next(std::vector<std::uint8_t>& out);
  void seek(const BigInt& rank);

 private:
  bool advance();

  int n_;
  int d_;  // clamped to n_
  int q_;
  int k_;  // current support size, -1 once exhausted
  std::vector<int> support_;
  std::vector<std::uint8_t> values_;
  BigInt index_;
};

// Theorem 1: scan the hitting set with d = chosen_degree_bound, return the
// first hit (canonical witness) or UNSAT after the full scan.
// stats.candidates_checked is exact and equals the set size on UNSAT.
// jobs > 1 splits the scan into rank ranges; the minimal-rank hit wins, so
// the answer (though not the work counter on SAT) stays deterministic.
SolverAnswer solve_deterministic(const Circuit& c, DChoice d_choice = DChoice::kRefined,
                                 std::uint64_t budget_ms = 0, int jobs = 1);

// The guaranteed per-trial success density c = q^(-d - q*log2 q), symbolic.
struct McDensity {
  int q;
  BigInt d;
  long double log_q() const;  // -(d + q*log2 q)
  long double value() const;
};
McDensity mc_density(const CoordAlgebra& alg, DChoice choice);

// Smallest N with (1-c)^N <= epsilon, computed as ceil(ln(1/eps)/c);
// N = 1 when c >= 1. Requires c in (0, 1], epsilon in (0, 1).
std::uint64_t mc_trials(long double c, double epsilon);

struct MonteCarloConfig {
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  std::uint64_t max_trials = UINT64_MAX;  // config cap on top of mc_trials
  DChoice d_choice = DChoice::kRefined;
};

// |A|^n; when mc_trials exceeds it, brute force is the cheaper plan.
BigInt assignment_space(const Circuit& c);

// Theorem 2: uniform assignments, true-biased; SAT on first verified hit,
// PROBABLY_UNSAT after N trials. Identical (circuit, seed) gives the
// identical trial sequence.
SolverAnswer solve_monte_carlo(const Circuit& c, const MonteCarloConfig& cfg,
                               std::uint64_t budget_ms = 0);

enum class Method { kBrute, kHitting, kMc };

// Factor-wise Turing reduction: SAT iff both factors are SAT, witnesses
// zipped; otherwise the first non-SAT factor decides the status.
struct ProductAnswer {
  SolveStatus status = SolveStatus::kUnsat;
  Assignment first;         // factor witnesses, SAT only
  Assignment second;
  int failing_factor = -1;  // 0 or 1 when not SAT
  SolverStats stats;        // summed over factors
};
ProductAnswer solve_product(const ProductCircuit& pc, Method method,
                            DChoice d_choice = DChoice::kRefined, MonteCarloConfig cfg = {},
                            std::uint64_t budget_ms = 0);

}  // namespace csat
