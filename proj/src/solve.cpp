// SPDX-License-Identifier: Apache-2.0
#include "csat/solve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <thread>

#include "csat/errors.hpp"
#include "csat/limits.hpp"
#include "csat/rng.hpp"

namespace csat {
namespace {

using Clock = std::chrono::steady_clock;

// Wall-clock budget, polled every few thousand candidates so the check stays
// off the hot path. budget_ms = 0 disables the deadline.
class Budget {
 public:
  explicit Budget(std::uint64_t budget_ms) : start_(Clock::now()), budget_ms_(budget_ms) {
    if (budget_ms_ > 0) deadline_ = start_ + std::chrono::milliseconds(budget_ms_);
  }

  void tick() {
    if (budget_ms_ == 0 || (++count_ & 0xFFF) != 0) return;
    if (Clock::now() > deadline_)
      throw BudgetError("time budget of " + std::to_string(budget_ms_) + " ms exceeded");
  }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_, deadline_;
  std::uint64_t budget_ms_;
  std::uint64_t count_ = 0;
};

Assignment digits_to_assignment(const std::uint8_t* digits, int n, int h) {
  Assignment a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[i].assign(digits + i * h, digits + (i + 1) * h);
  return a;
}

bool outputs_equal(const Circuit& c, const std::uint8_t* scratch) {
  const int h = c.algebra().h();
  const auto [o1, o2] = c.outputs();
  return std::memcmp(scratch + static_cast<std::size_t>(o1) * h,
                     scratch + static_cast<std::size_t>(o2) * h, static_cast<std::size_t>(h)) == 0;
}

// Every SAT answer funnels through here: the witness is re-verified via the
// public check() path, so an indexing bug can surface as a crash but never as
// a wrong SAT.
SolverAnswer make_sat(const Circuit& c, const std::uint8_t* digits, SolverStats stats,
                      const Budget& budget) {
  Assignment w = digits_to_assignment(digits, c.n_inputs(), c.algebra().h());
  if (!c.check(w)) throw std::logic_error("internal: witness failed re-verification");
  stats.gate_evals += static_cast<std::uint64_t>(c.size());
  stats.elapsed_seconds = budget.elapsed();
  return {SolveStatus::kSat, std::move(w), stats};
}

// C(n, k), 0 when out of range.
BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

std::uint64_t saturate_u64(const BigInt& v) {
  return v > UINT64_MAX ? UINT64_MAX : v.convert_to<std::uint64_t>();
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kSat: return "SAT";
    case SolveStatus::kUnsat: return "UNSAT";
    case SolveStatus::kProbablyUnsat: return "PROBABLY_UNSAT";
  }
  return "?";
}

BigInt chosen_degree_bound(const CoordAlgebra& alg, DChoice choice) {
  const DegreeBound b = degree_bound(alg);
  return choice == DChoice::kRefined ? b.refined : b.coarse;
}

SolverAnswer solve_brute(const Circuit& c, std::uint64_t budget_ms) {
  const CoordAlgebra& alg = c.algebra();
  const int q = alg.q();
  const int nd = c.n_inputs() * alg.h();
  check_exhaustion(points_count(q, nd), "brute-force scan");

  Budget budget(budget_ms);
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(nd), 0);
  std::vector<std::uint8_t> scratch(c.scratch_size());
  SolverStats stats;
  // Ascending lexicographic order on digit strings: the last digit is the
  // fastest-moving one, so the all-zero assignment comes first.
  for (;;) {
    budget.tick();
    c.eval_digits(digits.data(), scratch.data());
    ++stats.candidates_checked;
    stats.gate_evals += static_cast<std::uint64_t>(c.size());
    if (outputs_equal(c, scratch.data())) return make_sat(c, digits.data(), stats, budget);
    int pos = nd - 1;
    while (pos >= 0 && digits[pos] == q - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
  }
  stats.elapsed_seconds = budget.elapsed();
  return {SolveStatus::kUnsat, {}, stats};
}

BigInt hitting_set_size(int N, const BigInt& d, int q) {
  if (N < 0 || q < 2) throw UsageError("hitting_set_size: need N >= 0 and q >= 2");
  if (d < 0) throw UsageError("hitting_set_size: need d >= 0");
  const int dmax = d >= N ? N : d.convert_to<int>();
  BigInt total = 0, binom = 1, pw = 1;
  const BigInt qm1 = q - 1;
  for (int k = 0; k <= dmax; ++k) {
    total += binom * pw;
    binom = binom * (N - k) / (k + 1);  // C(N, k) -> C(N, k+1)
    pw *= qm1;
  }
  return total;
}

HittingSetEnumerator::HittingSetEnumerator(int N, const BigInt& d, int q)
    : n_(N), d_(0), q_(q), k_(0), index_(0) {
  if (N < 0 || q < 2) throw UsageError("hitting set: need N >= 0 and q >= 2");
  if (d < 0) throw UsageError("hitting set: need d >= 0");
  d_ = d >= N ? N : d.convert_to<int>();  // support size never exceeds N
}

BigInt HittingSetEnumerator::size() const { return hitting_set_size(n_, d_, q_); }

bool HittingSetEnumerator::next(std::vector<std::uint8_t>& out) {
  if (k_ < 0) return false;
  out.assign(static_cast<std::size_t>(n_), 0);
  for (int i = 0; i < k_; ++i) out[static_cast<std::size_t>(support_[i])] = values_[i];
  ++index_;
  advance();
  return true;
}

bool HittingSetEnumerator::advance() {
  // Values first (last support slot fastest), then the support combination in
  // lexicographic order, then the next support size.
  for (int i = k_ - 1; i >= 0; --i) {
    if (values_[i] < q_ - 1) {
      ++values_[i];
      std::fill(values_.begin() + i + 1, values_.end(), std::uint8_t{1});
      return true;
    }
  }
  for (int i = k_ - 1; i >= 0; --i) {
    if (support_[i] < n_ - (k_ - i)) {
      ++support_[i];
      for (int j = i + 1; j < k_; ++j) support_[j] = support_[j - 1] + 1;
      std::fill(values_.begin(), values_.end(), std::uint8_t{1});
      return true;
    }
  }
  if (++k_ > d_) {
    k_ = -1;
    return false;
  }
  support_.resize(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) support_[i] = i;
  values_.assign(static_cast<std::size_t>(k_), 1);
  return true;
}

void HittingSetEnumerator::seek(const BigInt& rank) {
  if (rank < 0) throw UsageError("hitting set: seek rank must be >= 0");
  BigInt r = rank;
  const BigInt qm1 = q_ - 1;
  index_ = rank;
  for (int k = 0; k <= d_; ++k) {
    const BigInt vals = big_pow(qm1, static_cast<unsigned>(k));
    const BigInt block = binomial(n_, k) * vals;
    if (r >= block) {
      r -= block;
      continue;
    }
    k_ = k;
    support_.resize(static_cast<std::size_t>(k));
    values_.resize(static_cast<std::size_t>(k));
    BigInt comb_rank = r / vals;
    BigInt val_rank = r % vals;
    // Unrank the lex combination: pick each position left to right.
    int x = 0;
    for (int i = 0; i < k; ++i) {
      for (int c = x;; ++c) {
        const BigInt cnt = binomial(n_ - 1 - c, k - 1 - i);
        if (comb_rank < cnt) {
          support_[i] = c;
          x = c + 1;
          break;
        }
        comb_rank -= cnt;
      }
    }
    // Value digits in base q-1, first support slot most significant.
    for (int i = k - 1; i >= 0; --i) {
      values_[i] = static_cast<std::uint8_t>((val_rank % qm1).convert_to<int>() + 1);
      val_rank /= qm1;
    }
    return;
  }
  k_ = -1;  // rank at or beyond the end
}

namespace {

// One worker owns the rank range [lo, hi). A hit ends its scan (later ranks
// in the range cannot beat it), and a published best rank below lo means an
// earlier range already won, so the whole range is dead.
struct ScanResult {
  std::uint64_t hit_rank = UINT64_MAX;
  std::vector<std::uint8_t> hit_digits;
  std::uint64_t checked = 0;
  std::exception_ptr error;
};

void scan_range(const Circuit& c, const BigInt& d, std::uint64_t lo, std::uint64_t hi,
                std::uint64_t budget_ms, std::atomic<std::uint64_t>& best, ScanResult& out) {
  try {
    HittingSetEnumerator en(c.n_inputs() * c.algebra().h(), d, c.algebra().q());
    en.seek(lo);
    Budget budget(budget_ms);
    std::vector<std::uint8_t> digits;
    std::vector<std::uint8_t> scratch(c.scratch_size());
    for (std::uint64_t rank = lo; rank < hi; ++rank) {
      if ((rank & 0xFF) == 0 && best.load(std::memory_order_relaxed) < lo) return;
      budget.tick();
      if (!en.next(digits)) return;
      ++out.checked;
      c.eval_digits(digits.data(), scratch.data());
      if (outputs_equal(c, scratch.data())) {
        out.hit_rank = rank;
        out.hit_digits = digits;
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (rank < cur && !best.compare_exchange_weak(cur, rank)) {
        }
        return;
      }
    }
  } catch (...) {
    out.error = std::current_exception();
  }
}

}  // namespace

SolverAnswer solve_deterministic(const Circuit& c, DChoice d_choice, std::uint64_t budget_ms,
                                 int jobs) {
  if (jobs < 1) throw UsageError("solve: jobs must be >= 1");
  const CoordAlgebra& alg = c.algebra();
  const int nd = c.n_inputs() * alg.h();
  const BigInt d = chosen_degree_bound(alg, d_choice);
  HittingSetEnumerator en(nd, d, alg.q());
  const std::uint64_t total = saturate_u64(en.size());
  check_exhaustion(total, "hitting-set scan");

  Budget budget(budget_ms);
  std::vector<std::uint8_t> scratch(c.scratch_size());
  SolverStats stats;

  if (jobs == 1) {
    std::vector<std::uint8_t> digits;
    while (en.next(digits)) {
      budget.tick();
      c.eval_digits(digits.data(), scratch.data());
      ++stats.candidates_checked;
      stats.gate_evals += static_cast<std::uint64_t>(c.size());
      if (outputs_equal(c, scratch.data())) return make_sat(c, digits.data(), stats, budget);
    }
    stats.elapsed_seconds = budget.elapsed();
    return {SolveStatus::kUnsat, {}, stats};
  }

  const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs),
                                                        std::max<std::uint64_t>(total, 1));
  std::atomic<std::uint64_t> best{UINT64_MAX};
  std::vector<ScanResult> results(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = total / workers * w + std::min(total % workers, w);
    const std::uint64_t hi = lo + total / workers + (w < total % workers ? 1 : 0);
    threads.emplace_back(scan_range, std::cref(c), std::cref(d), lo, hi, budget_ms,
                         std::ref(best), std::ref(results[w]));
  }
  for (auto& t : threads) t.join();

  const ScanResult* winner = nullptr;
  for (const ScanResult& r : results) {
    stats.candidates_checked += r.checked;
    stats.gate_evals += r.checked * static_cast<std::uint64_t>(c.size());
    if (r.hit_rank != UINT64_MAX && (!winner || r.hit_rank < winner->hit_rank)) winner = &r;
  }
  if (winner) return make_sat(c, winner->hit_digits.data(), stats, budget);
  for (const ScanResult& r : results)
    if (r.error) std::rethrow_exception(r.error);
  stats.elapsed_seconds = budget.elapsed();
  return {SolveStatus::kUnsat, {}, stats};
}

long double McDensity::log_q() const {
  const long double lg = std::log2(static_cast<long double>(q));
  return -(d.convert_to<long double>() + static_cast<long double>(q) * lg);
}

long double McDensity::value() const {
  return std::pow(static_cast<long double>(q), log_q());
}

McDensity mc_density(const CoordAlgebra& alg, DChoice choice) {
  return {alg.q(), chosen_degree_bound(alg, choice)};
}

std::uint64_t mc_trials(long double c, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("mc_trials: epsilon must be in (0, 1)");
  if (!(c > 0.0L)) throw UsageError("mc_trials: density must be positive");
  if (c >= 1.0L) return 1;  // one trial already succeeds with certainty
  const long double n = std::ceil(std::log(1.0L / static_cast<long double>(epsilon)) / c);
  if (!std::isfinite(n) || n > 1e18L)
    throw ResourceError("mc_trials: trial count exceeds 1e18; use brute force");
  return n < 1.0L ? 1 : static_cast<std::uint64_t>(n);
}

BigInt assignment_space(const Circuit& c) {
  return big_pow(c.algebra().q(), static_cast<unsigned>(c.n_inputs() * c.algebra().h()));
}

SolverAnswer solve_monte_carlo(const Circuit& c, const MonteCarloConfig& cfg,
                               std::uint64_t budget_ms) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw UsageError("monte carlo: epsilon must be in (0, 1)");
  if (cfg.max_trials < 1) throw UsageError("monte carlo: max_trials must be >= 1");
  const CoordAlgebra& alg = c.algebra();
  const int q = alg.q();
  const int nd = c.n_inputs() * alg.h();
  const std::uint64_t planned = mc_trials(mc_density(alg, cfg.d_choice).value(), cfg.epsilon);
  const std::uint64_t trials = std::min(planned, cfg.max_trials);

  Budget budget(budget_ms);
  Rng rng(cfg.seed);
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(nd));
  std::vector<std::uint8_t> scratch(c.scratch_size());
  SolverStats stats;
  for (std::uint64_t t = 0; t < trials; ++t) {
    budget.tick();
    // One uniform assignment per trial, digits drawn in input-major order.
    for (int i = 0; i < nd; ++i) digits[static_cast<std::size_t>(i)] = rng.digit(q);
    c.eval_digits(digits.data(), scratch.data());
    ++stats.trials;
    ++stats.candidates_checked;
    stats.gate_evals += static_cast<std::uint64_t>(c.size());
    if (outputs_equal(c, scratch.data())) return make_sat(c, digits.data(), stats, budget);
  }
  stats.elapsed_seconds = budget.elapsed();
  return {SolveStatus::kProbablyUnsat, {}, stats};
}

ProductAnswer solve_product(const ProductCircuit& pc, Method method, DChoice d_choice,
                            MonteCarloConfig cfg, std::uint64_t budget_ms) {
  const auto solve_factor = [&](const Circuit& c, int which) {
    switch (method) {
      case Method::kBrute: return solve_brute(c, budget_ms);
      case Method::kHitting: return solve_deterministic(c, d_choice, budget_ms);
      case Method::kMc: {
        MonteCarloConfig factor_cfg = cfg;
        factor_cfg.seed = cfg.seed + static_cast<std::uint64_t>(which);  // independent streams
        return solve_monte_carlo(c, factor_cfg, budget_ms);
      }
    }
    throw UsageError("solve_product: unknown method");
  };

  ProductAnswer ans;
  const Circuit* factors[2] = {&pc.first, &pc.second};
  Assignment* witnesses[2] = {&ans.first, &ans.second};
  for (int i = 0; i < 2; ++i) {
    SolverAnswer a = solve_factor(*factors[i], i);
    ans.stats.candidates_checked += a.stats.candidates_checked;
    ans.stats.trials += a.stats.trials;
    ans.stats.gate_evals += a.stats.gate_evals;
    ans.stats.elapsed_seconds += a.stats.elapsed_seconds;
    if (a.status != SolveStatus::kSat) {
      // First non-SAT factor decides; the other factor is not solved.
      ans.status = a.status;
      ans.failing_factor = i;
      return ans;
    }
    *witnesses[i] = std::move(a.witness);
  }
  ans.status = SolveStatus::kSat;
  return ans;
}

}  // namespace csat
