// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csat/algebra.hpp"
#include "csat/circuit.hpp"
#include "csat/errors.hpp"
#include "csat/kernels.hpp"
#include "csat/limits.hpp"
#include "csat/poly.hpp"
#include "csat/poly_text.hpp"
#include "csat/report.hpp"
#include "csat/rng.hpp"
#include "csat/solve.hpp"
#include "csat/translate.hpp"
#include "csat/version.hpp"

namespace fs = std::filesystem;
using namespace csat;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot write");
  out << text;
  if (!out) throw FormatError(path.string() + ": write failed");
}

std::shared_ptr<const CoordAlgebra> load_algebra_ptr(const std::string& path) {
  return std::make_shared<const CoordAlgebra>(load_algebra(path));
}

int parse_int_arg(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || tok.empty()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": expected an integer, got '" + tok + "'");
  }
}

std::uint64_t parse_u64_arg(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(tok, &used);
    if (used != tok.size() || tok.empty()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": expected an unsigned integer, got '" + tok + "'");
  }
}

Method parse_method(const std::string& name) {
  if (name == "brute") return Method::kBrute;
  if (name == "hitting") return Method::kHitting;
  if (name == "mc") return Method::kMc;
  throw UsageError("unknown method '" + name + "'");
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::vector<std::string> files;
  std::string method = "hitting";
  std::string d = "refined";
  double epsilon = 0.01;
  bool epsilon_set = false;
  std::uint64_t seed = 0;
  std::uint64_t max_trials = UINT64_MAX;
  std::uint64_t budget = 0;
  int jobs = 1;
  bool product = false;
  bool status_exit = false;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  if (a.epsilon_set && a.method != "mc") throw UsageError("--epsilon applies only to --method mc");
  const DChoice dc = a.d == "coarse" ? DChoice::kCoarse : DChoice::kRefined;
  const MonteCarloConfig cfg{a.epsilon, a.seed, a.max_trials, dc};

  Json config{{"files", a.files},   {"method", a.method},
              {"d", a.d},           {"seed", a.seed},
              {"budget_ms", a.budget}, {"jobs", a.jobs},
              {"limit", exhaustion_limit()}, {"kernel", active_kernel().name}};
  if (a.method == "mc") {
    config["epsilon"] = a.epsilon;
    config["max_trials"] = a.max_trials;
  }

  SolveStatus status;
  Json result;
  if (a.product) {
    if (a.files.size() != 3)
      throw UsageError("solve --product needs <first algebra> <second algebra> <circuit>");
    const ProductAlgebra pa =
        direct_product(load_algebra_ptr(a.files[0]), load_algebra_ptr(a.files[1]));
    const ProductCircuit pc = parse_product_circuit(read_file(a.files[2]), pa);
    const ProductAnswer ans = solve_product(pc, parse_method(a.method), dc, cfg, a.budget);
    status = ans.status;
    result = product_answer_to_json(ans);
  } else {
    if (a.files.size() != 2) throw UsageError("solve needs <algebra> <circuit>");
    const auto alg = load_algebra_ptr(a.files[0]);
    const Circuit c = parse_circuit(read_file(a.files[1]), alg);
    const SolverAnswer ans = a.method == "brute"     ? solve_brute(c, a.budget)
                             : a.method == "hitting" ? solve_deterministic(c, dc, a.budget, a.jobs)
                                                     : solve_monte_carlo(c, cfg, a.budget);
    status = ans.status;
    result = answer_to_json(ans);
    const BigInt bound = chosen_degree_bound(*alg, dc);
    result["degree_bound"] = bound.str();
    result["hitting_set_size"] =
        hitting_set_size(c.n_inputs() * alg->h(), bound, alg->q()).str();
    if (a.method == "mc") {
      const McDensity den = mc_density(*alg, dc);
      const std::uint64_t planned = mc_trials(den.value(), a.epsilon);
      result["density"] = Json{{"q", den.q},
                               {"log_q", static_cast<double>(den.log_q())},
                               {"value", static_cast<double>(den.value())}};
      result["planned_trials"] = planned;
      result["brute_recommended"] = BigInt(planned) > assignment_space(c);
    }
  }

  RunReport rep{"solve", config, result};
  const std::string doc = to_json(rep).dump(2) + "\n";
  std::cout << doc;
  if (!a.out.empty()) write_file(a.out, doc);
  if (a.status_exit) return status == SolveStatus::kSat ? 10 : 20;
  return 0;
}

// ------------------------------------------------------------- translate

int cmd_translate(const std::string& alg_path, const std::string& cir_path) {
  const auto alg = load_algebra_ptr(alg_path);
  const Circuit c = parse_circuit(read_file(cir_path), alg);
  const std::vector<MultiPoly> system = circuit_to_system(c);
  const MultiPoly f = combine(system);
  const TranslationReport rep = verify_translation(c, f);
  const auto names = system_var_names(c.n_inputs(), alg->h());
  for (std::size_t i = 0; i < system.size(); ++i)
    std::cout << "p" << i + 1 << " = " << poly_to_string(system[i], names) << "\n";
  std::cout << "f = " << poly_to_string(f, names) << "\n";
  std::cout << "deg " << rep.deg_f << " <= " << rep.refined << " <= " << rep.coarse << "\n";
  std::cout << "syspol " << rep.syspol_aggregate << " <= " << rep.syspol_bound << "\n";
  std::cout << "check " << (rep.ok() ? "ok" : "violation") << "\n";
  return rep.ok() ? 0 : 4;
}

// ---------------------------------------------------------------- encode

int infer_var_count(const std::string& text) {
  int n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 'x') continue;
    std::size_t j = i + 1;
    int v = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) && v < 100000) {
      v = v * 10 + (text[j] - '0');
      ++j;
    }
    if (j > i + 1) n = std::max(n, v);
  }
  return n;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

int cmd_encode(const std::string& equation, int q, int h, int m, int n_flag,
               const std::string& out) {
  const auto pos = equation.find('=');
  if (pos == std::string::npos) throw UsageError("equation must look like '<poly> = <value>'");
  const std::string lhs = equation.substr(0, pos);
  const int y = parse_int_arg(trim(equation.substr(pos + 1)), "equation right-hand side");
  const int n = n_flag > 0 ? n_flag : infer_var_count(lhs);
  const PrimeField field(q);
  const MultiPoly p = parse_poly(field, default_var_names(n), lhs);
  const Circuit c = encode_field_equation(p, y, h, m);
  if (out.empty()) {
    std::cout << print_circuit(c, "example.alg");
    return 0;
  }
  // Ship the matching algebra next to the circuit so the pair is loadable.
  const fs::path cir_path(out);
  fs::path alg_path = cir_path;
  alg_path.replace_extension(".alg");
  write_file(alg_path, print_algebra(build_example(q, h, m)));
  write_file(cir_path, print_circuit(c, alg_path.filename().string()));
  std::cout << "wrote " << cir_path.string() << " and " << alg_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::vector<int> density;         // q n
  std::vector<std::string> degree;  // algebra n count
  std::vector<int> reduction;       // q n_max
  std::uint64_t seed = 0;
  int count = 100;
  int gates = 8;
};

int cmd_verify(const VerifyArgs& a) {
  const int modes = !a.density.empty() + !a.degree.empty() + !a.reduction.empty();
  if (modes != 1) throw UsageError("verify needs exactly one of --density, --degree, --reduction");

  if (!a.density.empty()) {
    // Every function F_q^n -> F_q, interpolated; each attained value must
    // meet the guaranteed preimage density.
    const int q = a.density[0], n = a.density[1];
    const PrimeField field(q);
    const std::uint64_t pts = points_count(q, n);
    check_exhaustion(pts, "density sweep grid");
    const BigInt fn_count = big_pow(q, static_cast<unsigned>(pts));
    if (fn_count > exhaustion_limit())
      throw ResourceError("density sweep needs " + fn_count.str() + " functions, limit is " +
                          std::to_string(exhaustion_limit()));
    std::vector<std::uint8_t> table(pts, 0);
    std::uint64_t checked = 0, violations = 0;
    for (;;) {
      const MultiPoly p = interpolate(field, n, table);
      for (int y = 0; y < q; ++y)
        violations += check_density(p, static_cast<std::uint8_t>(y)) == DensityStatus::kViolation;
      ++checked;
      int i = static_cast<int>(pts) - 1;
      while (i >= 0 && table[i] == q - 1) table[i--] = 0;
      if (i < 0) break;
      ++table[i];
    }
    std::cout << checked << " functions checked, " << violations << " violations\n";
    return violations ? 4 : 0;
  }

  if (!a.degree.empty()) {
    const auto alg = load_algebra_ptr(a.degree[0]);
    const int n = parse_int_arg(a.degree[1], "--degree n");
    const int count = parse_int_arg(a.degree[2], "--degree count");
    int max_deg = 0;
    std::uint64_t violations = 0;
    for (int i = 0; i < count; ++i) {
      const Circuit c = random_circuit(alg, n, a.gates, a.seed + i);
      const MultiPoly f = combine(circuit_to_system(c));
      const TranslationReport rep = verify_translation(c, f);
      max_deg = std::max(max_deg, rep.deg_f);
      violations += !rep.ok();
    }
    std::cout << count << " circuits, max deg f = " << max_deg << " <= "
              << degree_bound(*alg).refined << "\n";
    std::cout << violations << " violations\n";
    return violations ? 4 : 0;
  }

  // Reduction traces over random polynomials: constant steps at least halve
  // the preimage, affine steps divide it by q, the step count l is at least
  // n - deg, and constant steps stay below q*log2 q + 1.
  const int q = a.reduction[0], n_max = a.reduction[1];
  const PrimeField field(q);
  Rng rng(a.seed);
  const double l1_cap = q * std::log2(static_cast<double>(q)) + 1;
  std::uint64_t traces = 0, violations = 0;
  for (int n = 1; n <= n_max; ++n) {
    for (int i = 0; i < a.count; ++i) {
      const MultiPoly p = random_poly(field, n, n * (q - 1), rng);
      if (p.is_constant()) continue;
      for (int y = 0; y < q; ++y) {
        if (count_preimage(p, static_cast<std::uint8_t>(y)) == 0) continue;
        const ReductionTrace t = preimage_reduction(p, static_cast<std::uint8_t>(y));
        ++traces;
        bool bad = false;
        std::uint64_t prev = t.initial_preimage;
        for (const ReductionStep& s : t.steps) {
          bad |= s.affine ? s.preimage_after * q > prev : s.preimage_after * 2 > prev;
          prev = s.preimage_after;
        }
        bad |= p.degree() < n - t.l();
        bad |= t.l1() > l1_cap;
        violations += bad;
      }
    }
  }
  std::cout << traces << " traces, " << violations << " violations\n";
  return violations ? 4 : 0;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::vector<int> example;           // q h m
  std::vector<std::string> random;    // algebra n gates count seed
  std::string out;
  std::string out_dir = ".";
};

int cmd_gen(const GenArgs& a) {
  const int modes = !a.example.empty() + !a.random.empty();
  if (modes != 1) throw UsageError("gen needs exactly one of --example, --random-circuits");

  if (!a.example.empty()) {
    const int q = a.example[0], h = a.example[1], m = a.example[2];
    const CoordAlgebra alg = build_example(q, h, m);
    std::string name = a.out;
    if (name.empty())
      name = "a" + std::to_string(q) + std::to_string(h) +
             (m == 2 ? std::string() : "m" + std::to_string(m)) + ".alg";
    write_file(name, print_algebra(alg));
    std::cout << "wrote " << name << "\n";
    return 0;
  }

  const auto alg = load_algebra_ptr(a.random[0]);
  const int n = parse_int_arg(a.random[1], "--random-circuits n");
  const int k = parse_int_arg(a.random[2], "--random-circuits gates");
  const int count = parse_int_arg(a.random[3], "--random-circuits count");
  const std::uint64_t seed = parse_u64_arg(a.random[4], "--random-circuits seed");
  fs::create_directories(a.out_dir);
  // Algebra references resolve relative to the circuit file's directory.
  const std::string ref =
      fs::proximate(fs::absolute(a.random[0]), fs::absolute(a.out_dir)).string();
  for (int i = 0; i < count; ++i) {
    const Circuit c = random_circuit(alg, n, k, seed + i);
    write_file(fs::path(a.out_dir) / ("rc_" + std::to_string(i) + ".cir"), print_circuit(c, ref));
  }
  std::cout << "wrote " << count << " files in " << a.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string algebra;
  std::string corpus;
  std::string methods = "brute,hitting";
  std::string d = "refined";
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  const auto alg = load_algebra_ptr(a.algebra);
  const DChoice dc = a.d == "coarse" ? DChoice::kCoarse : DChoice::kRefined;
  std::vector<std::string> methods;
  std::stringstream ms(a.methods);
  for (std::string tok; std::getline(ms, tok, ',');) {
    parse_method(tok);  // validates
    methods.push_back(tok);
  }
  if (methods.empty()) throw UsageError("--methods must name at least one method");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.corpus))
    if (entry.path().extension() == ".cir") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .cir files in " + a.corpus);

  std::cout << std::left << std::setw(24) << "instance" << std::setw(9) << "method"
            << std::setw(16) << "status" << std::right << std::setw(12) << "candidates"
            << std::setw(8) << "trials" << std::setw(12) << "gate_evals" << std::setw(10)
            << "seconds" << "\n";
  Json rows = Json::array();
  int agree = 0;
  for (const fs::path& file : files) {
    const Circuit c = parse_circuit(read_file(file.string()), alg);
    bool sat_seen = false, unsat_seen = false;
    for (const std::string& method : methods) {
      SolverAnswer ans;
      bool budget_hit = false;
      try {
        ans = method == "brute"     ? solve_brute(c, a.budget)
              : method == "hitting" ? solve_deterministic(c, dc, a.budget)
                                    : solve_monte_carlo(
                                          c, {a.epsilon, a.seed, UINT64_MAX, dc}, a.budget);
      } catch (const BudgetError&) {
        budget_hit = true;  // marked, never fabricated
      }
      const std::string status = budget_hit ? "BUDGET" : to_string(ans.status);
      if (!budget_hit) (ans.status == SolveStatus::kSat ? sat_seen : unsat_seen) = true;
      std::cout << std::left << std::setw(24) << file.filename().string() << std::setw(9)
                << method << std::setw(16) << status << std::right << std::setw(12)
                << ans.stats.candidates_checked << std::setw(8) << ans.stats.trials
                << std::setw(12) << ans.stats.gate_evals << std::setw(10) << std::fixed
                << std::setprecision(4) << ans.stats.elapsed_seconds << "\n";
      rows.push_back(Json{{"instance", file.filename().string()},
                          {"method", method},
                          {"status", status},
                          {"candidates_checked", ans.stats.candidates_checked},
                          {"trials", ans.stats.trials},
                          {"gate_evals", ans.stats.gate_evals},
                          {"elapsed_seconds", ans.stats.elapsed_seconds}});
    }
    agree += !(sat_seen && unsat_seen);  // one-sided MC keeps this strict
  }
  std::cout << "agreement " << agree << "/" << files.size() << "\n";

  if (!a.out.empty()) {
    const Json config{{"algebra", a.algebra}, {"corpus", a.corpus},   {"methods", a.methods},
                      {"d", a.d},             {"epsilon", a.epsilon}, {"seed", a.seed},
                      {"budget_ms", a.budget}};
    const RunReport rep{
        "bench", config,
        Json{{"rows", rows}, {"agreement", agree}, {"instances", files.size()}}};
    write_file(a.out, to_json(rep).dump(2) + "\n");
  }
  return agree == static_cast<int>(files.size()) ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) + ": circuit satisfiability over coordinatized algebras"};
  app.require_subcommand(1);

  std::uint64_t limit = exhaustion_limit();
  std::string kernel = "auto";
  app.add_option("--limit", limit, "point budget for exhaustive operations")
      ->capture_default_str();
  app.add_option("--kernel", kernel, "byte kernel: auto, scalar, avx2")->capture_default_str();
  const auto apply_globals = [&] {
    if (limit < 1) throw UsageError("--limit must be >= 1");
    exhaustion_limit() = limit;
    set_active_kernel(parse_kernel_kind(kernel));
  };

  int exit_code = 0;

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "decide satisfiability of a circuit");
  solve->fallthrough();
  solve->add_option("files", sa.files, "algebra file(s) then circuit file")->expected(2, 3);
  solve->add_option("--method", sa.method, "brute, hitting or mc")
      ->check(CLI::IsMember({"brute", "hitting", "mc"}))
      ->capture_default_str();
  solve->add_option("--d", sa.d, "degree bound choice")
      ->check(CLI::IsMember({"refined", "coarse"}))
      ->capture_default_str();
  auto* eps_opt = solve->add_option("--epsilon", sa.epsilon, "mc false-negative bound");
  solve->add_option("--seed", sa.seed, "mc random seed");
  solve->add_option("--max-trials", sa.max_trials, "mc trial cap");
  solve->add_option("--budget", sa.budget, "time budget in milliseconds");
  solve->add_option("--jobs", sa.jobs, "parallel workers for the hitting scan");
  solve->add_flag("--product", sa.product, "two-factor product instance");
  solve->add_flag("--status-exit", sa.status_exit, "exit 10 on SAT, 20 otherwise");
  solve->add_option("--out", sa.out, "also write the report to this file");
  solve->callback([&] {
    apply_globals();
    sa.epsilon_set = eps_opt->count() > 0;
    exit_code = cmd_solve(sa);
  });

  std::string tr_alg, tr_cir;
  auto* translate = app.add_subcommand("translate", "emit the polynomial system and f");
  translate->fallthrough();
  translate->add_option("algebra", tr_alg)->required();
  translate->add_option("circuit", tr_cir)->required();
  translate->callback([&] {
    apply_globals();
    exit_code = cmd_translate(tr_alg, tr_cir);
  });

  std::string eq, enc_out;
  int enc_q = 0, enc_h = 0, enc_m = 0, enc_n = 0;
  auto* encode = app.add_subcommand("encode", "compile a field equation into a circuit");
  encode->fallthrough();
  encode->set_help_flag("--help", "print help");  // frees -h for the tower height
  encode->add_option("equation", eq, "e.g. \"x1*x2 = 1\"")->required();
  encode->add_option("--q", enc_q, "field size")->required();
  encode->add_option("--h", enc_h, "tower height")->required();
  encode->add_option("--m", enc_m, "product arity")->required();
  encode->add_option("--n", enc_n, "variable count (default: inferred)");
  encode->add_option("--out", enc_out, "circuit file (a matching .alg is written next to it)");
  encode->callback([&] {
    apply_globals();
    exit_code = cmd_encode(eq, enc_q, enc_h, enc_m, enc_n, enc_out);
  });

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "batch property sweeps");
  verify->fallthrough();
  verify->add_option("--density", va.density, "q n: all functions F_q^n -> F_q")->expected(2);
  verify->add_option("--degree", va.degree, "algebra n count: random-circuit degree bounds")
      ->expected(3);
  verify->add_option("--reduction", va.reduction, "q n_max: preimage reduction traces")
      ->expected(2);
  verify->add_option("--seed", va.seed, "sweep seed");
  verify->add_option("--count", va.count, "instances per size")->capture_default_str();
  verify->add_option("--gates", va.gates, "gates per random circuit")->capture_default_str();
  verify->callback([&] {
    apply_globals();
    exit_code = cmd_verify(va);
  });

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "write algebra / circuit corpora");
  gen->fallthrough();
  gen->add_option("--example", ga.example, "q h m: the example algebra family")->expected(3);
  gen->add_option("--random-circuits", ga.random, "algebra n gates count seed")->expected(5);
  gen->add_option("--out", ga.out, "output file for --example");
  gen->add_option("--out-dir", ga.out_dir, "output directory for --random-circuits")
      ->capture_default_str();
  gen->callback([&] {
    apply_globals();
    exit_code = cmd_gen(ga);
  });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "run methods across a circuit corpus");
  bench->fallthrough();
  bench->add_option("algebra", ba.algebra)->required();
  bench->add_option("corpus", ba.corpus, "directory of .cir files")->required();
  bench->add_option("--methods", ba.methods, "comma-separated method list")
      ->capture_default_str();
  bench->add_option("--d", ba.d)->check(CLI::IsMember({"refined", "coarse"}));
  bench->add_option("--epsilon", ba.epsilon)->capture_default_str();
  bench->add_option("--seed", ba.seed);
  bench->add_option("--budget", ba.budget, "per-run time budget in milliseconds");
  bench->add_option("--out", ba.out, "write the machine-readable report here");
  bench->callback([&] {
    apply_globals();
    exit_code = cmd_bench(ba);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
