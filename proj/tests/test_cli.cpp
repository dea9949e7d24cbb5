// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <unistd.h>

#include "csat/circuit.hpp"
#include "csat/report.hpp"

using namespace csat;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

// Runs the installed binary through the shell; CSAT_BIN and CSAT_DATA_DIR
// come from the build system.
RunResult run(const std::string& args, const std::string& cwd = "") {
  std::string cmd;
  if (!cwd.empty()) cmd += "cd " + cwd + " && ";
  cmd += std::string(CSAT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("csat_cli_" + std::to_string(getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const std::string kData = CSAT_DATA_DIR;
const std::string kAlg = kData + "/a22.alg";
const std::string kSat = kData + "/sat.cir";
const std::string kUnsat = kData + "/unsat.cir";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("solve: SAT exits 10 with the witness in the report") {
  const RunResult r = run("solve " + kAlg + " " + kSat + " --method hitting --status-exit");
  CHECK(r.exit_code == 10);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("command") == "solve");
  CHECK(doc.at("version") == "csat 0.1.0");
  CHECK(doc.at("result").at("status") == "SAT");
  CHECK(doc.at("result").at("witness") == Json::array({"00", "00"}));
  CHECK(doc.at("result").at("hitting_set_size") == "16");
  CHECK(doc.at("result").at("degree_bound") == "4");
  CHECK(doc.at("config").at("method") == "hitting");
}

TEST_CASE("solve: UNSAT exits 20 after the full scan") {
  const RunResult r = run("solve " + kAlg + " " + kUnsat + " --method brute --status-exit");
  CHECK(r.exit_code == 20);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("result").at("status") == "UNSAT");
  CHECK(doc.at("result").at("stats").at("candidates_checked") == 16);
}

TEST_CASE("solve: exit 0 without --status-exit") {
  CHECK(run("solve " + kAlg + " " + kUnsat).exit_code == 0);
  CHECK(run("solve " + kAlg + " " + kSat + " --method mc --seed 1").exit_code == 0);
}

TEST_CASE("solve: monte carlo report carries the trial plan") {
  const std::string cmd = "solve " + kAlg + " " + kSat + " --method mc --epsilon 0.01 --seed 3";
  const RunResult r = run(cmd);
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("result").at("planned_trials") == 295);
  CHECK(doc.at("result").at("density").at("value") == doctest::Approx(0.015625));
  CHECK(doc.at("result").at("brute_recommended") == true);  // 295 > 16 assignments
  CHECK(doc.at("config").at("epsilon") == doctest::Approx(0.01));

  // Same circuit and seed: identical answer and trial count.
  const Json again = Json::parse(run(cmd).output);
  CHECK(again.at("result").at("status") == doc.at("result").at("status"));
  CHECK(again.at("result").at("witness") == doc.at("result").at("witness"));
  CHECK(again.at("result").at("stats").at("trials") == doc.at("result").at("stats").at("trials"));
}

TEST_CASE("solve: flag coherence and validation exit 1") {
  CHECK(run("solve " + kAlg + " " + kSat + " --method brute --epsilon 0.5").exit_code == 1);
  CHECK(run("solve " + kAlg + " " + kSat + " --method mc --epsilon 2").exit_code == 1);
  CHECK(run("solve " + kAlg + " " + kSat + " --method guess").exit_code == 1);
  CHECK(run("solve " + kAlg).exit_code == 1);  // missing circuit
  CHECK(run("frobnicate").exit_code == 1);     // unknown subcommand
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("solve: parallel scan matches the serial witness") {
  const Json serial = Json::parse(run("solve " + kAlg + " " + kSat + " --method hitting").output);
  const Json par =
      Json::parse(run("solve " + kAlg + " " + kSat + " --method hitting --jobs 4").output);
  CHECK(par.at("result").at("status") == serial.at("result").at("status"));
  CHECK(par.at("result").at("witness") == serial.at("result").at("witness"));
}

TEST_CASE("solve: kernel selection is a runtime flag") {
  const RunResult r = run("solve " + kAlg + " " + kSat + " --kernel scalar");
  CHECK(r.exit_code == 0);
  CHECK(Json::parse(r.output).at("config").at("kernel") == "scalar");
  CHECK(run("solve " + kAlg + " " + kSat + " --kernel turbo").exit_code == 1);
}

TEST_CASE("solve: report file round-trips") {
  TempDir tmp;
  const fs::path out = tmp.path / "report.json";
  const RunResult r = run("solve " + kAlg + " " + kSat + " --out " + out.string());
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(slurp(out));
  CHECK(Json::parse(r.output) == doc);  // stdout and file agree
  const RunReport rep = run_report_from_json(doc);
  CHECK(to_json(rep) == doc);  // lossless round trip
  CHECK(rep.command == "solve");
}

TEST_CASE("exit taxonomy: format 2, resource 3, budget 3") {
  TempDir tmp;
  const fs::path bad = tmp.path / "bad.alg";
  std::ofstream(bad) << "garbage\n";
  CHECK(run("solve " + bad.string() + " " + kSat).exit_code == 2);
  CHECK(run("solve " + kAlg + " " + kSat + " --limit 4").exit_code == 3);

  // 2^22 assignments of a constant-mismatch circuit vs a 1 ms budget.
  const fs::path big = tmp.path / "big.cir";
  std::ofstream(big) << "CIRCUIT v1\nalgebra a22.alg\ninputs 11\ng12 = const 10\n"
                        "g13 = const 00\noutput g12 g13\n";
  CHECK(run("solve " + kAlg + " " + big.string() + " --method brute --budget 1").exit_code == 3);
}

TEST_CASE("translate: prints the system, f and the degree report") {
  const RunResult r = run("translate " + kAlg + " " + kSat);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("f = 1 + x2*y2\n") != std::string::npos);
  CHECK(r.output.find("deg 2 <= 4 <= 16\n") != std::string::npos);
  CHECK(r.output.find("syspol 2 <= 4\n") != std::string::npos);
  CHECK(r.output.find("check ok\n") != std::string::npos);
}

TEST_CASE("encode: writes a loadable circuit-algebra pair") {
  TempDir tmp;
  const fs::path cir = tmp.path / "eq.cir";
  const RunResult r = run("encode \"x1*x2 = 1\" --q 2 --h 2 --m 2 --out " + cir.string());
  CHECK(r.exit_code == 0);
  const Circuit c = load_circuit(cir.string());  // resolves eq.alg next to it
  CHECK(c.n_inputs() == 2);
  CHECK(run("solve " + (tmp.path / "eq.alg").string() + " " + cir.string() +
            " --method brute --status-exit")
            .exit_code == 10);

  CHECK(run("encode \"x1*x2*x3 = 1\" --q 2 --h 2 --m 2").exit_code == 1);  // deg > m^(h-1)
  CHECK(run("encode \"x1*x2\" --q 2 --h 2 --m 2").exit_code == 1);         // no '='
  CHECK(run("encode \"x1 = 1\" --q 4 --h 2 --m 2").exit_code == 1);        // q not prime
}

TEST_CASE("verify: density sweep covers every function") {
  const RunResult r = run("verify --density 2 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("256 functions checked, 0 violations") != std::string::npos);
}

TEST_CASE("verify: degree sweep stays under the refined bound") {
  const RunResult r = run("verify --degree " + kAlg + " 2 25");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("25 circuits, max deg f = ") != std::string::npos);
  CHECK(r.output.find("<= 4") != std::string::npos);
  CHECK(r.output.find("0 violations") != std::string::npos);
}

TEST_CASE("verify: reduction traces hold their inequalities") {
  const RunResult r = run("verify --reduction 2 2 --count 25");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find(" traces, 0 violations") != std::string::npos);
}

TEST_CASE("verify: exactly one mode") {
  CHECK(run("verify").exit_code == 1);
  CHECK(run("verify --density 2 2 --reduction 2 2").exit_code == 1);
}

TEST_CASE("gen: --example reproduces the shipped algebra byte for byte") {
  TempDir tmp;
  const fs::path out = tmp.path / "fresh.alg";
  CHECK(run("gen --example 2 2 2 --out " + out.string()).exit_code == 0);
  CHECK(slurp(out) == slurp(kAlg));
  CHECK(run("gen --example 1 2 2").exit_code == 1);  // q must be prime
}

TEST_CASE("gen: random corpus is reproducible and loadable") {
  TempDir tmp;
  const std::string dir1 = (tmp.path / "c1").string(), dir2 = (tmp.path / "c2").string();
  const std::string spec = kAlg + " 2 8 4 7";
  CHECK(run("gen --random-circuits " + spec + " --out-dir " + dir1).exit_code == 0);
  CHECK(run("gen --random-circuits " + spec + " --out-dir " + dir2).exit_code == 0);
  for (int i = 0; i < 4; ++i) {
    const std::string name = "rc_" + std::to_string(i) + ".cir";
    CHECK(slurp(fs::path(dir1) / name) == slurp(fs::path(dir2) / name));
    const Circuit c = load_circuit((fs::path(dir1) / name).string());
    CHECK(c.n_inputs() == 2);
    CHECK(c.size() == 8);
  }
}

TEST_CASE("bench: methods agree across the shipped corpus") {
  TempDir tmp;
  const fs::path out = tmp.path / "bench.json";
  const RunResult r =
      run("bench " + kAlg + " " + kData + " --methods brute,hitting,mc --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("agreement 2/2") != std::string::npos);
  const Json doc = Json::parse(slurp(out));
  CHECK(doc.at("command") == "bench");
  CHECK(doc.at("result").at("rows").size() == 6);  // 2 instances x 3 methods
  CHECK(doc.at("result").at("agreement") == 2);
  // The UNSAT instance runs the full planned mc trial count.
  for (const Json& row : doc.at("result").at("rows"))
    if (row.at("instance") == "unsat.cir" && row.at("method") == "mc")
      CHECK(row.at("trials") == 295);
}

TEST_CASE("solve --product: factor-wise answers") {
  TempDir tmp;
  CHECK(run("gen --example 3 2 2 --out " + (tmp.path / "f322.alg").string()).exit_code == 0);
  const std::string algs = kAlg + " " + (tmp.path / "f322.alg").string();

  std::ofstream(tmp.path / "psat.cir") << "CIRCUIT v1\nalgebra prod\ninputs 2\n"
                                          "g3 = p1 g1 g2\ng4 = const 10:10\noutput g3 g4\n";
  RunResult r = run("solve --product " + algs + " " + (tmp.path / "psat.cir").string() +
                    " --method hitting --status-exit");
  CHECK(r.exit_code == 10);
  Json doc = Json::parse(r.output);
  CHECK(doc.at("result").at("witness") == Json::array({"01:01", "01:01"}));
  CHECK(doc.at("result").at("failing_factor") == -1);

  std::ofstream(tmp.path / "punsat.cir") << "CIRCUIT v1\nalgebra prod\ninputs 2\n"
                                            "g3 = p1 g1 g2\ng4 = const 00:01\noutput g3 g4\n";
  r = run("solve --product " + algs + " " + (tmp.path / "punsat.cir").string() +
          " --method brute --status-exit");
  CHECK(r.exit_code == 20);
  doc = Json::parse(r.output);
  CHECK(doc.at("result").at("status") == "UNSAT");
  CHECK(doc.at("result").at("failing_factor") == 1);

  CHECK(run("solve --product " + kAlg + " " + (tmp.path / "psat.cir").string()).exit_code == 1);
}

TEST_SUITE_END();
