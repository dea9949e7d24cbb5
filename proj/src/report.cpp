// SPDX-License-Identifier: Apache-2.0
#include "csat/report.hpp"

namespace csat {
namespace {

Json stats_to_json(const SolverStats& s) {
  return Json{{"candidates_checked", s.candidates_checked},
              {"trials", s.trials},
              {"gate_evals", s.gate_evals},
              {"elapsed_seconds", s.elapsed_seconds}};
}

Json witness_to_json(const Assignment& w) {
  Json arr = Json::array();
  for (const Element& e : w) arr.push_back(element_to_string(e));
  return arr;
}

}  // namespace

Json to_json(const RunReport& r) {
  return Json{{"command", r.command},
              {"config", r.config},
              {"result", r.result},
              {"version", r.version}};
}

RunReport run_report_from_json(const Json& j) {
  return {j.at("command").get<std::string>(), j.at("config"), j.at("result"),
          j.at("version").get<std::string>()};
}

Json answer_to_json(const SolverAnswer& a) {
  return Json{{"status", to_string(a.status)},
              {"witness", witness_to_json(a.witness)},
              {"stats", stats_to_json(a.stats)}};
}

Json product_answer_to_json(const ProductAnswer& a) {
  Json witness = Json::array();
  if (a.status == SolveStatus::kSat)
    for (std::size_t i = 0; i < a.first.size(); ++i)
      witness.push_back(element_to_string(a.first[i]) + ":" + element_to_string(a.second[i]));
  return Json{{"status", to_string(a.status)},
              {"witness", witness},
              {"failing_factor", a.failing_factor},
              {"stats", stats_to_json(a.stats)}};
}

}  // namespace csat
