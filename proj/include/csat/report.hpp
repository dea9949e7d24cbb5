// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "csat/solve.hpp"
#include "csat/version.hpp"

namespace csat {

using Json = nlohmann::json;

// One canonical structured-text document per run: the subcommand, every knob
// needed to reproduce it, and the result. Harnesses diff these files, so the
// serialization round-trips exactly.
struct RunReport {
  std::string command;
  Json config;
  Json result;
  std::string version = kVersion;

  bool operator==(const RunReport&) const = default;
};

Json to_json(const RunReport& r);
RunReport run_report_from_json(const Json& j);

// Witness elements appear as digit strings in the coordinate codec.
Json answer_to_json(const SolverAnswer& a);
Json product_answer_to_json(const ProductAnswer& a);

}  // namespace csat
