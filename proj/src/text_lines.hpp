// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csat/errors.hpp"

namespace csat::lines {

struct Line {
  int no;
  std::vector<std::string> tokens;
};

// Splits on whitespace; '#' starts a comment. Blank lines are dropped.
inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{no, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline int parse_int(const std::string& tok, const char* what, int lineno) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (tok.empty() || used != tok.size())
    throw FormatError(std::string("expected ") + what + ", got '" + tok + "'", lineno);
  return v;
}

inline std::string join(const std::vector<std::string>& toks, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < toks.size(); ++i) {
    if (i > from) out += ' ';
    out += toks[i];
  }
  return out;
}

}  // namespace csat::lines
