/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#include "jtr/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace jtr {

namespace {

struct Lines {
  std::vector<std::string> raw;
  std::size_t pos = 0;

  // Next meaningful line, stripped of comments; returns false at EOF.
  bool next(std::string& out, int& lineno) {
    while (pos < raw.size()) {
      std::string s = raw[pos++];
      const std::size_t hash = s.find('#');
      if (hash != std::string::npos) s.erase(hash);
      std::size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      std::size_t e = s.find_last_not_of(" \t\r");
      out = s.substr(b, e - b + 1);
      lineno = static_cast<int>(pos);
      return true;
    }
    return false;
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool reserved_word(const std::string& tok) {
  static const char* kWords[] = {"network", "description", "variables", "directed",
                                 "undirected", "potentials", "over", "end"};
  for (const char* w : kWords)
    if (tok == w) return true;
  return false;
}

double parse_double(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw ParseError("expected a number, found '" + tok + "'", line);
  return v;
}

}  // namespace

NetworkModel parse_network(std::istream& in) {
  Lines lines;
  for (std::string raw; std::getline(in, raw);) lines.raw.push_back(raw);

  NetworkModel m;
  std::string line;
  int ln = 0;

  if (!lines.next(line, ln)) throw ParseError("empty file");
  {
    const auto toks = split_ws(line);
    if (toks.size() != 2 || toks[0] != "network")
      throw ParseError("expected 'network <name>'", ln);
    m.name = toks[1];
  }

  if (!lines.next(line, ln)) throw ParseError("missing 'variables' section", ln);
  if (line.rfind("description", 0) == 0) {
    m.description = line.size() > 12 ? line.substr(12) : "";
    if (!lines.next(line, ln)) throw ParseError("missing 'variables' section", ln);
  }

  if (line != "variables") throw ParseError("expected 'variables'", ln);
  while (true) {
    if (!lines.next(line, ln)) throw ParseError("unterminated 'variables' section", ln);
    if (line == "end") break;
    const auto toks = split_ws(line);
    if (toks.size() < 3)
      throw ParseError("variable line needs '<id> <label> <cardinality> [states...]'", ln);
    if (reserved_word(toks[0]))
      throw ParseError("'" + toks[0] + "' is a reserved word and cannot name a variable", ln);
    int card = 0;
    try {
      card = std::stoi(toks[2]);
    } catch (...) {
      throw ParseError("bad cardinality '" + toks[2] + "'", ln);
    }
    std::vector<std::string> states(toks.begin() + 3, toks.end());
    if (!states.empty() && static_cast<int>(states.size()) != card)
      throw ParseError("variable " + toks[0] + ": " + std::to_string(states.size()) +
                           " state names for cardinality " + std::to_string(card),
                       ln);
    try {
      m.variables.add(toks[0], card, std::move(states), toks[1]);
    } catch (const Error& e) {
      throw ParseError(e.what(), ln);
    }
  }
  if (m.variables.empty()) throw ParseError("empty variable list", ln);

  auto lookup = [&m](const std::string& name, int line) {
    const VarId v = m.variables.find(name);
    if (v < 0) throw ParseError("unknown variable '" + name + "'", line);
    return v;
  };

  std::vector<Link> directed, undirected;
  if (!lines.next(line, ln) || line != "directed") throw ParseError("expected 'directed'", ln);
  while (true) {
    if (!lines.next(line, ln)) throw ParseError("unterminated 'directed' section", ln);
    if (line == "end") break;
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError("directed link needs '<parent> <child>'", ln);
    directed.push_back({lookup(toks[0], ln), lookup(toks[1], ln)});
  }
  if (!lines.next(line, ln) || line != "undirected") throw ParseError("expected 'undirected'", ln);
  while (true) {
    if (!lines.next(line, ln)) throw ParseError("unterminated 'undirected' section", ln);
    if (line == "end") break;
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError("undirected link needs '<u> <v>'", ln);
    undirected.push_back({lookup(toks[0], ln), lookup(toks[1], ln)});
  }
  try {
    m.graph = ChainGraph(m.variables.all_ids(), directed, undirected);
  } catch (const StructureError& e) {
    throw ParseError(e.what(), ln);
  }

  if (!lines.next(line, ln) || line != "potentials") throw ParseError("expected 'potentials'", ln);
  while (true) {
    if (!lines.next(line, ln)) throw ParseError("unterminated 'potentials' section", ln);
    if (line == "end") break;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0] != "over")
      throw ParseError("expected 'over <variables...>' or 'end'", ln);
    std::vector<VarId> domain;
    std::string domain_names;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      domain.push_back(lookup(toks[i], ln));
      domain_names += (i > 1 ? "," : "") + toks[i];
    }
    if (domain.empty()) throw ParseError("'over' needs at least one variable", ln);
    std::vector<int> cards = m.variables.cards_for(domain);
    std::size_t want = 1;
    for (int c : cards) want *= static_cast<std::size_t>(c);

    std::vector<double> cells;
    const int over_line = ln;
    while (true) {
      if (!lines.next(line, ln)) throw ParseError("unterminated potential block", ln);
      if (line == "end") break;
      for (const std::string& tok : split_ws(line)) cells.push_back(parse_double(tok, ln));
    }
    if (cells.size() != want)
      throw ParseError("table over (" + domain_names + "): expected " + std::to_string(want) +
                           " cells, found " + std::to_string(cells.size()),
                       over_line);
    try {
      m.potentials.push_back(Potential(std::move(domain), std::move(cards), std::move(cells)));
    } catch (const Error& e) {
      throw ParseError(e.what(), over_line);
    }
  }

  if (lines.next(line, ln)) throw ParseError("unexpected content after 'potentials' section", ln);

  validate_model(m);
  return m;
}

NetworkModel parse_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_network(in);
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void serialize_network(std::ostream& os, const NetworkModel& m) {
  os << "network " << m.name << "\n";
  if (!m.description.empty()) os << "description " << m.description << "\n";
  os << "variables\n";
  for (const Variable& v : m.variables) {
    os << "  " << v.name << " " << v.label << " " << v.cardinality;
    for (const std::string& s : v.states) os << " " << s;
    os << "\n";
  }
  os << "end\ndirected\n";
  for (auto [u, v] : m.graph.directed())
    os << "  " << m.variables[u].name << " " << m.variables[v].name << "\n";
  os << "end\nundirected\n";
  for (auto [u, v] : m.graph.undirected())
    os << "  " << m.variables[u].name << " " << m.variables[v].name << "\n";
  os << "end\npotentials\n";
  for (const Potential& p : m.potentials) {
    os << "  over";
    for (VarId v : p.domain()) os << " " << m.variables[v].name;
    os << "\n   ";
    // wrap at the last-variable block size for readability
    const std::size_t rowlen =
        p.arity() > 0 ? static_cast<std::size_t>(p.cards().back()) : p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
      os << " " << fmt17(p[i]);
      if ((i + 1) % rowlen == 0 && i + 1 < p.size()) os << "\n   ";
    }
    os << "\n  end\n";
  }
  os << "end\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename '" + tmp + "' to '" + path + "'");
}

void write_network_file(const std::string& path, const NetworkModel& m) {
  std::ostringstream os;
  serialize_network(os, m);
  write_file_atomic(path, os.str());
}

}  // namespace jtr
