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

#include "jtr/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace jtr {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_report(std::ostream& os, const std::string& network_name, const ReductionReport& r,
                  const VariableSet& vars) {
  const double reduction =
      r.size_before > 0
          ? 100.0 * (1.0 - static_cast<double>(r.size_after) / static_cast<double>(r.size_before))
          : 0.0;
  os << "network\tsize_before\tsize_after\tlinks_removed\treduction_pct\ttotal_divergence\t"
        "error_bound\tmode\n";
  char red[32];
  std::snprintf(red, sizeof red, "%.6f", reduction);
  os << network_name << '\t' << r.size_before << '\t' << r.size_after << '\t'
     << r.removals.size() << '\t' << red << '\t' << num(r.total_divergence) << '\t'
     << num(r.bound) << '\t' << r.mode << "\n\n";

  os << "step\talpha\tbeta\tclique\tdivergence\tsaving\tcase\tmode\n";
  for (std::size_t i = 0; i < r.removals.size(); ++i) {
    const RemovalRecord& rec = r.removals[i];
    os << (i + 1) << '\t' << vars[rec.alpha].name << '\t' << vars[rec.beta].name << '\t';
    for (std::size_t k = 0; k < rec.clique.size(); ++k)
      os << (k ? "," : "") << vars[rec.clique[k]].name;
    os << '\t' << num(rec.divergence) << '\t' << rec.saving << '\t'
       << surgery_case_name(rec.kase) << '\t' << rec.mode << "\n";
  }
}

ReportCheck check_report(std::istream& is) {
  ReportCheck out;
  std::string line;
  if (!std::getline(is, line) || split_tabs(line).size() != 8) {
    out.ok = false;
    out.text = "missing or malformed header";
    return out;
  }
  if (!std::getline(is, line)) {
    out.ok = false;
    out.text = "missing summary row";
    return out;
  }
  const auto row = split_tabs(line);
  if (row.size() != 8) {
    out.ok = false;
    out.text = "summary row has " + std::to_string(row.size()) + " columns, want 8";
    return out;
  }
  const double before = std::atof(row[1].c_str());
  const double after = std::atof(row[2].c_str());
  const std::size_t links = static_cast<std::size_t>(std::atol(row[3].c_str()));
  const double reduction = std::atof(row[4].c_str());
  const double total = std::atof(row[5].c_str());
  const double bound = std::atof(row[6].c_str());
  std::ostringstream text;

  const double want_red = before > 0 ? 100.0 * (1.0 - after / before) : 0.0;
  if (std::abs(want_red - reduction) > 1e-4) {
    out.ok = false;
    text << "reduction_pct " << reduction << " does not match 1 - after/before = " << want_red
         << "\n";
  }
  if (std::abs(error_bound(total) - bound) > 1e-9 + 1e-6 * bound) {
    out.ok = false;
    text << "error_bound " << bound << " does not match sqrt(total/2) = " << error_bound(total)
         << "\n";
  }

  // removal rows
  std::getline(is, line);  // blank
  std::getline(is, line);  // removal header
  double sum = 0.0;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 8) {
      out.ok = false;
      text << "removal row with " << cols.size() << " columns\n";
      break;
    }
    sum += std::atof(cols[4].c_str());
    ++rows;
  }
  if (rows != links) {
    out.ok = false;
    text << "links_removed = " << links << " but " << rows << " removal rows\n";
  }
  if (std::abs(sum - total) > 1e-9 + 1e-6 * std::abs(total)) {
    out.ok = false;
    text << "total_divergence " << total << " does not match the row sum " << sum << "\n";
  }
  text << "network " << row[0] << ": size " << row[1] << " -> " << row[2] << " (" << row[4]
       << "% reduction), " << row[3] << " links removed, divergence " << row[5] << ", bound "
       << row[6] << ", mode " << row[7] << "\n";
  out.text = text.str();
  return out;
}

}  // namespace jtr
