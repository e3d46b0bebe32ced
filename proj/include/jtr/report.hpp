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

#ifndef JTR_REPORT_HPP
#define JTR_REPORT_HPP

#include <iosfwd>
#include <string>

#include "jtr/reduce.hpp"
#include "jtr/variable.hpp"

namespace jtr {

// Tab-separated report: a summary row (Table-1 style columns), a blank
// line, then one row per removal. All numbers are formatted fixed-width so
// identical runs produce byte-identical files.
void write_report(std::ostream& os, const std::string& network_name, const ReductionReport& r,
                  const VariableSet& vars);

// Re-reads a report and recomputes the derived columns (reduction %, error
// bound, divergence total). Returns a human-readable verdict; `ok` is false
// when any column fails to recompute.
struct ReportCheck {
  bool ok = true;
  std::string text;
};
ReportCheck check_report(std::istream& is);

}  // namespace jtr

#endif  // JTR_REPORT_HPP
