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

#ifndef JTR_MODEL_IO_HPP
#define JTR_MODEL_IO_HPP

#include <iosfwd>
#include <string>

#include "jtr/model.hpp"

namespace jtr {

// Line-oriented network format:
//
//   network <name>
//   description <text>          (optional)
//   variables
//     <id> <label> <cardinality> [state names...]
//   end
//   directed
//     <parent> <child>
//   end
//   undirected
//     <u> <v>
//   end
//   potentials
//     over <v1> ... <vk>        (cells follow, row-major, last id fastest)
//       <numbers...>
//     end
//   end
//
// '#' starts a comment. Sections appear in this order. Cardinalities,
// arities and table normalization are validated; errors carry line numbers.
NetworkModel parse_network(std::istream& in);
NetworkModel parse_network_file(const std::string& path);

// Inverse of parse_network; floating-point cells use 17 significant digits
// so the round trip is exact.
void serialize_network(std::ostream& os, const NetworkModel& m);
void write_network_file(const std::string& path, const NetworkModel& m);  // atomic

// Atomic text write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace jtr

#endif  // JTR_MODEL_IO_HPP
