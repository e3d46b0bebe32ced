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

#ifndef JTR_COMPILE_HPP
#define JTR_COMPILE_HPP

#include "jtr/chain_graph.hpp"
#include "jtr/junction_tree.hpp"
#include "jtr/model.hpp"

namespace jtr {

struct CompileResult {
  ChainGraph moral;
  ChainGraph triangulated;
  std::vector<Link> fills;
  JunctionTree tree;  // consistent and normalized
};

// Multiply every component potential into its lowest-index covering clique,
// plus the Eq-3 normalizer 1/Z_K(pa(K)) for each component with parents.
// Leaves the tree initialized but not yet propagated.
void initialize(JunctionTree& tree, const NetworkModel& model);

// moralize -> triangulate -> junction tree -> initialize -> propagate.
CompileResult compile_model(const NetworkModel& model);

// Same structure, beliefs left at unity (for simulated potentials).
CompileResult compile_structure(const NetworkModel& model);

}  // namespace jtr

#endif  // JTR_COMPILE_HPP
