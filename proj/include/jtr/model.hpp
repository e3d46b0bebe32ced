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

#ifndef JTR_MODEL_HPP
#define JTR_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jtr/chain_graph.hpp"
#include "jtr/potential.hpp"
#include "jtr/variable.hpp"

namespace jtr {

// Serializable unit: variables, chain graph and component potentials.
// DAG models carry one conditional table per variable over {v} u pa(v),
// normalized over v; chain-graph models carry component potentials over
// cliques of the per-component moral graphs (Eq-3 style).
struct NetworkModel {
  std::string name;
  std::string description;
  VariableSet variables;
  ChainGraph graph;
  std::vector<Potential> potentials;
};

// Refuse to materialize p(K | pa(K)) past this many cells.
constexpr std::size_t kComponentCellLimit = std::size_t(1) << 24;

// Chain components in topological order with their parent sets and the
// tables assigned to each (a table goes to the topologically deepest
// component it intersects).
struct ComponentLayout {
  std::vector<NodeSet> components;
  std::vector<NodeSet> parents;             // pa(K) per component
  std::vector<std::vector<int>> tables;     // indices into model.potentials
  std::vector<int> component_of_table;      // inverse map
};

ComponentLayout layout_components(const NetworkModel& m);

// Structural invariants; throws ParseError naming the offender.
void validate_model(const NetworkModel& m);

bool is_dag_model(const NetworkModel& m);

// Number of conditional probabilities to specify: for every table of
// dimension >= 2 assigned to component K, |Sp(A)| - |Sp(A \ K)|.
// One-dimensional priors are not counted.
std::int64_t parameter_count(const NetworkModel& m);

// p(K | pa(K)) per Eq (3), materialized over K+ with the domain ordered
// (pa(K)..., K...). Throws ComponentTooLargeError past kComponentCellLimit.
Potential component_conditional(const NetworkModel& m, const ComponentLayout& layout, int ci);

std::int64_t state_space_size(const VariableSet& vars, const NodeSet& s);

}  // namespace jtr

#endif  // JTR_MODEL_HPP
