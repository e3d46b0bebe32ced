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

#ifndef JTR_SYNTHETIC_HPP
#define JTR_SYNTHETIC_HPP

#include <cstdint>

#include "jtr/model.hpp"

namespace jtr {

// Seeded random DAG model with positive conditional tables. Parent count is
// capped so desk-scale brute force stays cheap.
NetworkModel random_dag_model(std::uint64_t seed, int n_vars, int cardinality = 2,
                              double edge_prob = 0.35, int max_parents = 3);

// Seeded random chain-graph model: consecutive nodes grouped into chain
// components, undirected trees inside components, forward directed links
// between them, pairwise positive component potentials.
NetworkModel random_chain_model(std::uint64_t seed, int n_vars, int cardinality = 2,
                                double link_prob = 0.35, int max_parents = 3);

}  // namespace jtr

#endif  // JTR_SYNTHETIC_HPP
