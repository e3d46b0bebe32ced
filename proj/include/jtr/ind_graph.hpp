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

#ifndef JTR_IND_GRAPH_HPP
#define JTR_IND_GRAPH_HPP

#include <functional>

#include "jtr/chain_graph.hpp"
#include "jtr/model.hpp"

namespace jtr {

// Independence graph of sum_alpha p: complete nb(alpha); pa(alpha) -> each
// unconnected member of nb(alpha) u ch(alpha); nb(alpha) -> each unconnected
// child; complete ch(alpha) without introducing directed paths; delete alpha.
ChainGraph marginalize_graph(const ChainGraph& g, VarId alpha);

// Successive single-node marginalization, increasing node id.
ChainGraph marginalize_graph_set(const ChainGraph& g, const NodeSet& remove);

// Conditional independence graph of p_{V|S}: add the links of the moralized
// ancestral subgraph of S, then the Corollary-1 normal form (no links inside
// S; links between S and nb(S) undirected).
ChainGraph condition_graph(const ChainGraph& g, const NodeSet& s);

// The B|S panel: Theorem-3 conditioning, marginalization of V \ b, then the
// Corollary-1 normal form. Result ranges over b.
ChainGraph conditional_marginal_graph(const ChainGraph& g, const NodeSet& b, const NodeSet& s);

// Graph union of a marginal graph over A (including S) and a conditional
// graph over B (including S, Corollary-1 form). Directed cycles are repaired
// by orienting s - d links with s in S, d in nb(S) n (B \ S), lowest pair
// first; exhaustion throws CombinationError.
ChainGraph combine_graphs(const ChainGraph& ga, const ChainGraph& gb, const NodeSet& s);

struct Partition {
  NodeSet a;  // marginal side, includes s
  NodeSet b;  // conditional side, includes s
  NodeSet s;
};

// The 3.5 pipeline for one removed link: marginal graph over a (drop b \ s),
// conditional graph over b given s, combined by Theorem 4.
ChainGraph update_after_removal(const ChainGraph& g, VarId alpha, VarId beta, const Partition& p);

// Structural parameter count of the recursive model a graph would yield:
// per chain component, a simplicial elimination of (G_{K+})^m gives the
// recovered table domains; tables of dimension >= 2 count
// |Sp(A)| - |Sp(A \ K)|. Used to choose between the two marginal/
// conditional factorizations of a removal.
std::int64_t structural_parameter_count(const ChainGraph& g, const VariableSet& vars);

using MarginalFn = std::function<Potential(const NodeSet&)>;

struct RecursiveModel {
  NetworkModel model;  // DAG form, one conditional table per variable
  bool suboptimal = false;  // a component moral graph needed fill-ins
};

// Equivalent recursive model of a decomposable chain model: per chain
// component, a perfect numbering of (G_{K+})^m with pa(K) first yields DAG
// conditionals psi(v | pa(v)). Verifies the joint against psi on desk-scale
// models and throws FactorizationError on deviations beyond `tolerance`
// (pass a large tolerance for sampled potentials, whose joint carries
// estimation noise by construction).
RecursiveModel derive_recursive_model(const ChainGraph& g, const VariableSet& vars,
                                      const MarginalFn& psi, double tolerance = 1e-9);

}  // namespace jtr

#endif  // JTR_IND_GRAPH_HPP
