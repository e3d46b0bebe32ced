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

#ifndef JTR_CHAIN_GRAPH_HPP
#define JTR_CHAIN_GRAPH_HPP

#include <utility>
#include <vector>

#include "jtr/errors.hpp"
#include "jtr/variable.hpp"

namespace jtr {

using Link = std::pair<VarId, VarId>;
using NodeSet = std::vector<VarId>;  // kept sorted and duplicate-free

// Sorted-set helpers shared by the graph algorithms.
NodeSet sorted_unique(NodeSet v);
NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_intersect(const NodeSet& a, const NodeSet& b);
NodeSet set_minus(const NodeSet& a, const NodeSet& b);
bool is_subset(const NodeSet& a, const NodeSet& b);
bool contains(const NodeSet& a, VarId v);

// Mixed graph with directed and undirected links and no directed
// (semi-directed) cycles. Validity is checked on construction; operations
// assume it. Instances are immutable; edits go through ChainGraphBuilder.
class ChainGraph {
 public:
  ChainGraph() = default;
  ChainGraph(NodeSet nodes, std::vector<Link> directed, std::vector<Link> undirected);

  const NodeSet& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<Link>& directed() const { return directed_; }    // (u, v) = u -> v
  const std::vector<Link>& undirected() const { return undirected_; }  // canonical u < v

  bool has_node(VarId v) const;
  bool adjacent(VarId u, VarId v) const;
  bool has_directed(VarId u, VarId v) const;  // u -> v
  bool has_undirected(VarId u, VarId v) const;
  std::size_t link_count() const { return directed_.size() + undirected_.size(); }

  NodeSet parents_of(VarId v) const;
  NodeSet children_of(VarId v) const;
  NodeSet neighbours_of(VarId v) const;

  bool is_undirected() const { return directed_.empty(); }
  bool is_dag() const;
  bool is_connected() const;

  // Semi-directed reachability: a path from u following directed links
  // forward and undirected links either way.
  bool reaches(VarId u, VarId v) const;

  // Connected components of (V, E^u); singletons for isolated nodes.
  // Deterministic: components ordered by smallest member.
  std::vector<NodeSet> chain_components() const;

  struct Relations {
    NodeSet parents, children, neighbours;
  };
  // pa(A), ch(A), nb(A); all disjoint from A.
  Relations relations(const NodeSet& a) const;

  // Smallest superset of `a` closed under parents and neighbours.
  NodeSet ancestral_set(const NodeSet& a) const;

  // Marry the parents of every chain component, then drop directions.
  ChainGraph moralize() const;

  ChainGraph induced(const NodeSet& sub) const;

  // Undirected-graph separation: every path from a to b meets c.
  bool separates(const NodeSet& a, const NodeSet& b, const NodeSet& c) const;

  // Chordality via maximum-cardinality search (undirected graphs only).
  bool is_triangulated() const;

  // Chain components condensed, topologically ordered.
  std::vector<NodeSet> components_topological() const;

 private:
  friend class ChainGraphBuilder;
  void index();

  NodeSet nodes_;
  std::vector<Link> directed_;
  std::vector<Link> undirected_;
  // per-node adjacency, aligned with nodes_
  std::vector<NodeSet> pa_, ch_, nb_;
  int pos(VarId v) const;
};

// Mutable edit buffer. `valid()` runs the chain-graph check without
// throwing; `build()` produces a checked ChainGraph.
class ChainGraphBuilder {
 public:
  ChainGraphBuilder() = default;
  explicit ChainGraphBuilder(const ChainGraph& g);

  void add_node(VarId v);
  void remove_node(VarId v);  // drops incident links
  void add_directed(VarId u, VarId v);
  void add_undirected(VarId u, VarId v);
  void remove_link(VarId u, VarId v);  // either kind, either direction
  bool linked(VarId u, VarId v) const;
  bool has_undirected(VarId u, VarId v) const;
  bool has_directed(VarId u, VarId v) const;
  void make_undirected(VarId u, VarId v);
  void orient(VarId u, VarId v);  // replace any u~v link with u -> v

  const NodeSet& nodes() const { return nodes_; }
  std::vector<Link> directed_links() const;
  std::vector<Link> undirected_links() const;

  bool valid() const;
  ChainGraph build() const;

 private:
  NodeSet nodes_;
  std::vector<Link> dir_;  // unsorted
  std::vector<Link> und_;  // canonical u < v, unsorted
};

// Theorem-1 style Markov check: true iff c separates a from b in the moral
// graph of the subgraph induced by the ancestral set of a|b|c.
bool c_separated(const ChainGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& c);

struct Triangulation {
  ChainGraph graph;          // input plus fill-ins
  std::vector<Link> fills;   // exactly the added links, in insertion order
  std::vector<VarId> order;  // elimination order used
};

// Greedy minimum-fill elimination; ties broken by neighbourhood size, then
// lowest node id. Deterministic.
Triangulation triangulate(const ChainGraph& g);

using CliqueSet = std::vector<NodeSet>;

// All maximal cliques of a triangulated graph, in elimination order of
// their anchors. Throws PreconditionError when the input is not chordal.
CliqueSet find_cliques(const ChainGraph& g);

}  // namespace jtr

#endif  // JTR_CHAIN_GRAPH_HPP
