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

#ifndef JTR_JUNCTION_TREE_HPP
#define JTR_JUNCTION_TREE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "jtr/chain_graph.hpp"
#include "jtr/potential.hpp"
#include "jtr/variable.hpp"

namespace jtr {

struct JtClique {
  NodeSet vars;      // sorted
  Potential belief;  // domain == vars
};

struct JtSeparator {
  NodeSet vars;  // == intersection of the endpoint cliques; may be empty
  Potential belief;
  int a = -1, b = -1;  // clique indices
};

// Tree of cliques satisfying the running-intersection property. A
// disconnected cover is bridged with explicit empty separators (scalar
// potentials of mass 1), so the structure is always one tree.
//
// Mutations (initialization, evidence, propagation, surgery) are
// single-writer: callers serialize them. A consistent tree is treated as
// immutable and is safe to query from many threads.
class JunctionTree {
 public:
  JunctionTree() = default;

  // Maximal spanning tree of the clique graph weighted by |C n D|; ties by
  // larger separator state space, then lexicographic clique index pair.
  // Throws StructureError when the cover admits no junction tree.
  static JunctionTree build(const CliqueSet& cliques, const VariableSet& vars);

  const std::vector<JtClique>& cliques() const { return cliques_; }
  const std::vector<JtSeparator>& separators() const { return seps_; }
  std::size_t clique_count() const { return cliques_.size(); }

  // (separator index, other endpoint) pairs for clique ci.
  std::vector<std::pair<int, int>> neighbours(int ci) const;

  // Lowest-index clique containing all of `vars`, or -1.
  int find_clique_containing(const NodeSet& vars) const;

  Potential& belief(int ci);
  const Potential& belief(int ci) const { return cliques_[static_cast<std::size_t>(ci)].belief; }

  // All beliefs back to unity; marks the tree inconsistent.
  void reset_beliefs();

  // Multiply p into the lowest-index clique covering its domain.
  // Throws CoverError when none does.
  void multiply_in(const Potential& p);

  // Likelihood-vector evidence for one variable.
  void set_evidence(VarId v, const std::vector<double>& likelihood);

  // Collect/distribute message passing from the lowest-index root, then
  // normalize every belief to mass 1. Throws InconsistencyError on an
  // all-zero clique.
  void propagate();

  bool consistent() const { return consistent_; }

  // Normalized marginal over vars contained in a single clique.
  // Throws UnsupportedQueryError for cross-clique sets.
  Potential query(const NodeSet& vars) const;

  // (sum of clique state spaces, sum of separator state spaces);
  // an empty separator counts 1.
  std::pair<std::int64_t, std::int64_t> total_size() const;

  // Normalized marginal over an arbitrary variable set, by variable
  // elimination over the calibrated factors. Internal plumbing for
  // component-potential recovery; queries proper stay single-clique.
  Potential marginal_by_elimination(const NodeSet& vars) const;

  // Wholesale structural replacement used by tree surgery; revalidates
  // tree-ness and the running-intersection property.
  void replace_structure(std::vector<JtClique> cliques, std::vector<JtSeparator> seps,
                         bool still_consistent);

  // Bumped by every mutation; lets candidate scores detect staleness.
  std::uint64_t revision() const { return revision_; }

  NodeSet all_vars() const;

 private:
  void validate_structure() const;
  void pass_message(int from, int sep_idx);

  std::vector<JtClique> cliques_;
  std::vector<JtSeparator> seps_;
  std::vector<std::vector<int>> adj_;  // clique -> separator indices
  bool consistent_ = false;
  std::uint64_t revision_ = 0;
};

}  // namespace jtr

#endif  // JTR_JUNCTION_TREE_HPP
