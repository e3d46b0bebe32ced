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

#ifndef JTR_REDUCE_HPP
#define JTR_REDUCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jtr/chain_graph.hpp"
#include "jtr/junction_tree.hpp"
#include "jtr/variable.hpp"

namespace jtr {

// Which of the Fig-6 shapes a removal produces.
enum class SurgeryCase { two_new, one_new, zero_new };

const char* surgery_case_name(SurgeryCase c);

// One enforceable independence statement alpha II beta | C \ {alpha, beta}.
struct RemovalCandidate {
  VarId alpha = -1, beta = -1;  // alpha < beta
  int clique = -1;              // unique clique containing both
  NodeSet clique_vars;
  double divergence = -1.0;     // I(alpha, beta | C \ {alpha, beta})
  std::int64_t saving = 0;      // Eq-7 sigma
  SurgeryCase kase = SurgeryCase::two_new;
  bool alpha_stays_clique = false;  // I_alpha
  bool beta_stays_clique = false;   // I_beta
  std::uint64_t revision = 0;       // tree revision when scored
};

// Every moral link lying in exactly one clique of the tree. Unscored:
// divergence/saving/case are filled by score_candidate.
std::vector<RemovalCandidate> removable_links(const JunctionTree& t, const ChainGraph& moral);

// psi_C = (sum_alpha phi)(sum_beta phi) / (sum_{alpha,beta} phi), the
// closest table to phi_C satisfying the independence; 0/0 cells are 0.
Potential approx_clique_potential(const Potential& phi, VarId alpha, VarId beta);

// Conditional mutual information I(alpha, beta | C \ {alpha, beta}) =
// KL(phi_C, psi_C). phi_C must be normalized.
double score(const Potential& phi, VarId alpha, VarId beta);

// Eq-7 sigma: the exact total-size drop the surgery will produce.
std::int64_t saving(const JunctionTree& t, const RemovalCandidate& cand);

// Fill divergence, case flags and saving. Scoring many candidates is pure
// and runs in parallel inside greedy_reduce.
void score_candidate(const JunctionTree& t, RemovalCandidate& cand);

struct Surgery {
  SurgeryCase kase;
  NodeSet side_alpha;  // variables of the subtree containing alpha (incl. S)
  NodeSet side_beta;
  NodeSet sep;         // S = C \ {alpha, beta}
};

// Splits the unique clique holding (alpha, beta) per Fig 6. New clique
// beliefs are marginals of phi_C; everything else is untouched, so a
// consistent tree stays consistent. Throws StalenessError when the tree
// changed since the candidate was scored.
Surgery remove_link(JunctionTree& t, const RemovalCandidate& cand);

// sqrt(total_divergence / 2), the Ineq-8 bound on any marginal's absolute error.
double error_bound(double total_divergence);

struct RemovalRecord {
  VarId alpha, beta;
  NodeSet clique;
  double divergence;
  std::int64_t saving;
  SurgeryCase kase;
  std::string mode;  // "exact" or "sampled"
};

struct ReductionReport {
  std::vector<RemovalRecord> removals;
  double total_divergence = 0.0;
  std::int64_t size_before = 0;  // cliques + separators mass at entry
  std::int64_t size_after = 0;   // same measure on the final tree
  double bound = 0.0;            // error_bound(total_divergence)
  std::string mode = "exact";
};

struct ReduceResult {
  ChainGraph graph;  // updated independence graph
  ReductionReport report;
};

// Greedy loop: score all candidates, take the lowest divergence (ties:
// larger saving, then lexicographic link), stop before the running total
// would exceed the budget. The independence graph is rebuilt per removal
// via update_after_removal; only cliques whose potentials changed are
// rescored. The variable set supplies names for the marginal-side
// tie-break and the report.
ReduceResult greedy_reduce(JunctionTree& t, const ChainGraph& g, const VariableSet& vars,
                           double budget, const std::string& mode = "exact");

// Zero-run-length compressed table with a dense fallback, sized in value
// slots so the compressed size never exceeds the dense size.
struct CompressedTable {
  bool rle = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;  // (zeros skipped, values following)
  std::vector<double> values;
  std::size_t dense_size = 0;
  std::size_t stored_size() const { return rle ? values.size() + runs.size() : dense_size; }
  std::vector<double> expand() const;
};

CompressedTable compress_zeros(const std::vector<double>& dense);

struct CliqueAnnihilation {
  int clique;
  double removed_mass;   // strictly below the threshold
  std::size_t zeroed_cells;
  std::size_t dense_size;
  std::size_t compressed_size;
};

struct AnnihilationResult {
  std::vector<CliqueAnnihilation> per_clique;
  std::vector<CompressedTable> tables;
  double total_removed_mass = 0.0;
};

// Jensen & Andersen style baseline: per clique, zero the largest set of
// smallest cells whose mass stays strictly below the threshold, then
// compress. The tree keeps the zeroed dense beliefs.
AnnihilationResult annihilate(JunctionTree& t, double threshold);

}  // namespace jtr

#endif  // JTR_REDUCE_HPP
