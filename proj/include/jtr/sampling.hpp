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

#ifndef JTR_SAMPLING_HPP
#define JTR_SAMPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jtr/junction_tree.hpp"
#include "jtr/model.hpp"

namespace jtr {

// N complete assignments drawn from the prior. Records are stored
// row-major, one state index per variable in id order.
struct SampleSet {
  std::uint64_t seed = 0;
  std::string generator = "pcg32";
  int n_vars = 0;
  std::vector<std::uint8_t> records;  // n * n_vars entries; cardinalities <= 255

  std::size_t count() const { return n_vars == 0 ? 0 : records.size() / static_cast<std::size_t>(n_vars); }
  const std::uint8_t* record(std::size_t i) const {
    return records.data() + i * static_cast<std::size_t>(n_vars);
  }
};

// Forward sampling: chain components in topological order, each drawn from
// the materialized p(K | pa(K)). Deterministic given the seed and sharded
// so the result does not depend on the number of threads.
SampleSet forward_sample(const NetworkModel& model, std::size_t n, std::uint64_t seed);

// Replace every clique belief with the normalized empirical frequency of
// its configurations; separators take the marginal of their lower-index
// endpoint. The tree is marked consistent (the empirical marginals of
// adjacent cliques agree exactly).
void estimate_clique_potentials(const SampleSet& samples, JunctionTree& tree);

// Columnar audit format: '#' metadata, a header of variable names, then one
// record per line of state indices.
void write_samples(std::ostream& os, const SampleSet& s, const VariableSet& vars);

}  // namespace jtr

#endif  // JTR_SAMPLING_HPP
