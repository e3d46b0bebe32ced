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

#include "jtr/sampling.hpp"

#include <algorithm>
#include <ostream>

#include "jtr/rng.hpp"

namespace jtr {

namespace {

constexpr std::size_t kShards = 64;

// Everything needed to draw one chain component given its parents.
struct ComponentSampler {
  NodeSet k, pa;
  Potential cond;                 // p(K | pa(K)), domain (pa..., k...)
  std::size_t k_cells = 1;
  std::vector<std::size_t> pa_strides_in_cond;  // per pa var
  std::vector<int> k_cards;
};

std::vector<ComponentSampler> prepare(const NetworkModel& model) {
  const ComponentLayout layout = layout_components(model);
  std::vector<ComponentSampler> out;
  out.reserve(layout.components.size());
  for (std::size_t ci = 0; ci < layout.components.size(); ++ci) {
    ComponentSampler cs;
    cs.k = layout.components[ci];
    cs.pa = layout.parents[ci];
    cs.cond = component_conditional(model, layout, static_cast<int>(ci));
    cs.k_cards = model.variables.cards_for(cs.k);
    for (int c : cs.k_cards) cs.k_cells *= static_cast<std::size_t>(c);
    const auto strides = cs.cond.strides();
    for (VarId v : cs.pa)
      cs.pa_strides_in_cond.push_back(
          static_cast<std::size_t>(strides[static_cast<std::size_t>(cs.cond.slot_of(v))]));
    out.push_back(std::move(cs));
  }
  return out;
}

void draw_record(const std::vector<ComponentSampler>& samplers, Pcg32& rng, std::uint8_t* rec) {
  for (const ComponentSampler& cs : samplers) {
    std::size_t base = 0;
    for (std::size_t i = 0; i < cs.pa.size(); ++i)
      base += static_cast<std::size_t>(rec[cs.pa[i]]) * cs.pa_strides_in_cond[i];
    // Inverse-CDF walk over the slice; a zero-mass slice (impossible parent
    // configuration) cannot be reached through forward sampling.
    const double u = rng.next_double();
    double acc = 0.0;
    std::size_t pick = cs.k_cells - 1;
    for (std::size_t idx = 0; idx < cs.k_cells; ++idx) {
      acc += cs.cond[base + idx];
      if (u < acc) {
        pick = idx;
        break;
      }
    }
    for (std::size_t i = cs.k.size(); i-- > 0;) {
      rec[cs.k[i]] = static_cast<std::uint8_t>(pick % static_cast<std::size_t>(cs.k_cards[i]));
      pick /= static_cast<std::size_t>(cs.k_cards[i]);
    }
  }
}

}  // namespace

SampleSet forward_sample(const NetworkModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample count must be >= 1");
  for (const Variable& v : model.variables)
    if (v.cardinality > 255) throw DomainError("sampling supports cardinalities up to 255");

  const std::vector<ComponentSampler> samplers = prepare(model);
  SampleSet out;
  out.seed = seed;
  out.n_vars = static_cast<int>(model.variables.size());
  out.records.assign(n * model.variables.size(), 0);

  const std::size_t shards = std::min(kShards, n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t sh = 0; sh < static_cast<std::int64_t>(shards); ++sh) {
    const std::size_t lo = n * static_cast<std::size_t>(sh) / shards;
    const std::size_t hi = n * (static_cast<std::size_t>(sh) + 1) / shards;
    Pcg32 rng(mix_seed(seed, static_cast<std::uint64_t>(sh)));
    for (std::size_t r = lo; r < hi; ++r)
      draw_record(samplers, rng, out.records.data() + r * model.variables.size());
  }
  return out;
}

void estimate_clique_potentials(const SampleSet& samples, JunctionTree& tree) {
  if (samples.count() < 1) throw DomainError("empty sample set");
  const std::size_t n = samples.count();
  const std::size_t n_cliques = tree.clique_count();

  // Count tables hold exact integers, so marginalizing them and dividing
  // once gives a separator that is bit-identical whichever endpoint
  // supplies it.
  std::vector<Potential> counts;
  counts.reserve(n_cliques);
  for (std::size_t ci = 0; ci < n_cliques; ++ci) {
    const JtClique& c = tree.cliques()[ci];
    std::vector<double> tally(c.belief.size(), 0.0);
    const auto cards = c.belief.cards();
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint8_t* rec = samples.record(r);
      std::size_t idx = 0;
      for (std::size_t i = 0; i < c.vars.size(); ++i)
        idx = idx * static_cast<std::size_t>(cards[i]) + rec[c.vars[i]];
      tally[idx] += 1.0;
    }
    counts.push_back(Potential(c.vars, cards, std::move(tally)));
  }

  std::vector<JtClique> cliques = tree.cliques();
  std::vector<JtSeparator> seps = tree.separators();
  for (JtSeparator& s : seps) {
    Potential count_marg = marginalize(counts[static_cast<std::size_t>(std::min(s.a, s.b))], s.vars);
    for (double& v : count_marg.values()) v /= static_cast<double>(n);
    s.belief = std::move(count_marg);
  }
  for (std::size_t ci = 0; ci < n_cliques; ++ci) {
    for (double& v : counts[ci].values()) v /= static_cast<double>(n);
    cliques[ci].belief = std::move(counts[ci]);
  }
  tree.replace_structure(std::move(cliques), std::move(seps), /*still_consistent=*/true);
}

void write_samples(std::ostream& os, const SampleSet& s, const VariableSet& vars) {
  os << "# generator " << s.generator << " seed " << s.seed << " n " << s.count() << "\n";
  for (std::size_t i = 0; i < vars.size(); ++i)
    os << vars[static_cast<VarId>(i)].name << (i + 1 < vars.size() ? '\t' : '\n');
  for (std::size_t r = 0; r < s.count(); ++r) {
    const std::uint8_t* rec = s.record(r);
    for (int i = 0; i < s.n_vars; ++i)
      os << static_cast<int>(rec[i]) << (i + 1 < s.n_vars ? '\t' : '\n');
  }
}

}  // namespace jtr
