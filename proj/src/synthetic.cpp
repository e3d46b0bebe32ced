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

#include "jtr/synthetic.hpp"

#include <algorithm>
#include <string>

#include "jtr/rng.hpp"

namespace jtr {

namespace {

double positive_cell(Pcg32& rng) { return 0.05 + 0.95 * rng.next_double(); }

Potential random_conditional(Pcg32& rng, const std::vector<VarId>& domain,
                             const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  std::vector<double> vals(n);
  const std::size_t block = static_cast<std::size_t>(cards.back());
  for (std::size_t base = 0; base < n; base += block) {
    double sum = 0.0;
    for (std::size_t i = 0; i < block; ++i) sum += vals[base + i] = positive_cell(rng);
    for (std::size_t i = 0; i < block; ++i) vals[base + i] /= sum;
  }
  return Potential(domain, cards, std::move(vals));
}

Potential random_table(Pcg32& rng, const std::vector<VarId>& domain, const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  std::vector<double> vals(n);
  for (double& v : vals) v = positive_cell(rng);
  return Potential(domain, cards, std::move(vals));
}

}  // namespace

NetworkModel random_dag_model(std::uint64_t seed, int n_vars, int cardinality, double edge_prob,
                              int max_parents) {
  Pcg32 rng(seed);
  NetworkModel m;
  m.name = "dag-" + std::to_string(seed);
  for (int i = 0; i < n_vars; ++i) m.variables.add("v" + std::to_string(i), cardinality);

  std::vector<Link> directed;
  std::vector<int> parent_count(static_cast<std::size_t>(n_vars), 0);
  for (VarId j = 1; j < n_vars; ++j)
    for (VarId i = 0; i < j; ++i)
      if (parent_count[static_cast<std::size_t>(j)] < max_parents && rng.next_double() < edge_prob) {
        directed.push_back({i, j});
        ++parent_count[static_cast<std::size_t>(j)];
      }
  m.graph = ChainGraph(m.variables.all_ids(), directed, {});

  for (VarId v = 0; v < n_vars; ++v) {
    NodeSet dom = m.graph.parents_of(v);
    dom.push_back(v);  // child last so rows are conditional slices
    m.potentials.push_back(random_conditional(rng, dom, m.variables.cards_for(dom)));
  }
  return m;
}

NetworkModel random_chain_model(std::uint64_t seed, int n_vars, int cardinality, double link_prob,
                                int max_parents) {
  Pcg32 rng(seed);
  NetworkModel m;
  m.name = "chain-" + std::to_string(seed);
  for (int i = 0; i < n_vars; ++i) m.variables.add("v" + std::to_string(i), cardinality);

  // consecutive runs of 1..3 nodes become chain components
  std::vector<std::vector<VarId>> comps;
  for (VarId v = 0; v < n_vars;) {
    // the first component gets at least two nodes so the model stays a
    // proper chain graph rather than degenerating to a DAG
    int len = 1 + static_cast<int>(rng.next() % 3);
    if (v == 0 && n_vars >= 2) len = std::max(len, 2);
    len = std::min(n_vars - v, len);
    std::vector<VarId> k;
    for (int i = 0; i < len; ++i) k.push_back(v++);
    comps.push_back(std::move(k));
  }

  std::vector<Link> directed, undirected;
  for (const auto& k : comps) {
    for (std::size_t i = 1; i < k.size(); ++i) {
      // random tree keeps the component connected; extra links sometimes
      const VarId anchor = k[rng.next() % i];
      undirected.push_back({anchor, k[i]});
    }
    if (k.size() == 3 && rng.next_double() < 0.5) undirected.push_back({k[0], k[2]});
  }
  std::vector<int> parent_count(static_cast<std::size_t>(n_vars), 0);
  for (std::size_t cj = 1; cj < comps.size(); ++cj)
    for (std::size_t ci = 0; ci < cj; ++ci)
      for (VarId u : comps[ci])
        for (VarId w : comps[cj])
          if (parent_count[static_cast<std::size_t>(w)] < max_parents &&
              rng.next_double() < link_prob / static_cast<double>(comps[ci].size()))
            {
              directed.push_back({u, w});
              ++parent_count[static_cast<std::size_t>(w)];
            }
  // dedupe: a pair may have been drawn twice
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  std::sort(undirected.begin(), undirected.end());
  undirected.erase(std::unique(undirected.begin(), undirected.end()), undirected.end());
  std::erase_if(directed, [&undirected](const Link& l) {
    const Link c = l.first < l.second ? l : Link{l.second, l.first};
    return std::binary_search(undirected.begin(), undirected.end(), c);
  });
  m.graph = ChainGraph(m.variables.all_ids(), directed, undirected);

  // pairwise positive tables: per component, every local moral edge with an
  // endpoint inside it, plus singleton tables so no variable is left out
  const ComponentLayout layout = [&] {
    NetworkModel probe = m;
    return layout_components(probe);
  }();
  for (std::size_t ci = 0; ci < layout.components.size(); ++ci) {
    const NodeSet& k = layout.components[ci];
    const NodeSet kplus = set_union(k, layout.parents[ci]);
    const ChainGraph local = m.graph.induced(kplus).moralize();
    for (auto [u, v] : local.undirected()) {
      if (!contains(k, u) && !contains(k, v)) continue;  // pa-pa marriage: not ours
      m.potentials.push_back(random_table(rng, {u, v}, m.variables.cards_for({u, v})));
    }
    for (VarId v : k)
      m.potentials.push_back(random_table(rng, {v}, m.variables.cards_for({v})));
  }
  return m;
}

}  // namespace jtr
