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

#include "jtr/compile.hpp"

namespace jtr {

void initialize(JunctionTree& tree, const NetworkModel& model) {
  tree.reset_beliefs();
  for (const Potential& p : model.potentials) tree.multiply_in(p);

  // Eq (3): p(K | pa(K)) carries a per-parent-configuration normalizer.
  // Its reciprocal is a table over a subset of pa(K), which moralization
  // made complete, so it always fits a clique.
  const ComponentLayout layout = layout_components(model);
  for (std::size_t ci = 0; ci < layout.components.size(); ++ci) {
    if (layout.parents[ci].empty()) continue;  // constant, absorbed by normalization
    if (layout.tables[ci].empty()) continue;
    NodeSet table_union;
    for (int t : layout.tables[ci])
      table_union = set_union(table_union, sorted_unique(model.potentials[static_cast<std::size_t>(t)].domain()));
    const NodeSet z_dom = set_minus(table_union, layout.components[ci]);
    if (z_dom.empty()) continue;

    std::size_t cells = 1;
    for (VarId v : table_union) {
      cells *= static_cast<std::size_t>(model.variables.cardinality(v));
      if (cells > kComponentCellLimit)
        throw ComponentTooLargeError("component normalizer needs more than 2^24 cells");
    }
    Potential num = Potential::ones(table_union, model.variables.cards_for(table_union));
    for (int t : layout.tables[ci]) num = multiply(num, model.potentials[static_cast<std::size_t>(t)]);
    const Potential z = marginalize(reorder(num, table_union), z_dom);
    tree.multiply_in(invert_nonzero(z));
  }
}

CompileResult compile_structure(const NetworkModel& model) {
  const ChainGraph moral = model.graph.moralize();
  // Each table domain must end up inside one clique, so its pairs join the
  // graph to triangulate. For well-formed models this adds nothing (domains
  // are complete in the moral graph already); recovered models of filled
  // components rely on it.
  ChainGraphBuilder clustered(moral);
  for (const Potential& p : model.potentials)
    for (std::size_t i = 0; i < p.domain().size(); ++i)
      for (std::size_t j = i + 1; j < p.domain().size(); ++j)
        clustered.add_undirected(p.domain()[i], p.domain()[j]);
  Triangulation tri = triangulate(clustered.build());
  const CliqueSet cliques = find_cliques(tri.graph);
  JunctionTree tree = JunctionTree::build(cliques, model.variables);
  return CompileResult{moral, std::move(tri.graph), std::move(tri.fills), std::move(tree)};
}

CompileResult compile_model(const NetworkModel& model) {
  CompileResult r = compile_structure(model);
  initialize(r.tree, model);
  r.tree.propagate();
  return r;
}

}  // namespace jtr
