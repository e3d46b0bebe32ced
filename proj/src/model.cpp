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

#include "jtr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jtr {

std::int64_t state_space_size(const VariableSet& vars, const NodeSet& s) {
  std::int64_t n = 1;
  for (VarId v : s) n *= vars.cardinality(v);
  return n;
}

ComponentLayout layout_components(const NetworkModel& m) {
  ComponentLayout out;
  out.components = m.graph.components_topological();
  out.parents.reserve(out.components.size());
  for (const NodeSet& k : out.components) out.parents.push_back(m.graph.relations(k).parents);
  out.tables.assign(out.components.size(), {});
  out.component_of_table.assign(m.potentials.size(), -1);

  for (std::size_t t = 0; t < m.potentials.size(); ++t) {
    NodeSet dom = sorted_unique(m.potentials[t].domain());
    int deepest = -1;
    for (std::size_t ci = 0; ci < out.components.size(); ++ci)
      if (!set_intersect(dom, out.components[ci]).empty()) deepest = static_cast<int>(ci);
    if (deepest < 0) throw ParseError("potential " + std::to_string(t) + " has an empty domain");
    out.tables[static_cast<std::size_t>(deepest)].push_back(static_cast<int>(t));
    out.component_of_table[t] = deepest;
  }
  return out;
}

bool is_dag_model(const NetworkModel& m) { return m.graph.is_dag(); }

namespace {

std::string set_names(const NetworkModel& m, const NodeSet& s) {
  std::string out;
  for (VarId v : s) {
    if (!out.empty()) out += ",";
    out += m.variables[v].name;
  }
  return out;
}

}  // namespace

void validate_model(const NetworkModel& m) {
  if (m.variables.empty()) throw ParseError("model declares no variables");
  // The graph must range over exactly the declared variables.
  if (m.graph.nodes() != m.variables.all_ids())
    throw ParseError("graph nodes do not match the declared variables");

  for (std::size_t t = 0; t < m.potentials.size(); ++t) {
    const Potential& p = m.potentials[t];
    for (std::size_t i = 0; i < p.domain().size(); ++i) {
      const VarId v = p.domain()[i];
      if (v < 0 || static_cast<std::size_t>(v) >= m.variables.size())
        throw ParseError("potential " + std::to_string(t) + " references an unknown variable");
      if (p.cards()[i] != m.variables.cardinality(v))
        throw ParseError("potential over " + set_names(m, sorted_unique(p.domain())) +
                         ": cell count does not match the cardinality of " + m.variables[v].name);
    }
  }

  const ComponentLayout layout = layout_components(m);

  if (is_dag_model(m)) {
    // Exactly one table per variable over {v} u pa(v), normalized over v.
    std::vector<int> seen(m.variables.size(), 0);
    for (std::size_t t = 0; t < m.potentials.size(); ++t) {
      const Potential& p = m.potentials[t];
      const int ci = layout.component_of_table[t];
      const NodeSet& k = layout.components[static_cast<std::size_t>(ci)];
      const VarId v = k.front();  // singleton component
      ++seen[static_cast<std::size_t>(v)];
      const NodeSet expected = sorted_unique(set_union({v}, m.graph.parents_of(v)));
      if (sorted_unique(p.domain()) != expected)
        throw ParseError("table for " + m.variables[v].name + " must cover {" +
                         set_names(m, expected) + "}");
      const Potential row_sums = marginalize(p, set_minus(expected, {v}));
      for (double s : row_sums.values())
        if (std::abs(s - 1.0) > 1e-9)
          throw ParseError("table for " + m.variables[v].name +
                           " is not normalized over the variable (off by " +
                           std::to_string(std::abs(s - 1.0)) + ")");
    }
    for (std::size_t v = 0; v < m.variables.size(); ++v)
      if (seen[v] != 1)
        throw ParseError("DAG model needs exactly one table for variable " +
                         m.variables[static_cast<VarId>(v)].name + ", found " +
                         std::to_string(seen[v]));
  } else {
    // Every table must stay inside its component closure K u pa(K).
    // (Recovered models of non-decomposable graphs carry tables over
    // filled component cliques, so completeness in the bare component
    // moral graph is not required; compilation completes table domains.)
    for (std::size_t ci = 0; ci < layout.components.size(); ++ci) {
      const NodeSet kplus = set_union(layout.components[ci], layout.parents[ci]);
      for (int t : layout.tables[ci]) {
        const NodeSet dom = sorted_unique(m.potentials[static_cast<std::size_t>(t)].domain());
        if (!is_subset(dom, kplus))
          throw ParseError("potential over " + set_names(m, dom) +
                           " is not contained in component closure {" + set_names(m, kplus) + "}");
      }
    }
  }
}

std::int64_t parameter_count(const NetworkModel& m) {
  const ComponentLayout layout = layout_components(m);
  std::int64_t total = 0;
  for (std::size_t t = 0; t < m.potentials.size(); ++t) {
    const NodeSet dom = sorted_unique(m.potentials[t].domain());
    if (dom.size() < 2) continue;
    const NodeSet& k = layout.components[static_cast<std::size_t>(layout.component_of_table[t])];
    const NodeSet cond = set_minus(dom, k);
    total += state_space_size(m.variables, dom) - state_space_size(m.variables, cond);
  }
  return total;
}

Potential component_conditional(const NetworkModel& m, const ComponentLayout& layout, int ci) {
  const NodeSet& k = layout.components[static_cast<std::size_t>(ci)];
  const NodeSet& pa = layout.parents[static_cast<std::size_t>(ci)];
  const NodeSet kplus = set_union(k, pa);

  std::size_t cells = 1;
  for (VarId v : kplus) {
    cells *= static_cast<std::size_t>(m.variables.cardinality(v));
    if (cells > kComponentCellLimit)
      throw ComponentTooLargeError("component {" + set_names(m, k) + "} needs more than 2^24 cells");
  }

  // Domain order (pa..., k...) so each parent configuration is one
  // contiguous slice of |Sp(K)| cells.
  NodeSet ordered = pa;
  ordered.insert(ordered.end(), k.begin(), k.end());
  Potential num = Potential::ones(ordered, m.variables.cards_for(ordered));
  for (int t : layout.tables[static_cast<std::size_t>(ci)])
    num = multiply(num, m.potentials[static_cast<std::size_t>(t)]);
  num = reorder(num, ordered);

  // z = 0 marks impossible parent configurations; divide() maps 0/0 to 0
  // and z = 0 implies the whole slice of num is 0.
  const Potential z = marginalize(num, pa);
  return divide(num, z);
}

}  // namespace jtr
