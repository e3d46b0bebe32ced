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

#include "jtr/ind_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace jtr {

namespace {

// Mutable adjacency for the Theorem-2 construction. Single-link additions
// to a valid chain graph go wrong only by closing a semi-directed cycle
// through the new link, so validity probes are two reachability scans
// instead of a full graph construction.
struct MarginalWork {
  NodeSet nodes;
  std::map<VarId, NodeSet> pa, ch, nb;

  static MarginalWork from(const ChainGraph& g) {
    MarginalWork w;
    w.nodes = g.nodes();
    for (VarId v : w.nodes) {
      w.pa[v] = g.parents_of(v);
      w.ch[v] = g.children_of(v);
      w.nb[v] = g.neighbours_of(v);
    }
    return w;
  }

  bool linked(VarId u, VarId v) const {
    return contains(pa.at(v), u) || contains(pa.at(u), v) || contains(nb.at(u), v);
  }
  void add_dir(VarId u, VarId v) {
    ch[u] = set_union(ch[u], {v});
    pa[v] = set_union(pa[v], {u});
  }
  void add_und(VarId u, VarId v) {
    nb[u] = set_union(nb[u], {v});
    nb[v] = set_union(nb[v], {u});
  }
  void remove_node(VarId v) {
    nodes = set_minus(nodes, {v});
    pa.erase(v);
    ch.erase(v);
    nb.erase(v);
    for (VarId u : nodes) {
      pa[u] = set_minus(pa[u], {v});
      ch[u] = set_minus(ch[u], {v});
      nb[u] = set_minus(nb[u], {v});
    }
  }

  // path from -> to along children and neighbours
  bool semi_reaches(VarId from, VarId to) const {
    std::set<VarId> seen{from};
    std::vector<VarId> stack{from};
    while (!stack.empty()) {
      const VarId x = stack.back();
      stack.pop_back();
      if (x == to) return true;
      for (VarId y : ch.at(x))
        if (seen.insert(y).second) stack.push_back(y);
      for (VarId y : nb.at(x))
        if (seen.insert(y).second) stack.push_back(y);
    }
    return false;
  }

  // like semi_reaches but the path must use at least one directed link
  bool arrow_path(VarId from, VarId to) const {
    std::set<std::pair<VarId, bool>> seen{{from, false}};
    std::vector<std::pair<VarId, bool>> stack{{from, false}};
    while (!stack.empty()) {
      const auto [x, arrow] = stack.back();
      stack.pop_back();
      if (x == to && arrow) return true;
      for (VarId y : ch.at(x))
        if (seen.insert({y, true}).second) stack.push_back({y, true});
      for (VarId y : nb.at(x))
        if (seen.insert({y, arrow}).second) stack.push_back({y, arrow});
    }
    return false;
  }

  bool can_add_dir(VarId u, VarId v) const { return !semi_reaches(v, u); }
  bool can_add_und(VarId u, VarId v) const { return !arrow_path(u, v) && !arrow_path(v, u); }

  ChainGraph build() const {
    std::vector<Link> dir, und;
    for (VarId v : nodes) {
      for (VarId c : ch.at(v)) dir.push_back({v, c});
      for (VarId n : nb.at(v))
        if (v < n) und.push_back({v, n});
    }
    return ChainGraph(nodes, dir, und);
  }
};

}  // namespace

ChainGraph marginalize_graph(const ChainGraph& g, VarId alpha) {
  const NodeSet nb = g.neighbours_of(alpha);
  const NodeSet pa = g.parents_of(alpha);
  const NodeSet ch = g.children_of(alpha);
  MarginalWork b = MarginalWork::from(g);

  // complete nb(alpha); an undirected link inside a chain component can
  // never close a directed cycle
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (!b.linked(nb[i], nb[j])) b.add_und(nb[i], nb[j]);

  const NodeSet nbch = set_union(nb, ch);
  for (VarId p : pa)
    for (VarId t : nbch)
      if (p != t && !b.linked(p, t)) b.add_dir(p, t);

  for (VarId n : nb)
    for (VarId c : ch)
      if (n != c && !b.linked(n, c)) b.add_dir(n, c);

  // Complete ch(alpha) without introducing false independences. The
  // children lose a shared parent, so the completion follows the chain
  // rule: order them (existing reachability first, then fewest other
  // relatives, then id), orient completion links along that order, and
  // point each earlier child's parents and neighbours at the later
  // children. Anything weaker lets a later child's displayed parent set
  // miss part of its Markov blanket in the marginal.
  std::vector<VarId> order;
  {
    std::map<VarId, std::size_t> relatives;
    for (VarId c : ch)
      relatives[c] = set_minus(set_union(g.parents_of(c), g.neighbours_of(c)), {alpha}).size();
    // one reachability scan per child, reused across the whole ordering
    std::map<VarId, NodeSet> reaches_children;
    for (VarId c : ch) {
      std::set<VarId> seen{c};
      std::vector<VarId> stack{c};
      while (!stack.empty()) {
        const VarId x = stack.back();
        stack.pop_back();
        for (VarId y : set_union(g.children_of(x), g.neighbours_of(x)))
          if (seen.insert(y).second) stack.push_back(y);
      }
      NodeSet hits;
      for (VarId d : ch)
        if (d != c && seen.count(d)) hits.push_back(d);
      reaches_children[c] = sorted_unique(std::move(hits));
    }
    NodeSet todo = ch;
    while (!todo.empty()) {
      VarId pick = -1;
      for (VarId c : todo) {
        bool reached = false;  // some other pending child reaches c already
        for (VarId d : todo)
          if (d != c && contains(reaches_children[d], c)) {
            reached = true;
            break;
          }
        if (reached) continue;
        if (pick < 0 || relatives[c] < relatives[pick] ||
            (relatives[c] == relatives[pick] && c < pick))
          pick = c;
      }
      if (pick < 0) pick = todo.front();
      order.push_back(pick);
      todo = set_minus(todo, {pick});
    }
  }
  for (std::size_t j = 1; j < order.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const VarId early = order[i], late = order[j];
      if (!b.linked(early, late)) {
        // completion links added earlier can flip reachability between the
        // two, so fall through the three orientations; one is always valid
        if (b.can_add_dir(early, late))
          b.add_dir(early, late);
        else if (b.can_add_und(early, late))
          b.add_und(early, late);
        else
          b.add_dir(late, early);
      }
      for (VarId beta : set_minus(set_union(g.parents_of(early), g.neighbours_of(early)), {alpha}))
        if (beta != late && !b.linked(beta, late)) {
          if (b.can_add_dir(beta, late))
            b.add_dir(beta, late);
          else if (b.can_add_und(beta, late))
            b.add_und(beta, late);
        }
    }

  b.remove_node(alpha);
  return b.build();
}

ChainGraph marginalize_graph_set(const ChainGraph& g, const NodeSet& remove) {
  ChainGraph h = g;
  for (VarId v : sorted_unique(remove)) h = marginalize_graph(h, v);
  return h;
}

namespace {

// Theorem 3 without the Corollary-1 normal form: E u E^m_{An(S)}.
ChainGraphBuilder condition_raw(const ChainGraph& g, const NodeSet& s) {
  const NodeSet an = g.ancestral_set(sorted_unique(s));
  const ChainGraph moral = g.induced(an).moralize();
  ChainGraphBuilder b(g);
  for (auto [u, v] : moral.undirected()) b.make_undirected(u, v);
  return b;
}

void corollary1_normal_form(ChainGraphBuilder& b, const NodeSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) b.remove_link(s[i], s[j]);
  NodeSet nbs;
  for (VarId v : s)
    for (VarId n : b.nodes())
      if (!contains(s, n) && b.has_undirected(v, n)) nbs.push_back(n);
  nbs = sorted_unique(std::move(nbs));
  for (VarId v : s)
    for (VarId n : nbs)
      if (b.linked(v, n)) b.make_undirected(v, n);
}

}  // namespace

ChainGraph condition_graph(const ChainGraph& g, const NodeSet& s) {
  const NodeSet ss = sorted_unique(s);
  if (ss.empty()) return g;
  ChainGraphBuilder b = condition_raw(g, ss);
  corollary1_normal_form(b, ss);
  return b.build();
}

ChainGraph conditional_marginal_graph(const ChainGraph& g, const NodeSet& b_side, const NodeSet& s) {
  const NodeSet bs = sorted_unique(b_side);
  const NodeSet ss = sorted_unique(s);
  ChainGraph h = condition_raw(g, ss).build();
  h = marginalize_graph_set(h, set_minus(h.nodes(), bs));
  ChainGraphBuilder b(h);
  corollary1_normal_form(b, ss);
  return b.build();
}

ChainGraph combine_graphs(const ChainGraph& ga, const ChainGraph& gb, const NodeSet& s) {
  ChainGraphBuilder b;
  for (VarId v : set_union(ga.nodes(), gb.nodes())) b.add_node(v);
  for (auto [u, v] : ga.directed()) b.add_directed(u, v);
  for (auto [u, v] : ga.undirected()) b.add_undirected(u, v);
  for (auto [u, v] : gb.directed()) b.add_directed(u, v);
  for (auto [u, v] : gb.undirected()) b.add_undirected(u, v);

  const NodeSet ss = sorted_unique(s);
  const NodeSet b_only = set_minus(gb.nodes(), ss);
  while (!b.valid()) {
    // nb(S) in the current union
    bool replaced = false;
    for (VarId gamma : ss) {
      for (VarId delta : b_only) {
        if (b.has_undirected(gamma, delta)) {
          b.orient(gamma, delta);
          replaced = true;
          break;
        }
      }
      if (replaced) break;
    }
    if (!replaced)
      throw CombinationError("graph union is not a chain graph and no s - nb(s) link is left");
  }
  return b.build();
}

ChainGraph update_after_removal(const ChainGraph& g, VarId alpha, VarId beta, const Partition& p) {
  (void)alpha;
  (void)beta;
  const ChainGraph gm = marginalize_graph_set(g, set_minus(p.b, p.s));
  const ChainGraph gc = conditional_marginal_graph(g, p.b, p.s);
  return combine_graphs(gm, gc, p.s);
}

namespace {

std::string ids(const NodeSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

namespace {

struct ComponentNumbering {
  NodeSet component;
  std::vector<std::pair<VarId, NodeSet>> elim;  // (v, pa*(v)) in elimination order
  bool filled = false;                          // the component moral graph needed fill-ins
};

// Perfect numbering of (G_{K+})^m with pa(K) first, expressed as a
// simplicial elimination of the K nodes; adds fill-ins when the component
// moral graph is not triangulated.
ComponentNumbering number_component(const ChainGraph& g, const NodeSet& k) {
  ComponentNumbering out;
  out.component = k;
  const NodeSet pa = g.relations(k).parents;
  const NodeSet kplus = set_union(k, pa);
  ChainGraph h = g.induced(kplus).moralize();
  if (!h.is_triangulated()) {
    h = triangulate(h).graph;
    out.filled = true;
  }

  std::map<VarId, NodeSet> adj;
  for (VarId v : kplus) adj[v] = h.neighbours_of(v);
  NodeSet remaining_k = k;
  while (!remaining_k.empty()) {
    VarId pick = -1;
    for (VarId v : remaining_k) {
      const NodeSet& nb = adj[v];
      bool simplicial = true;
      for (std::size_t i = 0; i < nb.size() && simplicial; ++i)
        for (std::size_t j = i + 1; j < nb.size() && simplicial; ++j)
          if (!contains(adj[nb[i]], nb[j])) simplicial = false;
      if (simplicial) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      // fill the cheapest K-node neighbourhood and carry on
      pick = remaining_k.front();
      const NodeSet nb = adj[pick];
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!contains(adj[nb[i]], nb[j])) {
            adj[nb[i]] = set_union(adj[nb[i]], {nb[j]});
            adj[nb[j]] = set_union(adj[nb[j]], {nb[i]});
          }
      out.filled = true;
    }
    out.elim.push_back(std::pair<VarId, NodeSet>{pick, adj[pick]});
    for (VarId n : adj[pick]) adj[n] = set_minus(adj[n], {pick});
    adj.erase(pick);
    remaining_k = set_minus(remaining_k, {pick});
  }
  return out;
}

}  // namespace

std::int64_t structural_parameter_count(const ChainGraph& g, const VariableSet& vars) {
  std::int64_t total = 0;
  for (const NodeSet& k : g.components_topological()) {
    const ComponentNumbering num = number_component(g, k);
    for (const auto& [v, pstar] : num.elim) {
      if (pstar.empty()) continue;  // one-dimensional prior
      NodeSet dom = sorted_unique(set_union(pstar, {v}));
      const NodeSet cond = set_minus(dom, k);
      total += state_space_size(vars, dom) - state_space_size(vars, cond);
    }
  }
  return total;
}

RecursiveModel derive_recursive_model(const ChainGraph& g, const VariableSet& vars,
                                      const MarginalFn& psi, double tolerance) {
  RecursiveModel out;
  out.model.variables = vars;

  ChainGraphBuilder dag;
  for (VarId v : g.nodes()) dag.add_node(v);

  for (const NodeSet& k : g.components_topological()) {
    const ComponentNumbering num = number_component(g, k);
    if (num.filled) out.suboptimal = true;

    // Eliminated first = numbered last; its parents are all remaining
    // neighbours at elimination time.
    for (const auto& [v, pstar] : num.elim) {
      for (VarId u : pstar) dag.add_directed(u, v);
      NodeSet dom = pstar;
      dom.push_back(v);  // v last: table rows are the conditional slices
      const Potential joint = psi(sorted_unique(dom));
      Potential cond;
      if (pstar.empty()) {
        cond = normalize(joint);
        cond = reorder(cond, dom);
      } else {
        const Potential parent = psi(pstar);
        cond = reorder(divide(reorder(joint, dom), parent), dom);
        // a zero-probability parent configuration leaves a 0/0 = 0 slice;
        // fill it uniformly so the table stays a conditional
        const int cv = vars.cardinality(v);
        for (std::size_t base = 0; base < cond.size(); base += static_cast<std::size_t>(cv)) {
          double mass = 0;
          for (int i = 0; i < cv; ++i) mass += cond[base + static_cast<std::size_t>(i)];
          if (mass == 0.0)
            for (int i = 0; i < cv; ++i) cond[base + static_cast<std::size_t>(i)] = 1.0 / cv;
        }
      }
      out.model.potentials.push_back(std::move(cond));
    }
  }

  out.model.graph = dag.build();
  if (!out.model.graph.is_dag())
    throw FactorizationError("recursive-model construction produced undirected links");

  // Desk-scale verification: reassemble the joint and compare against psi.
  std::size_t cells = 1;
  bool small = true;
  for (const Variable& v : vars) {
    cells *= static_cast<std::size_t>(v.cardinality);
    if (cells > (std::size_t(1) << 20)) {
      small = false;
      break;
    }
  }
  if (small && std::isfinite(tolerance)) {
    Potential joint = Potential::scalar(1.0);
    for (const Potential& p : out.model.potentials) joint = multiply(joint, p);
    const Potential reference = psi(g.nodes());
    const Potential mine = reorder(marginalize(joint, g.nodes()), reference.domain());
    for (std::size_t i = 0; i < mine.size(); ++i)
      if (std::abs(mine[i] - reference[i]) > tolerance)
        throw FactorizationError("joint of the recovered model deviates from psi at cell " +
                                 std::to_string(i) + " of " + ids(g.nodes()));
  }
  return out;
}

}  // namespace jtr
