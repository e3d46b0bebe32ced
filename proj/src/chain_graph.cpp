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

#include "jtr/chain_graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>

namespace jtr {

NodeSet sorted_unique(NodeSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_intersect(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool contains(const NodeSet& a, VarId v) {
  return std::binary_search(a.begin(), a.end(), v);
}

namespace {

Link canon(VarId u, VarId v) { return u < v ? Link{u, v} : Link{v, u}; }

// Union-find over node positions.
struct Dsu {
  std::vector<int> p;
  explicit Dsu(std::size_t n) : p(n) {
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void join(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

ChainGraph::ChainGraph(NodeSet nodes, std::vector<Link> directed, std::vector<Link> undirected)
    : nodes_(sorted_unique(std::move(nodes))) {
  std::set<Link> dset, uset;
  for (auto [u, v] : directed) {
    if (u == v) throw StructureError("self loop at node " + std::to_string(u));
    if (!contains(nodes_, u) || !contains(nodes_, v))
      throw StructureError("directed link references unknown node");
    dset.insert({u, v});
  }
  for (auto [u, v] : undirected) {
    if (u == v) throw StructureError("self loop at node " + std::to_string(u));
    if (!contains(nodes_, u) || !contains(nodes_, v))
      throw StructureError("undirected link references unknown node");
    uset.insert(canon(u, v));
  }
  for (auto [u, v] : dset) {
    if (uset.count(canon(u, v)))
      throw StructureError("link " + std::to_string(u) + "~" + std::to_string(v) +
                           " is both directed and undirected");
    if (dset.count({v, u}))
      throw StructureError("links " + std::to_string(u) + "->" + std::to_string(v) +
                           " and the reverse are both present");
  }
  directed_.assign(dset.begin(), dset.end());
  undirected_.assign(uset.begin(), uset.end());
  index();

  // Chain-graph condition: every directed link joins distinct chain
  // components and the component digraph is acyclic.
  Dsu dsu(nodes_.size());
  for (auto [u, v] : undirected_) dsu.join(pos(u), pos(v));
  const int n = static_cast<int>(nodes_.size());
  std::vector<std::vector<int>> comp_adj(nodes_.size());
  std::vector<int> indeg(nodes_.size(), 0);
  for (auto [u, v] : directed_) {
    const int cu = dsu.find(pos(u)), cv = dsu.find(pos(v));
    if (cu == cv)
      throw StructureError("directed cycle: link " + std::to_string(u) + "->" + std::to_string(v) +
                           " joins one chain component");
    comp_adj[static_cast<std::size_t>(cu)].push_back(cv);
    ++indeg[static_cast<std::size_t>(cv)];
  }
  std::queue<int> q;
  int seen = 0;
  std::vector<bool> is_root(nodes_.size(), false);
  for (int i = 0; i < n; ++i)
    if (dsu.find(i) == i) {
      is_root[static_cast<std::size_t>(i)] = true;
      if (indeg[static_cast<std::size_t>(i)] == 0) q.push(i);
    }
  int roots = 0;
  for (int i = 0; i < n; ++i) roots += is_root[static_cast<std::size_t>(i)] ? 1 : 0;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    ++seen;
    for (int d : comp_adj[static_cast<std::size_t>(c)])
      if (--indeg[static_cast<std::size_t>(d)] == 0) q.push(d);
  }
  if (seen != roots) throw StructureError("directed cycle among chain components");
}

void ChainGraph::index() {
  pa_.assign(nodes_.size(), {});
  ch_.assign(nodes_.size(), {});
  nb_.assign(nodes_.size(), {});
  for (auto [u, v] : directed_) {
    ch_[static_cast<std::size_t>(pos(u))].push_back(v);
    pa_[static_cast<std::size_t>(pos(v))].push_back(u);
  }
  for (auto [u, v] : undirected_) {
    nb_[static_cast<std::size_t>(pos(u))].push_back(v);
    nb_[static_cast<std::size_t>(pos(v))].push_back(u);
  }
  for (auto& s : pa_) s = sorted_unique(std::move(s));
  for (auto& s : ch_) s = sorted_unique(std::move(s));
  for (auto& s : nb_) s = sorted_unique(std::move(s));
}

int ChainGraph::pos(VarId v) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
  if (it == nodes_.end() || *it != v) throw DomainError("unknown node " + std::to_string(v));
  return static_cast<int>(it - nodes_.begin());
}

bool ChainGraph::has_node(VarId v) const { return contains(nodes_, v); }

bool ChainGraph::has_directed(VarId u, VarId v) const {
  return std::binary_search(directed_.begin(), directed_.end(), Link{u, v});
}

bool ChainGraph::has_undirected(VarId u, VarId v) const {
  return std::binary_search(undirected_.begin(), undirected_.end(), canon(u, v));
}

bool ChainGraph::adjacent(VarId u, VarId v) const {
  return has_directed(u, v) || has_directed(v, u) || has_undirected(u, v);
}

NodeSet ChainGraph::parents_of(VarId v) const { return pa_[static_cast<std::size_t>(pos(v))]; }
NodeSet ChainGraph::children_of(VarId v) const { return ch_[static_cast<std::size_t>(pos(v))]; }
NodeSet ChainGraph::neighbours_of(VarId v) const { return nb_[static_cast<std::size_t>(pos(v))]; }

bool ChainGraph::is_dag() const { return undirected_.empty(); }

bool ChainGraph::is_connected() const {
  if (nodes_.empty()) return true;
  std::set<VarId> seen{nodes_[0]};
  std::vector<VarId> stack{nodes_[0]};
  while (!stack.empty()) {
    const VarId x = stack.back();
    stack.pop_back();
    NodeSet adj = set_union(set_union(parents_of(x), children_of(x)), neighbours_of(x));
    for (VarId y : adj)
      if (seen.insert(y).second) stack.push_back(y);
  }
  return seen.size() == nodes_.size();
}

bool ChainGraph::reaches(VarId u, VarId v) const {
  std::set<VarId> seen{u};
  std::vector<VarId> stack{u};
  while (!stack.empty()) {
    const VarId x = stack.back();
    stack.pop_back();
    if (x == v) return true;
    for (VarId y : set_union(children_of(x), neighbours_of(x)))
      if (seen.insert(y).second) stack.push_back(y);
  }
  return false;
}

std::vector<NodeSet> ChainGraph::chain_components() const {
  Dsu dsu(nodes_.size());
  for (auto [u, v] : undirected_) dsu.join(pos(u), pos(v));
  std::map<int, NodeSet> groups;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    groups[dsu.find(static_cast<int>(i))].push_back(nodes_[i]);
  std::vector<NodeSet> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(sorted_unique(std::move(members)));
  std::sort(out.begin(), out.end(),
            [](const NodeSet& a, const NodeSet& b) { return a.front() < b.front(); });
  return out;
}

ChainGraph::Relations ChainGraph::relations(const NodeSet& a) const {
  Relations r;
  for (VarId v : a) {
    r.parents = set_union(r.parents, parents_of(v));
    r.children = set_union(r.children, children_of(v));
    r.neighbours = set_union(r.neighbours, neighbours_of(v));
  }
  const NodeSet as = sorted_unique(a);
  r.parents = set_minus(r.parents, as);
  r.children = set_minus(r.children, as);
  r.neighbours = set_minus(r.neighbours, as);
  return r;
}

NodeSet ChainGraph::ancestral_set(const NodeSet& a) const {
  NodeSet an = sorted_unique(a);
  for (VarId v : an) pos(v);  // validate membership
  std::vector<VarId> stack(an.begin(), an.end());
  std::set<VarId> seen(an.begin(), an.end());
  while (!stack.empty()) {
    const VarId x = stack.back();
    stack.pop_back();
    for (VarId y : set_union(parents_of(x), neighbours_of(x)))
      if (seen.insert(y).second) stack.push_back(y);
  }
  return NodeSet(seen.begin(), seen.end());
}

ChainGraph ChainGraph::moralize() const {
  std::set<Link> und;
  for (auto [u, v] : directed_) und.insert(canon(u, v));
  for (auto [u, v] : undirected_) und.insert(canon(u, v));
  for (const NodeSet& k : chain_components()) {
    const NodeSet pa = relations(k).parents;
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = i + 1; j < pa.size(); ++j)
        if (!adjacent(pa[i], pa[j])) und.insert(canon(pa[i], pa[j]));
  }
  return ChainGraph(nodes_, {}, {und.begin(), und.end()});
}

ChainGraph ChainGraph::induced(const NodeSet& sub) const {
  const NodeSet s = sorted_unique(sub);
  std::vector<Link> d, u;
  for (auto l : directed_)
    if (contains(s, l.first) && contains(s, l.second)) d.push_back(l);
  for (auto l : undirected_)
    if (contains(s, l.first) && contains(s, l.second)) u.push_back(l);
  return ChainGraph(s, std::move(d), std::move(u));
}

bool ChainGraph::separates(const NodeSet& a, const NodeSet& b, const NodeSet& c) const {
  if (!is_undirected()) throw PreconditionError("separates: graph must be undirected");
  const NodeSet as = sorted_unique(a), bs = sorted_unique(b), cs = sorted_unique(c);
  if (!set_minus(set_intersect(as, bs), cs).empty()) return false;
  std::set<VarId> seen;
  std::vector<VarId> stack;
  for (VarId v : set_minus(as, cs)) {
    seen.insert(v);
    stack.push_back(v);
  }
  while (!stack.empty()) {
    const VarId x = stack.back();
    stack.pop_back();
    if (contains(bs, x)) return false;
    for (VarId y : neighbours_of(x)) {
      if (contains(cs, y)) continue;
      if (seen.insert(y).second) stack.push_back(y);
    }
  }
  return true;
}

bool c_separated(const ChainGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  const NodeSet an = g.ancestral_set(set_union(set_union(sorted_unique(a), sorted_unique(b)),
                                               sorted_unique(c)));
  return g.induced(an).moralize().separates(a, b, c);
}

namespace {

// Maximum-cardinality search; returns (order, true) when the order is a
// perfect elimination ordering, i.e. the graph is chordal.
std::pair<std::vector<VarId>, bool> mcs_peo(const ChainGraph& g) {
  const NodeSet& nodes = g.nodes();
  const std::size_t n = nodes.size();
  std::map<VarId, int> weight;
  for (VarId v : nodes) weight[v] = 0;
  std::vector<VarId> order;
  order.reserve(n);
  std::set<VarId> numbered;
  for (std::size_t step = 0; step < n; ++step) {
    VarId best = -1;
    int bw = -1;
    for (VarId v : nodes) {
      if (numbered.count(v)) continue;
      if (weight[v] > bw) {
        bw = weight[v];
        best = v;
      }
    }
    order.push_back(best);
    numbered.insert(best);
    for (VarId y : g.neighbours_of(best))
      if (!numbered.count(y)) ++weight[y];
  }
  // Reverse of an MCS order is a candidate PEO; verify it.
  std::reverse(order.begin(), order.end());
  std::map<VarId, int> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  for (VarId v : order) {
    NodeSet later;
    for (VarId y : g.neighbours_of(v))
      if (rank[y] > rank[v]) later.push_back(y);
    later = sorted_unique(std::move(later));
    for (std::size_t i = 0; i < later.size(); ++i)
      for (std::size_t j = i + 1; j < later.size(); ++j)
        if (!g.adjacent(later[i], later[j])) return {order, false};
  }
  return {order, true};
}

}  // namespace

bool ChainGraph::is_triangulated() const {
  if (!is_undirected()) throw PreconditionError("is_triangulated: graph must be undirected");
  return mcs_peo(*this).second;
}

Triangulation triangulate(const ChainGraph& g) {
  if (!g.is_undirected()) throw PreconditionError("triangulate: graph must be undirected");
  const NodeSet& nodes = g.nodes();
  std::map<VarId, std::set<VarId>> adj;
  for (VarId v : nodes) adj[v] = {};
  for (auto [u, v] : g.undirected()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }

  std::set<VarId> remaining(nodes.begin(), nodes.end());
  std::vector<Link> fills;
  std::vector<VarId> order;
  std::set<Link> all_und(g.undirected().begin(), g.undirected().end());

  while (!remaining.empty()) {
    VarId best = -1;
    long best_fill = -1;
    std::size_t best_card = 0;
    for (VarId v : remaining) {  // std::set iterates in id order: lowest-id tie-break
      long fill = 0;
      std::vector<VarId> nb(adj[v].begin(), adj[v].end());
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]].count(nb[j])) ++fill;
      if (best < 0 || fill < best_fill || (fill == best_fill && nb.size() < best_card)) {
        best = v;
        best_fill = fill;
        best_card = nb.size();
      }
    }
    order.push_back(best);
    std::vector<VarId> nb(adj[best].begin(), adj[best].end());
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]].count(nb[j])) {
          adj[nb[i]].insert(nb[j]);
          adj[nb[j]].insert(nb[i]);
          fills.push_back(canon(nb[i], nb[j]));
          all_und.insert(canon(nb[i], nb[j]));
        }
    for (VarId y : nb) adj[y].erase(best);
    adj.erase(best);
    remaining.erase(best);
  }
  return Triangulation{ChainGraph(nodes, {}, {all_und.begin(), all_und.end()}), fills, order};
}

CliqueSet find_cliques(const ChainGraph& g) {
  if (!g.is_undirected()) throw PreconditionError("find_cliques: graph must be undirected");
  auto [order, chordal] = mcs_peo(g);
  if (!chordal) throw PreconditionError("find_cliques: graph is not triangulated");
  std::map<VarId, int> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  CliqueSet cliques;
  for (VarId v : order) {
    NodeSet c{v};
    for (VarId y : g.neighbours_of(v))
      if (rank[y] > rank[v]) c.push_back(y);
    cliques.push_back(sorted_unique(std::move(c)));
  }
  // keep the maximal ones, preserving elimination order
  CliqueSet out;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cliques.size() && maximal; ++j)
      if (i != j && is_subset(cliques[i], cliques[j]) &&
          (cliques[i].size() < cliques[j].size() || j < i))
        maximal = false;
    if (maximal) out.push_back(cliques[i]);
  }
  return out;
}

std::vector<NodeSet> ChainGraph::components_topological() const {
  const std::vector<NodeSet> comps = chain_components();
  const std::size_t m = comps.size();
  std::vector<int> comp_of_pos(nodes_.size());
  for (std::size_t ci = 0; ci < m; ++ci)
    for (VarId v : comps[ci]) comp_of_pos[static_cast<std::size_t>(pos(v))] = static_cast<int>(ci);
  std::vector<std::set<int>> adj(m);
  std::vector<int> indeg(m, 0);
  for (auto [u, v] : directed_) {
    const int cu = comp_of_pos[static_cast<std::size_t>(pos(u))];
    const int cv = comp_of_pos[static_cast<std::size_t>(pos(v))];
    if (cu != cv && adj[static_cast<std::size_t>(cu)].insert(cv).second)
      ++indeg[static_cast<std::size_t>(cv)];
  }
  // Kahn with lowest-first tie break for determinism.
  std::set<int> ready;
  for (std::size_t i = 0; i < m; ++i)
    if (indeg[i] == 0) ready.insert(static_cast<int>(i));
  std::vector<NodeSet> out;
  while (!ready.empty()) {
    const int c = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(comps[static_cast<std::size_t>(c)]);
    for (int d : adj[static_cast<std::size_t>(c)])
      if (--indeg[static_cast<std::size_t>(d)] == 0) ready.insert(d);
  }
  return out;
}

// --- builder -------------------------------------------------------------

ChainGraphBuilder::ChainGraphBuilder(const ChainGraph& g)
    : nodes_(g.nodes()), dir_(g.directed()), und_(g.undirected()) {}

void ChainGraphBuilder::add_node(VarId v) { nodes_ = sorted_unique(set_union(nodes_, {v})); }

void ChainGraphBuilder::remove_node(VarId v) {
  nodes_ = set_minus(nodes_, {v});
  std::erase_if(dir_, [v](const Link& l) { return l.first == v || l.second == v; });
  std::erase_if(und_, [v](const Link& l) { return l.first == v || l.second == v; });
}

void ChainGraphBuilder::add_directed(VarId u, VarId v) {
  if (!linked(u, v)) dir_.push_back({u, v});
}

void ChainGraphBuilder::add_undirected(VarId u, VarId v) {
  if (!linked(u, v)) und_.push_back(canon(u, v));
}

void ChainGraphBuilder::remove_link(VarId u, VarId v) {
  std::erase_if(dir_, [u, v](const Link& l) {
    return (l.first == u && l.second == v) || (l.first == v && l.second == u);
  });
  std::erase(und_, canon(u, v));
}

bool ChainGraphBuilder::linked(VarId u, VarId v) const {
  return has_directed(u, v) || has_directed(v, u) || has_undirected(u, v);
}

bool ChainGraphBuilder::has_directed(VarId u, VarId v) const {
  return std::find(dir_.begin(), dir_.end(), Link{u, v}) != dir_.end();
}

bool ChainGraphBuilder::has_undirected(VarId u, VarId v) const {
  return std::find(und_.begin(), und_.end(), canon(u, v)) != und_.end();
}

void ChainGraphBuilder::make_undirected(VarId u, VarId v) {
  remove_link(u, v);
  und_.push_back(canon(u, v));
}

void ChainGraphBuilder::orient(VarId u, VarId v) {
  remove_link(u, v);
  dir_.push_back({u, v});
}

std::vector<Link> ChainGraphBuilder::directed_links() const { return dir_; }
std::vector<Link> ChainGraphBuilder::undirected_links() const { return und_; }

bool ChainGraphBuilder::valid() const {
  try {
    ChainGraph g(nodes_, dir_, und_);
    return true;
  } catch (const StructureError&) {
    return false;
  }
}

ChainGraph ChainGraphBuilder::build() const { return ChainGraph(nodes_, dir_, und_); }

}  // namespace jtr
