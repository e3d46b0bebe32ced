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

#include "jtr/junction_tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace jtr {

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace

JunctionTree JunctionTree::build(const CliqueSet& cliques, const VariableSet& vars) {
  if (cliques.empty()) throw StructureError("empty clique set");
  // refuse before allocating: the sum of clique state spaces is the real
  // memory bill, and one table can be fine while the total is not
  std::size_t total_cells = 0;
  for (const NodeSet& c : cliques) {
    std::size_t cells = 1;
    for (VarId v : sorted_unique(c)) cells *= static_cast<std::size_t>(vars.cardinality(v));
    total_cells += cells;
    if (total_cells > (std::size_t(1) << 27))
      throw TableTooLargeError("junction tree needs more than 2^27 cells in total");
  }
  JunctionTree t;
  t.cliques_.reserve(cliques.size());
  for (const NodeSet& c : cliques) {
    const NodeSet cs = sorted_unique(c);
    t.cliques_.push_back(JtClique{cs, Potential::ones(cs, vars.cards_for(cs))});
  }

  struct Edge {
    int i, j;
    int weight;                // |C n D|
    std::int64_t sep_mass;     // |Sp(C n D)|
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < cliques.size(); ++i)
    for (std::size_t j = i + 1; j < cliques.size(); ++j) {
      const NodeSet s = set_intersect(t.cliques_[i].vars, t.cliques_[j].vars);
      if (s.empty()) continue;
      std::int64_t mass = 1;
      for (VarId v : s) mass *= vars.cardinality(v);
      edges.push_back(Edge{static_cast<int>(i), static_cast<int>(j),
                           static_cast<int>(s.size()), mass});
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.sep_mass != b.sep_mass) return a.sep_mass > b.sep_mass;
    return std::pair{a.i, a.j} < std::pair{b.i, b.j};
  });

  Dsu dsu(cliques.size());
  for (const Edge& e : edges) {
    if (!dsu.join(e.i, e.j)) continue;
    const NodeSet s = set_intersect(t.cliques_[static_cast<std::size_t>(e.i)].vars,
                                    t.cliques_[static_cast<std::size_t>(e.j)].vars);
    t.seps_.push_back(JtSeparator{s, Potential::ones(s, vars.cards_for(s)), e.i, e.j});
  }

  // Bridge remaining components with empty separators so the structure is a
  // single tree; an empty separator encodes exact independence (Eq 5 with a
  // scalar divisor).
  std::vector<int> reps;
  for (std::size_t i = 0; i < cliques.size(); ++i)
    if (dsu.find(static_cast<int>(i)) == static_cast<int>(i)) reps.push_back(static_cast<int>(i));
  std::vector<int> lowest;
  {
    std::vector<int> low(cliques.size(), -1);
    for (std::size_t i = 0; i < cliques.size(); ++i) {
      const int r = dsu.find(static_cast<int>(i));
      if (low[static_cast<std::size_t>(r)] < 0) low[static_cast<std::size_t>(r)] = static_cast<int>(i);
    }
    for (int r : reps) lowest.push_back(low[static_cast<std::size_t>(r)]);
  }
  std::sort(lowest.begin(), lowest.end());
  for (std::size_t k = 1; k < lowest.size(); ++k) {
    dsu.join(lowest[k - 1], lowest[k]);
    t.seps_.push_back(JtSeparator{{}, Potential(), lowest[k - 1], lowest[k]});
  }

  t.adj_.assign(t.cliques_.size(), {});
  for (std::size_t s = 0; s < t.seps_.size(); ++s) {
    t.adj_[static_cast<std::size_t>(t.seps_[s].a)].push_back(static_cast<int>(s));
    t.adj_[static_cast<std::size_t>(t.seps_[s].b)].push_back(static_cast<int>(s));
  }
  t.validate_structure();
  t.consistent_ = false;
  return t;
}

void JunctionTree::validate_structure() const {
  if (seps_.size() + 1 != cliques_.size())
    throw StructureError("not a tree: " + std::to_string(cliques_.size()) + " cliques, " +
                         std::to_string(seps_.size()) + " separators");
  // connectivity + acyclicity via BFS
  std::vector<int> parent_sep(cliques_.size(), -2);
  std::queue<int> q;
  q.push(0);
  parent_sep[0] = -1;
  std::size_t seen = 1;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    for (int s : adj_[static_cast<std::size_t>(c)]) {
      const int o = seps_[static_cast<std::size_t>(s)].a == c ? seps_[static_cast<std::size_t>(s)].b
                                                              : seps_[static_cast<std::size_t>(s)].a;
      if (parent_sep[static_cast<std::size_t>(o)] != -2) continue;
      parent_sep[static_cast<std::size_t>(o)] = s;
      ++seen;
      q.push(o);
    }
  }
  if (seen != cliques_.size()) throw StructureError("clique tree is disconnected");

  for (const JtSeparator& s : seps_) {
    const NodeSet inter = set_intersect(cliques_[static_cast<std::size_t>(s.a)].vars,
                                        cliques_[static_cast<std::size_t>(s.b)].vars);
    if (s.vars != inter)
      throw StructureError("separator does not equal the intersection of its cliques");
  }

  // Running intersection: C n D contained in every clique on the tree path.
  // Quadratic, fine at the scales this engine compiles.
  std::vector<int> parent_clique(cliques_.size(), -1);
  for (std::size_t c = 0; c < cliques_.size(); ++c) {
    const int s = parent_sep[c];
    if (s >= 0)
      parent_clique[c] = seps_[static_cast<std::size_t>(s)].a == static_cast<int>(c)
                             ? seps_[static_cast<std::size_t>(s)].b
                             : seps_[static_cast<std::size_t>(s)].a;
  }
  auto depth = [&](int c) {
    int d = 0;
    for (int x = c; parent_clique[static_cast<std::size_t>(x)] >= 0;
         x = parent_clique[static_cast<std::size_t>(x)])
      ++d;
    return d;
  };
  for (std::size_t i = 0; i < cliques_.size(); ++i)
    for (std::size_t j = i + 1; j < cliques_.size(); ++j) {
      const NodeSet need = set_intersect(cliques_[i].vars, cliques_[j].vars);
      if (need.empty()) continue;
      int x = static_cast<int>(i), y = static_cast<int>(j);
      int dx = depth(x), dy = depth(y);
      while (dx > dy) {
        x = parent_clique[static_cast<std::size_t>(x)];
        --dx;
        if (!is_subset(need, cliques_[static_cast<std::size_t>(x)].vars))
          throw StructureError("running intersection property violated");
      }
      while (dy > dx) {
        y = parent_clique[static_cast<std::size_t>(y)];
        --dy;
        if (!is_subset(need, cliques_[static_cast<std::size_t>(y)].vars))
          throw StructureError("running intersection property violated");
      }
      while (x != y) {
        x = parent_clique[static_cast<std::size_t>(x)];
        y = parent_clique[static_cast<std::size_t>(y)];
        if (!is_subset(need, cliques_[static_cast<std::size_t>(x)].vars) ||
            (x != y && !is_subset(need, cliques_[static_cast<std::size_t>(y)].vars)))
          throw StructureError("running intersection property violated");
      }
    }
}

std::vector<std::pair<int, int>> JunctionTree::neighbours(int ci) const {
  std::vector<std::pair<int, int>> out;
  for (int s : adj_[static_cast<std::size_t>(ci)]) {
    const JtSeparator& sep = seps_[static_cast<std::size_t>(s)];
    out.push_back({s, sep.a == ci ? sep.b : sep.a});
  }
  return out;
}

int JunctionTree::find_clique_containing(const NodeSet& vars) const {
  const NodeSet v = sorted_unique(vars);
  for (std::size_t i = 0; i < cliques_.size(); ++i)
    if (is_subset(v, cliques_[i].vars)) return static_cast<int>(i);
  return -1;
}

Potential& JunctionTree::belief(int ci) {
  ++revision_;
  consistent_ = false;
  return cliques_[static_cast<std::size_t>(ci)].belief;
}

void JunctionTree::reset_beliefs() {
  for (JtClique& c : cliques_) c.belief = Potential::ones(c.vars, c.belief.cards());
  for (JtSeparator& s : seps_) s.belief = s.vars.empty() ? Potential() : Potential::ones(s.vars, s.belief.cards());
  consistent_ = false;
  ++revision_;
}

void JunctionTree::multiply_in(const Potential& p) {
  const int ci = find_clique_containing(sorted_unique(p.domain()));
  if (ci < 0) throw CoverError("potential fits no clique of the junction tree");
  auto& c = cliques_[static_cast<std::size_t>(ci)];
  c.belief = reorder(multiply(c.belief, p), c.vars);
  consistent_ = false;
  ++revision_;
}

void JunctionTree::set_evidence(VarId v, const std::vector<double>& likelihood) {
  const int ci = find_clique_containing({v});
  if (ci < 0) throw CoverError("evidence variable is in no clique");
  const int card = cliques_[static_cast<std::size_t>(ci)].belief.card_of(v);
  if (static_cast<int>(likelihood.size()) != card)
    throw DomainError("likelihood vector length does not match cardinality");
  multiply_in(Potential({v}, {card}, likelihood));
}

void JunctionTree::pass_message(int from, int sep_idx) {
  JtSeparator& s = seps_[static_cast<std::size_t>(sep_idx)];
  const int to = s.a == from ? s.b : s.a;
  Potential msg = marginalize(cliques_[static_cast<std::size_t>(from)].belief, s.vars);
  JtClique& dst = cliques_[static_cast<std::size_t>(to)];
  dst.belief = reorder(multiply(dst.belief, divide(msg, s.belief)), dst.vars);
  s.belief = std::move(msg);
}

void JunctionTree::propagate() {
  if (cliques_.empty()) return;
  const int root = 0;  // lowest clique index
  // Iterative post-order for collect, then pre-order for distribute.
  std::vector<int> order, parent_sep(cliques_.size(), -1), parent(cliques_.size(), -1);
  std::vector<bool> seen(cliques_.size(), false);
  order.reserve(cliques_.size());
  std::vector<int> stack{root};
  seen[static_cast<std::size_t>(root)] = true;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    order.push_back(c);
    for (auto [s, o] : neighbours(c)) {
      if (seen[static_cast<std::size_t>(o)]) continue;
      seen[static_cast<std::size_t>(o)] = true;
      parent[static_cast<std::size_t>(o)] = c;
      parent_sep[static_cast<std::size_t>(o)] = s;
      stack.push_back(o);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (parent[static_cast<std::size_t>(*it)] >= 0)
      pass_message(*it, parent_sep[static_cast<std::size_t>(*it)]);
  for (int c : order)
    if (parent[static_cast<std::size_t>(c)] >= 0)
      pass_message(parent[static_cast<std::size_t>(c)], parent_sep[static_cast<std::size_t>(c)]);

  for (JtClique& c : cliques_) {
    const double mass = c.belief.sum();
    if (mass <= 0.0) throw InconsistencyError("all-zero clique after propagation");
    for (double& v : c.belief.values()) v /= mass;
  }
  for (JtSeparator& s : seps_) {
    const double mass = s.belief.sum();
    if (mass <= 0.0) throw InconsistencyError("all-zero separator after propagation");
    for (double& v : s.belief.values()) v /= mass;
  }
  consistent_ = true;
  ++revision_;
}

Potential JunctionTree::query(const NodeSet& vars) const {
  if (!consistent_) throw PreconditionError("query requires a consistent tree");
  const NodeSet v = sorted_unique(vars);
  const int ci = find_clique_containing(v);
  if (ci < 0)
    throw UnsupportedQueryError("query variables span no single clique");
  return normalize(marginalize(cliques_[static_cast<std::size_t>(ci)].belief, v));
}

std::pair<std::int64_t, std::int64_t> JunctionTree::total_size() const {
  std::int64_t cl = 0, se = 0;
  for (const JtClique& c : cliques_) cl += static_cast<std::int64_t>(c.belief.size());
  for (const JtSeparator& s : seps_) se += static_cast<std::int64_t>(s.belief.size());
  return {cl, se};
}

NodeSet JunctionTree::all_vars() const {
  NodeSet out;
  for (const JtClique& c : cliques_) out = set_union(out, c.vars);
  return out;
}

Potential JunctionTree::marginal_by_elimination(const NodeSet& target) const {
  if (!consistent_) throw PreconditionError("marginal requires a consistent tree");
  const NodeSet t = sorted_unique(target);
  const int ci = find_clique_containing(t);
  if (ci >= 0) return normalize(marginalize(cliques_[static_cast<std::size_t>(ci)].belief, t));

  // Calibrated directed factorization: root belief times per-clique
  // conditionals belief(C)/belief(S(C)).
  std::vector<Potential> factors;
  std::vector<bool> seen(cliques_.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  factors.push_back(cliques_[0].belief);
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (auto [s, o] : neighbours(c)) {
      if (seen[static_cast<std::size_t>(o)]) continue;
      seen[static_cast<std::size_t>(o)] = true;
      factors.push_back(divide(cliques_[static_cast<std::size_t>(o)].belief,
                               seps_[static_cast<std::size_t>(s)].belief));
      stack.push_back(o);
    }
  }

  // Greedy variable elimination, cheapest combined table first.
  NodeSet elim = set_minus(all_vars(), t);
  while (!elim.empty()) {
    VarId best = -1;
    std::size_t best_cells = 0;
    for (VarId v : elim) {
      NodeSet dom;
      for (const Potential& f : factors)
        if (f.has(v)) dom = set_union(dom, sorted_unique(f.domain()));
      std::size_t cells = 1;
      for (VarId u : dom) {
        for (const Potential& f : factors)
          if (f.has(u)) {
            cells *= static_cast<std::size_t>(f.card_of(u));
            break;
          }
      }
      if (best < 0 || cells < best_cells) {
        best = v;
        best_cells = cells;
      }
    }
    Potential prod = Potential::scalar(1.0);
    std::vector<Potential> rest;
    for (Potential& f : factors) {
      if (f.has(best))
        prod = multiply(prod, f);
      else
        rest.push_back(std::move(f));
    }
    rest.push_back(marginalize(prod, set_minus(sorted_unique(prod.domain()), {best})));
    factors = std::move(rest);
    elim = set_minus(elim, {best});
  }
  Potential out = Potential::scalar(1.0);
  for (const Potential& f : factors) out = multiply(out, f);
  return normalize(reorder(marginalize(out, t), t));
}

void JunctionTree::replace_structure(std::vector<JtClique> cliques, std::vector<JtSeparator> seps,
                                     bool still_consistent) {
  cliques_ = std::move(cliques);
  seps_ = std::move(seps);
  adj_.assign(cliques_.size(), {});
  for (std::size_t s = 0; s < seps_.size(); ++s) {
    adj_[static_cast<std::size_t>(seps_[s].a)].push_back(static_cast<int>(s));
    adj_[static_cast<std::size_t>(seps_[s].b)].push_back(static_cast<int>(s));
  }
  validate_structure();
  consistent_ = still_consistent;
  ++revision_;
}

}  // namespace jtr
