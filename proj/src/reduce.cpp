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

#include "jtr/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "jtr/ind_graph.hpp"

namespace jtr {

const char* surgery_case_name(SurgeryCase c) {
  switch (c) {
    case SurgeryCase::two_new: return "two-new";
    case SurgeryCase::one_new: return "one-new";
    case SurgeryCase::zero_new: return "zero-new";
  }
  return "?";
}

std::vector<RemovalCandidate> removable_links(const JunctionTree& t, const ChainGraph& moral) {
  std::vector<RemovalCandidate> out;
  for (auto [u, v] : moral.undirected()) {
    int home = -1, hits = 0;
    for (std::size_t ci = 0; ci < t.clique_count(); ++ci) {
      const NodeSet& vars = t.cliques()[ci].vars;
      if (contains(vars, u) && contains(vars, v)) {
        ++hits;
        if (home < 0) home = static_cast<int>(ci);
      }
    }
    if (hits != 1) continue;
    RemovalCandidate c;
    c.alpha = std::min(u, v);
    c.beta = std::max(u, v);
    c.clique = home;
    c.clique_vars = t.cliques()[static_cast<std::size_t>(home)].vars;
    out.push_back(std::move(c));
  }
  return out;
}

Potential approx_clique_potential(const Potential& phi, VarId alpha, VarId beta) {
  const NodeSet dom = sorted_unique(phi.domain());
  if (!contains(dom, alpha) || !contains(dom, beta))
    throw DomainError("approx_clique_potential: link not inside the clique domain");
  const Potential m_a = marginalize(phi, set_minus(dom, {beta}));   // sum over beta
  const Potential m_b = marginalize(phi, set_minus(dom, {alpha}));  // sum over alpha
  const Potential m_ab = marginalize(phi, set_minus(dom, {alpha, beta}));
  // m_ab = 0 implies the whole slice of the numerator is 0, so divide()
  // never meets x/0 here.
  return reorder(divide(multiply(m_a, m_b), m_ab), phi.domain());
}

double score(const Potential& phi, VarId alpha, VarId beta) {
  return kl_divergence(phi, approx_clique_potential(phi, alpha, beta));
}

namespace {

struct SideInfo {
  bool stays_clique;  // I_gamma: C_gamma is a clique of the new tree
  int absorber_sep;   // separator index into t.separators(), -1 when new
  int absorber;       // clique index, -1 when new
};

// C_gamma = C \ {other} is absorbed iff some incident separator equals it;
// the absorbing neighbour is then adjacent through exactly that separator.
SideInfo side_info(const JunctionTree& t, int ci, const NodeSet& c_gamma) {
  SideInfo info{true, -1, -1};
  std::int64_t best_mass = 0;
  for (auto [s, o] : t.neighbours(ci)) {
    if (t.separators()[static_cast<std::size_t>(s)].vars != c_gamma) continue;
    const std::int64_t mass =
        static_cast<std::int64_t>(t.cliques()[static_cast<std::size_t>(o)].belief.size());
    if (info.absorber < 0 || mass < best_mass ||
        (mass == best_mass && o < info.absorber)) {
      info.absorber = o;
      info.absorber_sep = s;
      best_mass = mass;
    }
  }
  info.stays_clique = info.absorber < 0;
  return info;
}

std::int64_t mass_of(const Potential& p) { return static_cast<std::int64_t>(p.size()); }

}  // namespace

std::int64_t saving(const JunctionTree& t, const RemovalCandidate& cand) {
  const JtClique& c = t.cliques()[static_cast<std::size_t>(cand.clique)];
  const std::int64_t mass_c = mass_of(c.belief);
  const std::int64_t card_a = c.belief.card_of(cand.alpha);
  const std::int64_t card_b = c.belief.card_of(cand.beta);
  const std::int64_t mass_ca = mass_c / card_b;  // |Sp(C \ {beta})|
  const std::int64_t mass_cb = mass_c / card_a;
  const std::int64_t mass_s = mass_c / (card_a * card_b);

  const SideInfo a = side_info(t, cand.clique, set_minus(c.vars, {cand.beta}));
  const SideInfo b = side_info(t, cand.clique, set_minus(c.vars, {cand.alpha}));
  // Eq 7 with |S_1| = |C_alpha| and |S_k| = |C_beta| in the absorbed cases.
  std::int64_t sigma = mass_c - mass_s;
  sigma += a.stays_clique ? -mass_ca : mass_ca;
  sigma += b.stays_clique ? -mass_cb : mass_cb;
  return sigma;
}

void score_candidate(const JunctionTree& t, RemovalCandidate& cand) {
  const JtClique& c = t.cliques()[static_cast<std::size_t>(cand.clique)];
  if (cand.divergence < 0.0) cand.divergence = score(c.belief, cand.alpha, cand.beta);
  const SideInfo a = side_info(t, cand.clique, set_minus(c.vars, {cand.beta}));
  const SideInfo b = side_info(t, cand.clique, set_minus(c.vars, {cand.alpha}));
  cand.alpha_stays_clique = a.stays_clique;
  cand.beta_stays_clique = b.stays_clique;
  cand.kase = a.stays_clique ? (b.stays_clique ? SurgeryCase::two_new : SurgeryCase::one_new)
                             : (b.stays_clique ? SurgeryCase::one_new : SurgeryCase::zero_new);
  cand.saving = saving(t, cand);
  cand.revision = t.revision();
}

Surgery remove_link(JunctionTree& t, const RemovalCandidate& cand) {
  if (cand.revision != t.revision())
    throw StalenessError("candidate was scored against revision " + std::to_string(cand.revision) +
                         ", tree is at " + std::to_string(t.revision()));
  const int ci = cand.clique;
  if (ci < 0 || static_cast<std::size_t>(ci) >= t.clique_count() ||
      t.cliques()[static_cast<std::size_t>(ci)].vars != cand.clique_vars)
    throw StalenessError("candidate clique no longer matches the tree");

  const JtClique c = t.cliques()[static_cast<std::size_t>(ci)];  // copy; we rebuild below
  const NodeSet c_alpha = set_minus(c.vars, {cand.beta});
  const NodeSet c_beta = set_minus(c.vars, {cand.alpha});
  const NodeSet s_vars = set_minus(c.vars, {cand.alpha, cand.beta});

  const SideInfo a_info = side_info(t, ci, c_alpha);
  const SideInfo b_info = side_info(t, ci, c_beta);

  const Potential phi_a = marginalize(c.belief, c_alpha);
  const Potential phi_b = marginalize(c.belief, c_beta);
  const Potential phi_s = marginalize(c.belief, s_vars);

  // Partition the neighbours. A separator never contains both alpha and
  // beta (the clique was unique); ones containing neither go to the alpha
  // side by convention.
  std::vector<std::pair<int, int>> alpha_side, beta_side;
  for (auto [s, o] : t.neighbours(ci)) {
    if (contains(t.separators()[static_cast<std::size_t>(s)].vars, cand.beta))
      beta_side.push_back({s, o});
    else
      alpha_side.push_back({s, o});
  }

  // Variable sets of the two subtrees, for the independence-graph update.
  std::vector<bool> blocked(t.clique_count(), false);
  blocked[static_cast<std::size_t>(ci)] = true;
  auto subtree_vars = [&](const std::vector<std::pair<int, int>>& roots, NodeSet seed) {
    NodeSet vars = std::move(seed);
    std::vector<int> stack;
    std::vector<bool> seen = blocked;
    for (auto [s, o] : roots)
      if (!seen[static_cast<std::size_t>(o)]) {
        seen[static_cast<std::size_t>(o)] = true;
        stack.push_back(o);
      }
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      vars = set_union(vars, t.cliques()[static_cast<std::size_t>(x)].vars);
      for (auto [s2, o2] : t.neighbours(x))
        if (!seen[static_cast<std::size_t>(o2)]) {
          seen[static_cast<std::size_t>(o2)] = true;
          stack.push_back(o2);
        }
    }
    return vars;
  };
  Surgery surg;
  surg.kase = cand.kase;
  surg.sep = s_vars;
  surg.side_alpha = subtree_vars(alpha_side, c_alpha);
  surg.side_beta = subtree_vars(beta_side, c_beta);

  // Rebuild clique and separator vectors. Old indices above ci shift down;
  // new cliques (if any) go to the end, alpha side first.
  auto remap = [ci](int old) { return old < ci ? old : old - 1; };
  std::vector<JtClique> cliques;
  cliques.reserve(t.clique_count() + 1);
  for (std::size_t i = 0; i < t.clique_count(); ++i)
    if (static_cast<int>(i) != ci) cliques.push_back(t.cliques()[i]);

  int anchor_a, anchor_b;
  if (a_info.stays_clique) {
    anchor_a = static_cast<int>(cliques.size());
    cliques.push_back(JtClique{c_alpha, reorder(phi_a, c_alpha)});
  } else {
    anchor_a = remap(a_info.absorber);
  }
  if (b_info.stays_clique) {
    anchor_b = static_cast<int>(cliques.size());
    cliques.push_back(JtClique{c_beta, reorder(phi_b, c_beta)});
  } else {
    anchor_b = remap(b_info.absorber);
  }

  std::vector<JtSeparator> seps;
  seps.reserve(t.separators().size() + 1);
  for (std::size_t s = 0; s < t.separators().size(); ++s) {
    const JtSeparator& old = t.separators()[s];
    if (old.a != ci && old.b != ci) {
      seps.push_back(JtSeparator{old.vars, old.belief, remap(old.a), remap(old.b)});
      continue;
    }
    if (static_cast<int>(s) == a_info.absorber_sep || static_cast<int>(s) == b_info.absorber_sep)
      continue;  // the vanishing S_1 / S_k
    const int other = remap(old.a == ci ? old.b : old.a);
    const bool on_beta_side = contains(old.vars, cand.beta);
    seps.push_back(JtSeparator{old.vars, old.belief, on_beta_side ? anchor_b : anchor_a, other});
  }
  seps.push_back(JtSeparator{s_vars, reorder(phi_s, s_vars), anchor_a, anchor_b});

  t.replace_structure(std::move(cliques), std::move(seps), t.consistent());
  return surg;
}

double error_bound(double total_divergence) {
  if (total_divergence < 0.0) throw DomainError("error_bound: negative divergence");
  return std::sqrt(total_divergence / 2.0);
}

ReduceResult greedy_reduce(JunctionTree& t, const ChainGraph& g, const VariableSet& vars,
                           double budget, const std::string& mode) {
  if (budget < 0.0) throw DomainError("budget must be >= 0");
  ReduceResult out;
  out.graph = g;
  auto [cl0, se0] = t.total_size();
  out.report.size_before = cl0 + se0;
  out.report.mode = mode;

  // Divergences survive across iterations as long as the candidate's clique
  // is untouched; a destroyed clique variable set never recurs.
  std::map<Link, std::pair<NodeSet, double>> divergence_cache;
  std::set<Link> removed;
  double total = 0.0;

  for (;;) {
    const ChainGraph moral = out.graph.moralize();
    std::vector<RemovalCandidate> cands = removable_links(t, moral);
    std::erase_if(cands, [&removed](const RemovalCandidate& c) {
      return removed.count({c.alpha, c.beta}) > 0;
    });
    if (cands.empty()) break;

    for (RemovalCandidate& c : cands) {
      const auto it = divergence_cache.find({c.alpha, c.beta});
      if (it != divergence_cache.end() && it->second.first == c.clique_vars)
        c.divergence = it->second.second;
    }
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(cands.size()); ++i)
      score_candidate(t, cands[static_cast<std::size_t>(i)]);
    for (const RemovalCandidate& c : cands)
      divergence_cache[{c.alpha, c.beta}] = {c.clique_vars, c.divergence};

    const auto best = std::min_element(
        cands.begin(), cands.end(), [](const RemovalCandidate& x, const RemovalCandidate& y) {
          if (x.divergence != y.divergence) return x.divergence < y.divergence;
          if (x.saving != y.saving) return x.saving > y.saving;
          return Link{x.alpha, x.beta} < Link{y.alpha, y.beta};
        });
    if (total + best->divergence > budget) break;

    const RemovalCandidate chosen = *best;
    const Surgery surg = remove_link(t, chosen);
    total += chosen.divergence;
    removed.insert({chosen.alpha, chosen.beta});

    // The removal admits two marginal/conditional factorizations (marginal
    // side alpha or beta). Build both candidate graphs and keep the one
    // whose recovered recursive model is structurally smaller; ties go to
    // fewer marginal-side variables, then to the side holding the endpoint
    // with the lexicographically smaller name.
    const Partition part_a{surg.side_alpha, surg.side_beta, surg.sep};
    const Partition part_b{surg.side_beta, surg.side_alpha, surg.sep};
    struct Option {
      bool ok = false;
      ChainGraph graph;
      std::int64_t params = 0;
    };
    auto attempt = [&](const Partition& p) {
      Option o;
      try {
        o.graph = update_after_removal(out.graph, chosen.alpha, chosen.beta, p);
        o.params = structural_parameter_count(o.graph, vars);
        o.ok = true;
      } catch (const CombinationError&) {
        // repair exhausted: this factorization is not available
      } catch (const StructureError&) {
        // construction collided with the chain-graph condition: same story
      }
      return o;
    };
    const Option on_alpha = attempt(part_a);
    const Option on_beta = attempt(part_b);
    if (!on_alpha.ok && !on_beta.ok)
      throw CombinationError("no factorization of the removal yields a chain graph");
    bool keep_alpha = on_alpha.ok;
    if (on_alpha.ok && on_beta.ok) {
      if (on_alpha.params != on_beta.params) {
        keep_alpha = on_alpha.params < on_beta.params;
      } else if (surg.side_alpha.size() != surg.side_beta.size()) {
        keep_alpha = surg.side_alpha.size() < surg.side_beta.size();
      } else {
        keep_alpha = vars[chosen.alpha].name <= vars[chosen.beta].name;
      }
    }
    out.graph = keep_alpha ? on_alpha.graph : on_beta.graph;

    out.report.removals.push_back(RemovalRecord{chosen.alpha, chosen.beta, chosen.clique_vars,
                                                chosen.divergence, chosen.saving, chosen.kase,
                                                mode});
  }

  out.report.total_divergence = total;
  out.report.bound = error_bound(total);
  auto [cl1, se1] = t.total_size();
  out.report.size_after = cl1 + se1;
  return out;
}

// --- annihilation baseline ------------------------------------------------

CompressedTable compress_zeros(const std::vector<double>& dense) {
  CompressedTable out;
  out.dense_size = dense.size();
  std::size_t i = 0;
  while (i < dense.size()) {
    std::uint32_t zeros = 0;
    while (i < dense.size() && dense[i] == 0.0) {
      ++zeros;
      ++i;
    }
    std::uint32_t nvals = 0;
    const std::size_t start = i;
    while (i < dense.size() && dense[i] != 0.0) {
      ++nvals;
      ++i;
    }
    out.runs.push_back({zeros, nvals});
    out.values.insert(out.values.end(), dense.begin() + static_cast<std::ptrdiff_t>(start),
                      dense.begin() + static_cast<std::ptrdiff_t>(start + nvals));
  }
  out.rle = out.values.size() + out.runs.size() < out.dense_size;
  if (!out.rle) {
    out.runs.clear();
    out.values = dense;
  }
  return out;
}

std::vector<double> CompressedTable::expand() const {
  if (!rle) return values;
  std::vector<double> out;
  out.reserve(dense_size);
  std::size_t v = 0;
  for (auto [zeros, nvals] : runs) {
    out.insert(out.end(), zeros, 0.0);
    for (std::uint32_t k = 0; k < nvals; ++k) out.push_back(values[v++]);
  }
  out.resize(dense_size, 0.0);
  return out;
}

AnnihilationResult annihilate(JunctionTree& t, double threshold) {
  if (threshold < 0.0 || threshold >= 1.0) throw DomainError("threshold must be in [0, 1)");
  if (!t.consistent()) throw PreconditionError("annihilate needs a consistent normalized tree");
  AnnihilationResult out;
  for (std::size_t ci = 0; ci < t.clique_count(); ++ci) {
    std::vector<double> vals = t.cliques()[ci].belief.values();
    std::vector<std::size_t> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&vals](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
    double removed = 0.0;
    std::size_t zeroed = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (!(removed + vals[order[k]] < threshold)) break;  // strictly below
      removed += vals[order[k]];
      vals[order[k]] = 0.0;
      ++zeroed;
    }
    if (zeroed > 0) {
      Potential& belief = t.belief(static_cast<int>(ci));
      belief.values() = vals;
    }
    CompressedTable ct = compress_zeros(vals);
    out.per_clique.push_back(CliqueAnnihilation{static_cast<int>(ci), removed, zeroed,
                                                ct.dense_size, ct.stored_size()});
    out.total_removed_mass += removed;
    out.tables.push_back(std::move(ct));
  }
  return out;
}

}  // namespace jtr
