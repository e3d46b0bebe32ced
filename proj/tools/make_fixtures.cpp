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

// Regenerates every checked-in fixture under fixtures/: the two dyspnoea
// networks, the six-variable worked example, and the seeded synthetic
// benchmarks. Deterministic; safe to re-run.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "jtr/compile.hpp"
#include "jtr/model_io.hpp"
#include "jtr/reduce.hpp"
#include "jtr/synthetic.hpp"

namespace {

using namespace jtr;

// ---- dyspnoea, five states per variable --------------------------------
//
// d's table is multiplicative in its parents with a strong bronchitis
// factor and mild coughing/lung-cancer factors, so the moral pair (c, l)
// carries the least conditional mutual information by a wide margin.

double peak(int x, int y, double hi, double near, double lo) {
  return x == y ? hi : (std::abs(x - y) == 1 ? near : lo);
}

NetworkModel dyspnoea_a() {
  NetworkModel m;
  m.name = "dyspnoea";
  m.description = "four five-state variables, conditional tables";
  const std::vector<std::string> states{"none", "mild", "low", "high", "severe"};
  const VarId b = m.variables.add("b", 5, states, "bronchitis");
  const VarId c = m.variables.add("c", 5, states, "coughing");
  const VarId l = m.variables.add("l", 5, states, "lung_cancer");
  const VarId d = m.variables.add("d", 5, states, "dyspnoea");
  m.graph = ChainGraph(m.variables.all_ids(), {{b, c}, {b, d}, {c, d}, {l, d}}, {});

  const std::vector<double> prior_b{0.35, 0.25, 0.2, 0.12, 0.08};
  const std::vector<double> prior_l{0.5, 0.2, 0.15, 0.1, 0.05};
  m.potentials.push_back(Potential({b}, {5}, prior_b));

  std::vector<double> cb(25);
  for (int ib = 0; ib < 5; ++ib) {
    double sum = 0;
    for (int ic = 0; ic < 5; ++ic)
      sum += cb[static_cast<std::size_t>(ib * 5 + ic)] = peak(ib, ic, 3.0, 1.2, 0.4);
    for (int ic = 0; ic < 5; ++ic) cb[static_cast<std::size_t>(ib * 5 + ic)] /= sum;
  }
  m.potentials.push_back(Potential({b, c}, {5, 5}, cb));
  m.potentials.push_back(Potential({l}, {5}, prior_l));

  std::vector<double> dbcl(625);
  for (int ib = 0; ib < 5; ++ib)
    for (int ic = 0; ic < 5; ++ic)
      for (int il = 0; il < 5; ++il) {
        double sum = 0;
        std::vector<double> row(5);
        for (int id = 0; id < 5; ++id)
          sum += row[static_cast<std::size_t>(id)] = peak(id, ib, 4.0, 1.0, 0.3) *
                                                     peak(id, ic, 1.5, 1.1, 0.85) *
                                                     peak(id, il, 1.6, 1.1, 0.8);
        for (int id = 0; id < 5; ++id)
          dbcl[static_cast<std::size_t>(((ib * 5 + ic) * 5 + il) * 5 + id)] =
              row[static_cast<std::size_t>(id)] / sum;
      }
  m.potentials.push_back(Potential({b, c, l, d}, {5, 5, 5, 5}, dbcl));
  return m;
}

// Model (b): same joint as model (a), written as the chain graph with the
// c - d link undirected and component tables p(c | b, d) and p(d | b, l).
NetworkModel dyspnoea_b(const NetworkModel& a) {
  CompileResult r = compile_model(a);
  const VarId b = 0, c = 1, l = 2, d = 3;

  NetworkModel m;
  m.name = "dyspnoea-chain";
  m.description = "chain-graph form of the dyspnoea network, 220 parameters";
  m.variables = a.variables;
  m.graph = ChainGraph(m.variables.all_ids(), {{b, c}, {b, d}, {l, d}}, {{c, d}});

  const Potential p_bcd = r.tree.marginal_by_elimination({b, c, d});
  const Potential p_bd = r.tree.marginal_by_elimination({b, d});
  const Potential p_bdl = r.tree.marginal_by_elimination({b, d, l});
  const Potential p_bl = r.tree.marginal_by_elimination({b, l});

  m.potentials.push_back(a.potentials[0]);                               // p(b)
  m.potentials.push_back(a.potentials[2]);                               // p(l)
  m.potentials.push_back(reorder(divide(p_bcd, p_bd), {b, d, c}));       // p(c | b, d)
  m.potentials.push_back(reorder(divide(p_bdl, p_bl), {b, l, d}));       // p(d | b, l)
  return m;
}

// ---- the six-variable worked example, binary ----------------------------
//
// Declared sink-first so the minimum-fill heuristic adds exactly the a - c
// fill-in and the clique set of the worked example. d depends on c only
// weakly; every other link is strong.

NetworkModel fig3a() {
  NetworkModel m;
  m.name = "fig3a";
  m.description = "six binary variables; c-d is the only weak link";
  const VarId f = m.variables.add("f", 2);
  const VarId e = m.variables.add("e", 2);
  const VarId d = m.variables.add("d", 2);
  const VarId c = m.variables.add("c", 2);
  const VarId b = m.variables.add("b", 2);
  const VarId a = m.variables.add("a", 2);
  m.graph = ChainGraph(m.variables.all_ids(),
                       {{a, b}, {b, e}, {c, e}, {c, d}, {a, f}, {d, f}, {e, f}}, {});

  auto cond = [&](std::vector<VarId> dom, std::vector<double> vals) {
    m.potentials.push_back(Potential(dom, m.variables.cards_for(dom), std::move(vals)));
  };
  cond({a}, {0.6, 0.4});
  cond({c}, {0.45, 0.55});
  cond({a, b}, {0.85, 0.15, 0.2, 0.8});
  // weak: d barely notices c
  cond({c, d}, {0.51, 0.49, 0.49, 0.51});
  cond({b, c, e}, {0.9, 0.1, 0.6, 0.4, 0.35, 0.65, 0.05, 0.95});
  std::vector<double> fade(16);
  for (int ia = 0; ia < 2; ++ia)
    for (int id = 0; id < 2; ++id)
      for (int ie = 0; ie < 2; ++ie) {
        const double w0 = (ia ? 0.3 : 1.4) * (id ? 0.5 : 1.2) * (ie ? 0.25 : 1.5);
        const double w1 = (ia ? 1.3 : 0.4) * (id ? 1.1 : 0.6) * (ie ? 1.6 : 0.3);
        const std::size_t base = static_cast<std::size_t>(((ia * 2 + id) * 2 + ie) * 2);
        fade[base] = w0 / (w0 + w1);
        fade[base + 1] = w1 / (w0 + w1);
      }
  cond({a, d, e, f}, fade);
  return m;
}

void write(const std::string& dir, const char* name, const NetworkModel& m) {
  const std::string path = dir + "/" + name + ".net";
  write_network_file(path, m);
  std::printf("wrote %s\n", path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "fixtures";

  const NetworkModel a = dyspnoea_a();
  write(dir, "dyspnoea_a", a);
  write(dir, "dyspnoea_b", dyspnoea_b(a));
  write(dir, "fig3a", fig3a());

  struct Spec {
    const char* name;
    std::uint64_t seed;
    int vars, card;
  };
  const Spec specs[] = {
      {"synth_small", 101, 12, 2},
      {"synth_medium", 202, 24, 2},
      {"synth_large", 303, 40, 3},
  };
  for (const Spec& s : specs) {
    NetworkModel m = random_chain_model(s.seed, s.vars, s.card);
    m.name = s.name;
    write(dir, s.name, m);
  }
  return 0;
}
