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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "jtr/compile.hpp"
#include "jtr/junction_tree.hpp"
#include "jtr/rng.hpp"
#include "jtr/synthetic.hpp"
#include "oracle.hpp"
#include "paper_graphs.hpp"

using namespace jtr;

namespace {

VariableSet binary_vars(int n) {
  VariableSet vars;
  for (int i = 0; i < n; ++i) vars.add("v" + std::to_string(i), 2);
  return vars;
}

NetworkModel mixed_model(std::uint64_t seed, int n) {
  return seed % 2 ? random_chain_model(seed, n) : random_dag_model(seed, n);
}

}  // namespace

TEST_CASE("build: single clique, chains, and the fig-4a tree") {
  const VariableSet vars = binary_vars(6);
  const JunctionTree single = JunctionTree::build({{0, 1, 2}}, vars);
  CHECK(single.clique_count() == 1);
  CHECK(single.separators().empty());

  const JunctionTree chain = JunctionTree::build({{0, 1}, {1, 2}, {2, 3}}, vars);
  CHECK(chain.separators().size() == 2);
  NodeSet seps;
  for (const auto& s : chain.separators()) {
    CHECK(s.vars.size() == 1);
    seps.push_back(s.vars[0]);
  }
  CHECK(sorted_unique(seps) == NodeSet{1, 2});

  const CliqueSet cliques = find_cliques(triangulate(paper::fig3a().moralize()).graph);
  const JunctionTree fig4a = JunctionTree::build(cliques, vars);
  std::vector<NodeSet> svars;
  for (const auto& s : fig4a.separators()) svars.push_back(s.vars);
  std::sort(svars.begin(), svars.end());
  const std::vector<NodeSet> expect{sorted_unique({paper::A, paper::C, paper::E}),
                                    sorted_unique({paper::A, paper::D, paper::E})};
  auto want = expect;
  std::sort(want.begin(), want.end());
  CHECK(svars == want);
  CHECK(fig4a.total_size() == std::pair<std::int64_t, std::int64_t>{48, 16});
}

TEST_CASE("build rejects covers without a junction tree") {
  const VariableSet vars = binary_vars(3);
  CHECK_THROWS_AS((void)JunctionTree::build({{0, 1}, {1, 2}, {0, 2}}, vars), StructureError);
}

TEST_CASE("a disconnected cover is bridged by an empty separator") {
  const VariableSet vars = binary_vars(4);
  const JunctionTree t = JunctionTree::build({{0, 1}, {2, 3}}, vars);
  CHECK(t.separators().size() == 1);
  CHECK(t.separators()[0].vars.empty());
  CHECK(t.total_size() == std::pair<std::int64_t, std::int64_t>{8, 1});
}

TEST_CASE("total_size of the fig-4c tree and the empty clique") {
  const VariableSet vars = binary_vars(6);
  const CliqueSet cliques{sorted_unique({paper::A, paper::B, paper::E}),
                          sorted_unique({paper::B, paper::C, paper::E}),
                          sorted_unique({paper::F, paper::E, paper::D, paper::A})};
  const JunctionTree t = JunctionTree::build(cliques, vars);
  CHECK(t.total_size() == std::pair<std::int64_t, std::int64_t>{32, 8});

  const JunctionTree empty = JunctionTree::build({NodeSet{}}, vars);
  CHECK(empty.total_size() == std::pair<std::int64_t, std::int64_t>{1, 0});
}

TEST_CASE("initialize: unity model, Eq-5 joint, cover errors") {
  const VariableSet vars = binary_vars(3);
  NetworkModel m;
  m.variables = vars;
  m.graph = ChainGraph({0, 1, 2}, {{0, 1}, {1, 2}}, {});
  JunctionTree t = JunctionTree::build({{0, 1}, {1, 2}}, vars);

  // no potentials: everything stays unity
  initialize(t, m);
  for (const auto& c : t.cliques())
    for (double v : c.belief.values()) CHECK(v == 1.0);

  // a potential that fits no clique
  JunctionTree t2 = t;
  CHECK_THROWS_AS(t2.multiply_in(Potential({0, 2}, {2, 2}, {1, 1, 1, 1})), CoverError);
}

TEST_CASE("initialized tree reproduces the model joint via Eq 5") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const NetworkModel m = mixed_model(seed, 6);
    CompileResult r = compile_structure(m);
    initialize(r.tree, m);
    const auto tree_joint = oracle::joint_from_tree(r.tree, m.variables);
    const auto model_joint = oracle::joint_from_model(m);
    CHECK(oracle::max_abs_diff(tree_joint, model_joint) <= 1e-10);
  }
}

TEST_CASE("propagation: consistency, conservation, fixed point") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const NetworkModel m = mixed_model(seed, 7);
    CompileResult r = compile_structure(m);
    initialize(r.tree, m);
    const auto before = oracle::joint_from_tree(r.tree, m.variables);
    r.tree.propagate();
    const auto after = oracle::joint_from_tree(r.tree, m.variables);
    // Eq-5 conservation up to normalization
    CHECK(oracle::max_abs_diff(before, after) <= 1e-10);

    // consistency: adjacent cliques agree on separator marginals
    for (const auto& s : r.tree.separators()) {
      const Potential ma = marginalize(r.tree.cliques()[static_cast<std::size_t>(s.a)].belief, s.vars);
      const Potential mb = marginalize(r.tree.cliques()[static_cast<std::size_t>(s.b)].belief, s.vars);
      CHECK(approx_equal(ma, mb, 1e-10));
      CHECK(approx_equal(ma, s.belief, 1e-10));
    }

    // propagating again changes nothing
    const auto cliques_before = r.tree.cliques();
    r.tree.propagate();
    for (std::size_t i = 0; i < cliques_before.size(); ++i)
      CHECK(approx_equal(cliques_before[i].belief, r.tree.cliques()[i].belief, 1e-12));
  }
}

TEST_CASE("propagated marginals match brute force") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const NetworkModel m = mixed_model(seed, 8);
    CompileResult r = compile_model(m);
    const auto joint = oracle::joint_from_model(m);
    const auto space = oracle::space_of(m.variables);
    for (VarId v = 0; v < static_cast<VarId>(m.variables.size()); ++v) {
      const Potential q = r.tree.query({v});
      const auto want = oracle::marginal(joint, space, {v});
      for (std::size_t s = 0; s < q.size(); ++s)
        CHECK(std::abs(q[s] - want[s]) <= 1e-10);
    }
  }
}

TEST_CASE("query contract") {
  const NetworkModel m = random_dag_model(3, 6);
  CompileResult r = compile_model(m);

  // full clique: normalized clique belief
  const NodeSet cv = r.tree.cliques()[0].vars;
  const Potential q = r.tree.query(cv);
  CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(approx_equal(q, normalize(r.tree.cliques()[0].belief), 1e-12));

  // empty query: scalar one
  const Potential unit = r.tree.query({});
  CHECK(unit.arity() == 0);
  CHECK(unit[0] == doctest::Approx(1.0));

  // distributions are proper
  for (VarId v = 0; v < 6; ++v) {
    const Potential one = r.tree.query({v});
    double sum = 0;
    for (double x : one.values()) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("query across cliques is refused") {
  const VariableSet vars = binary_vars(3);
  NetworkModel m;
  m.variables = vars;
  m.graph = ChainGraph({0, 1, 2}, {{0, 1}, {1, 2}}, {});
  m.potentials.push_back(Potential({0}, {2}, {0.5, 0.5}));
  m.potentials.push_back(Potential({0, 1}, {2, 2}, {0.5, 0.5, 0.5, 0.5}));
  m.potentials.push_back(Potential({1, 2}, {2, 2}, {0.5, 0.5, 0.5, 0.5}));
  CompileResult r = compile_model(m);
  CHECK_THROWS_AS((void)r.tree.query({0, 2}), UnsupportedQueryError);
  // while the elimination path handles it
  const Potential marg = r.tree.marginal_by_elimination({0, 2});
  CHECK(marg.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginal_by_elimination matches brute force across cliques") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const NetworkModel m = mixed_model(seed, 7);
    CompileResult r = compile_model(m);
    const auto joint = oracle::joint_from_model(m);
    const auto space = oracle::space_of(m.variables);
    Pcg32 rng(seed);
    for (int trial = 0; trial < 5; ++trial) {
      NodeSet target;
      for (VarId v = 0; v < 7; ++v)
        if (rng.next_double() < 0.35) target.push_back(v);
      if (target.empty()) target.push_back(static_cast<VarId>(rng.next() % 7));
      const Potential got = r.tree.marginal_by_elimination(target);
      const auto want = oracle::marginal(joint, space, target);
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-10);
    }
  }
}

TEST_CASE("evidence enters as likelihood and conditions the tree") {
  const NetworkModel m = random_dag_model(11, 6);
  CompileResult r = compile_structure(m);
  initialize(r.tree, m);
  r.tree.set_evidence(2, {1.0, 0.0});  // v2 observed in state 0
  r.tree.propagate();

  const auto joint = oracle::joint_from_model(m);
  const auto space = oracle::space_of(m.variables);
  // conditional marginal of v4 given v2 = 0, by brute force
  const auto m42 = oracle::marginal(joint, space, {2, 4});
  const double denom = m42[0] + m42[1];
  const Potential got = r.tree.query({4});
  CHECK(std::abs(got[0] - m42[0] / denom) <= 1e-10);
  CHECK(std::abs(got[1] - m42[1] / denom) <= 1e-10);
}

TEST_CASE("propagation reports degenerate trees") {
  const VariableSet vars = binary_vars(2);
  NetworkModel m;
  m.variables = vars;
  m.graph = ChainGraph({0, 1}, {{0, 1}}, {});
  JunctionTree t = JunctionTree::build({{0, 1}}, vars);
  t.multiply_in(Potential({0, 1}, {2, 2}, {0, 0, 0, 0}));
  CHECK_THROWS_AS(t.propagate(), InconsistencyError);
}
