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

// Times the serial odometer kernels against the OpenMP ones on dense table
// workloads, plus candidate scoring through both paths. The parallel path
// is forced by dropping the dispatch threshold to zero.

#include <chrono>
#include <cstdio>
#include <vector>

#include "jtr/compile.hpp"
#include "jtr/potential.hpp"
#include "jtr/reduce.hpp"
#include "jtr/rng.hpp"
#include "jtr/synthetic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace jtr;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Potential random_potential(Pcg32& rng, int arity, int card, VarId first_id) {
  std::vector<VarId> dom;
  std::vector<int> cards;
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) {
    dom.push_back(first_id + i);
    cards.push_back(card);
    n *= static_cast<std::size_t>(card);
  }
  std::vector<double> vals(n);
  for (double& v : vals) v = 0.01 + rng.next_double();
  return Potential(dom, cards, std::move(vals));
}

template <class Fn>
double time_op(Fn&& fn, int reps) {
  fn();  // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return seconds_since(t0) / reps;
}

void bench_tables(int arity, int card, int reps) {
  Pcg32 rng(42);
  const Potential a = random_potential(rng, arity, card, 0);
  const Potential b = random_potential(rng, arity, card, arity / 2);  // half-overlapping domains
  const std::vector<VarId> keep{0, 1, 2};

  set_tables_parallel_threshold(std::size_t(-1));  // always serial
  const double mul_s = time_op([&] { (void)multiply(a, b); }, reps);
  const double marg_s = time_op([&] { (void)marginalize(a, keep); }, reps);
  set_tables_parallel_threshold(0);  // always parallel
  const double mul_p = time_op([&] { (void)multiply(a, b); }, reps);
  const double marg_p = time_op([&] { (void)marginalize(a, keep); }, reps);
  set_tables_parallel_threshold(std::size_t(1) << 14);

  const std::size_t cells = multiply(a, b).size();
  std::printf("multiply    %9zu cells  serial %8.3f ms  parallel %8.3f ms  speedup %.2fx\n",
              cells, mul_s * 1e3, mul_p * 1e3, mul_s / mul_p);
  std::printf("marginalize %9zu cells  serial %8.3f ms  parallel %8.3f ms  speedup %.2fx\n",
              a.size(), marg_s * 1e3, marg_p * 1e3, marg_s / marg_p);
}

void bench_scoring(int reps) {
  const NetworkModel m = random_chain_model(7, 26, 3);
  CompileResult r = compile_model(m);
  const ChainGraph moral = m.graph.moralize();
  std::vector<RemovalCandidate> cands = removable_links(r.tree, moral);

  const double serial = time_op(
      [&] {
        auto local = cands;
        for (auto& c : local) {
          c.divergence = -1.0;
          score_candidate(r.tree, c);
        }
      },
      reps);
  const double parallel = time_op(
      [&] {
        auto local = cands;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(local.size()); ++i) {
          local[static_cast<std::size_t>(i)].divergence = -1.0;
          score_candidate(r.tree, local[static_cast<std::size_t>(i)]);
        }
      },
      reps);
  std::printf("scoring     %9zu cands  serial %8.3f ms  parallel %8.3f ms  speedup %.2fx\n",
              cands.size(), serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both paths run serially\n");
#endif
  bench_tables(10, 3, 5);  // 15-var product, ~14M cells
  bench_tables(16, 2, 3);  // 24-var product, ~17M cells
  bench_scoring(3);
  return 0;
}
