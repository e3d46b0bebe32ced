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

// Brute-force reference implementations used as test oracles. Everything
// here enumerates full assignment vectors and reads tables through the
// row-major/last-fastest layout contract directly; none of it shares code
// with the library's strided kernels, so the two paths are independent.

#ifndef JTR_TESTS_ORACLE_HPP
#define JTR_TESTS_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "jtr/junction_tree.hpp"
#include "jtr/model.hpp"

namespace oracle {

using jtr::NetworkModel;
using jtr::NodeSet;
using jtr::Potential;
using jtr::VarId;

// Full assignment space over all model variables, in id order.
struct Space {
  std::vector<int> cards;
  std::size_t size() const {
    std::size_t n = 1;
    for (int c : cards) n *= static_cast<std::size_t>(c);
    return n;
  }
  std::vector<int> assignment(std::size_t flat) const {
    std::vector<int> a(cards.size());
    for (std::size_t i = cards.size(); i-- > 0;) {
      a[i] = static_cast<int>(flat % static_cast<std::size_t>(cards[i]));
      flat /= static_cast<std::size_t>(cards[i]);
    }
    return a;
  }
};

inline Space space_of(const jtr::VariableSet& vars) {
  Space s;
  for (const auto& v : vars) s.cards.push_back(v.cardinality);
  return s;
}

// Value of a table at a full assignment (projecting onto its domain).
inline double lookup(const Potential& p, const std::vector<int>& assignment) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < p.domain().size(); ++k)
    idx = idx * static_cast<std::size_t>(p.cards()[k]) +
          static_cast<std::size_t>(assignment[static_cast<std::size_t>(p.domain()[k])]);
  return p.values()[idx];
}

// Joint distribution per Eq (2)/(3)/(4): product over chain components of
// p(K | pa(K)), each with its per-parent-configuration normalizer.
std::vector<double> joint_from_model(const NetworkModel& m);

// Joint belief per Eq (5): product of clique beliefs over product of
// separator beliefs, normalized.
std::vector<double> joint_from_tree(const jtr::JunctionTree& t, const jtr::VariableSet& vars);

// Marginal table over `keep` (result indexed row-major, keep order as given).
std::vector<double> marginal(const std::vector<double>& joint, const Space& s, const NodeSet& keep);

double kl(const std::vector<double>& p, const std::vector<double>& q);

// max_{a,b,c} |p(a,b,c)p(c) - p(a,c)p(b,c)| over the full space; zero iff
// A and B are conditionally independent given C.
double dependence(const std::vector<double>& joint, const Space& s, const NodeSet& a,
                  const NodeSet& b, const NodeSet& c);

inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace oracle

#endif  // JTR_TESTS_ORACLE_HPP
