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

#ifndef JTR_POTENTIAL_HPP
#define JTR_POTENTIAL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jtr/errors.hpp"
#include "jtr/variable.hpp"

namespace jtr {

// Dense non-negative table over an ordered set of discrete variables.
//
// Layout contract: values are stored row-major with the LAST domain
// variable fastest-varying. An empty domain is a single scalar cell.
// This layout is also the file-format contract, so it must not change.
class Potential {
 public:
  // Scalar 1 (multiplicative identity).
  Potential();

  static Potential scalar(double value);
  static Potential ones(std::vector<VarId> domain, std::vector<int> cards);
  static Potential zeros(std::vector<VarId> domain, std::vector<int> cards);

  Potential(std::vector<VarId> domain, std::vector<int> cards, std::vector<double> values);

  const std::vector<VarId>& domain() const { return domain_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  std::size_t size() const { return values_.size(); }
  int arity() const { return static_cast<int>(domain_.size()); }

  bool has(VarId v) const;
  // Position of v in the domain, -1 when absent.
  int slot_of(VarId v) const;
  int card_of(VarId v) const;

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // Flat index of a configuration given per-slot state indices.
  std::size_t flat_index(const std::vector<int>& states) const;

  double sum() const;
  double max_value() const;
  bool is_zero() const;

  // Strides per slot under the layout contract (last slot stride 1).
  std::vector<std::int64_t> strides() const;

 private:
  std::vector<VarId> domain_;
  std::vector<int> cards_;
  std::vector<double> values_;
};

// --- table algebra -----------------------------------------------------

// Pointwise product over the ordered union of the domains (lhs order first,
// then rhs-only variables in rhs order). Shared variables must agree on
// cardinality.
Potential multiply(const Potential& lhs, const Potential& rhs);

// Cellwise quotient with the 0/0 = 0 convention. den.domain must be a
// subset of num.domain; x/0 with x > 0 throws DivideByZeroError.
Potential divide(const Potential& num, const Potential& den);

// Sum out everything not in `keep`; result domain keeps num's order.
Potential marginalize(const Potential& p, const std::vector<VarId>& keep);

// Scale to total mass 1. All-zero tables throw DegeneratePotentialError.
Potential normalize(const Potential& p);

// Sum phi * ln(phi/psi) with 0*ln(0/x) = 0 and phi = psi = 0 contributing 0.
// Domains must hold the same variable set (any order). phi > 0 where
// psi = 0 throws InfiniteDivergenceError.
double kl_divergence(const Potential& phi, const Potential& psi);

// Max over configurations of |sum(phi) - sum(psi)| after marginalizing both
// onto `sub`. Domains must hold the same variable set.
double max_abs_diff(const Potential& phi, const Potential& psi, const std::vector<VarId>& sub);

// Cellwise 1/x with 1/0 = 0 (used for the Eq-3 per-component normalizers,
// where a zero mass marks an impossible parent configuration).
Potential invert_nonzero(const Potential& p);

// True when the two tables hold the same variable set and agree cellwise
// within tol after aligning domain orders.
bool approx_equal(const Potential& a, const Potential& b, double tol);

// Reorder the domain (same variable set) permuting cells accordingly.
Potential reorder(const Potential& p, const std::vector<VarId>& new_domain);

// --- kernel dispatch ----------------------------------------------------
//
// Every cell loop has a serial odometer path and an OpenMP path over the
// flat index. Tables at least this large take the parallel path; tests and
// the benchmark pin the mode by setting the threshold to 0 or SIZE_MAX.
std::size_t tables_parallel_threshold();
void set_tables_parallel_threshold(std::size_t cells);

}  // namespace jtr

#endif  // JTR_POTENTIAL_HPP
