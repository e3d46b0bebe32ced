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

#include "jtr/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

namespace jtr {

namespace {

constexpr std::size_t kMaxCells = std::size_t(1) << 28;

// Threshold above which cellwise kernels use OpenMP. Marginalization sums
// each output cell in a fixed odometer order, so results do not depend on
// the path taken.
std::size_t g_parallel_threshold = std::size_t(1) << 14;

std::size_t checked_cell_count(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) {
    if (c < 1) throw DomainError("cardinality must be >= 1");
    if (n > kMaxCells / static_cast<std::size_t>(c))
      throw TableTooLargeError("table too large: more than 2^28 cells");
    n *= static_cast<std::size_t>(c);
  }
  return n;
}

}  // namespace

std::size_t tables_parallel_threshold() { return g_parallel_threshold; }
void set_tables_parallel_threshold(std::size_t cells) { g_parallel_threshold = cells; }

Potential::Potential() : values_(1, 1.0) {}

Potential Potential::scalar(double value) {
  Potential p;
  p.values_[0] = value;
  return p;
}

Potential::Potential(std::vector<VarId> domain, std::vector<int> cards, std::vector<double> values)
    : domain_(std::move(domain)), cards_(std::move(cards)), values_(std::move(values)) {
  if (domain_.size() != cards_.size()) throw DomainError("domain/cardinality size mismatch");
  for (std::size_t i = 0; i < domain_.size(); ++i)
    for (std::size_t j = i + 1; j < domain_.size(); ++j)
      if (domain_[i] == domain_[j])
        throw DomainError("duplicate variable " + std::to_string(domain_[i]) + " in domain");
  const std::size_t n = checked_cell_count(cards_);
  if (values_.size() != n)
    throw DomainError("value count " + std::to_string(values_.size()) + " does not match domain size " +
                      std::to_string(n));
  for (double v : values_)
    if (v < 0.0 || !std::isfinite(v)) throw DomainError("potential cells must be finite and >= 0");
}

Potential Potential::ones(std::vector<VarId> domain, std::vector<int> cards) {
  const std::size_t n = checked_cell_count(cards);
  return Potential(std::move(domain), std::move(cards), std::vector<double>(n, 1.0));
}

Potential Potential::zeros(std::vector<VarId> domain, std::vector<int> cards) {
  const std::size_t n = checked_cell_count(cards);
  return Potential(std::move(domain), std::move(cards), std::vector<double>(n, 0.0));
}

bool Potential::has(VarId v) const { return slot_of(v) >= 0; }

int Potential::slot_of(VarId v) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (domain_[i] == v) return static_cast<int>(i);
  return -1;
}

int Potential::card_of(VarId v) const {
  const int s = slot_of(v);
  if (s < 0) throw DomainError("variable " + std::to_string(v) + " not in domain");
  return cards_[static_cast<std::size_t>(s)];
}

std::vector<std::int64_t> Potential::strides() const {
  std::vector<std::int64_t> st(domain_.size());
  std::int64_t acc = 1;
  for (std::size_t i = domain_.size(); i-- > 0;) {
    st[i] = acc;
    acc *= cards_[i];
  }
  return st;
}

std::size_t Potential::flat_index(const std::vector<int>& states) const {
  if (states.size() != domain_.size()) throw DomainError("state vector arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (states[i] < 0 || states[i] >= cards_[i]) throw DomainError("state index out of range");
    idx = idx * static_cast<std::size_t>(cards_[i]) + static_cast<std::size_t>(states[i]);
  }
  return idx;
}

double Potential::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double Potential::max_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

bool Potential::is_zero() const {
  for (double v : values_)
    if (v != 0.0) return false;
  return true;
}

namespace {

// Union-domain plan for a binary cellwise op: for every slot of the result
// domain, the stride of that slot in each operand (0 when absent).
struct BinaryPlan {
  std::vector<VarId> domain;
  std::vector<int> cards;
  std::vector<std::int64_t> stride_l, stride_r;
  std::size_t cells = 1;
};

BinaryPlan make_binary_plan(const Potential& lhs, const Potential& rhs) {
  BinaryPlan plan;
  plan.domain = lhs.domain();
  plan.cards = lhs.cards();
  for (std::size_t i = 0; i < rhs.domain().size(); ++i) {
    const VarId v = rhs.domain()[i];
    const int sl = lhs.slot_of(v);
    if (sl < 0) {
      plan.domain.push_back(v);
      plan.cards.push_back(rhs.cards()[i]);
    } else if (lhs.cards()[static_cast<std::size_t>(sl)] != rhs.cards()[i]) {
      throw DomainConflictError("variable " + std::to_string(v) + " has cardinality " +
                                std::to_string(lhs.cards()[static_cast<std::size_t>(sl)]) + " vs " +
                                std::to_string(rhs.cards()[i]));
    }
  }
  plan.cells = checked_cell_count(plan.cards);

  const auto sl = lhs.strides();
  const auto sr = rhs.strides();
  plan.stride_l.assign(plan.domain.size(), 0);
  plan.stride_r.assign(plan.domain.size(), 0);
  for (std::size_t i = 0; i < plan.domain.size(); ++i) {
    const int a = lhs.slot_of(plan.domain[i]);
    const int b = rhs.slot_of(plan.domain[i]);
    if (a >= 0) plan.stride_l[i] = sl[static_cast<std::size_t>(a)];
    if (b >= 0) plan.stride_r[i] = sr[static_cast<std::size_t>(b)];
  }
  return plan;
}

template <class Op>
Potential apply_binary(const Potential& lhs, const Potential& rhs, Op op) {
  const BinaryPlan plan = make_binary_plan(lhs, rhs);
  std::vector<double> out(plan.cells);
  const double* a = lhs.values().data();
  const double* b = rhs.values().data();
  const std::size_t m = plan.domain.size();

  // Odometer over one index range; the block start is decomposed once, so
  // per-cell cost is O(1) amortized on either path.
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    std::vector<int> digit(m);
    std::int64_t ia = 0, ib = 0;
    std::size_t rem = lo;
    for (std::size_t k = m; k-- > 0;) {
      digit[k] = static_cast<int>(rem % static_cast<std::size_t>(plan.cards[k]));
      rem /= static_cast<std::size_t>(plan.cards[k]);
      ia += digit[k] * plan.stride_l[k];
      ib += digit[k] * plan.stride_r[k];
    }
    for (std::size_t flat = lo; flat < hi; ++flat) {
      out[flat] = op(a[ia], b[ib]);
      for (std::size_t k = m; k-- > 0;) {
        ++digit[k];
        ia += plan.stride_l[k];
        ib += plan.stride_r[k];
        if (digit[k] < plan.cards[k]) break;
        digit[k] = 0;
        ia -= plan.stride_l[k] * plan.cards[k];
        ib -= plan.stride_r[k] * plan.cards[k];
      }
    }
  };

  if (plan.cells >= g_parallel_threshold && plan.cells > 1) {
    constexpr std::size_t kBlock = std::size_t(1) << 13;
    const std::int64_t nblocks = static_cast<std::int64_t>((plan.cells + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
    for (std::int64_t bi = 0; bi < nblocks; ++bi) {
      const std::size_t lo = static_cast<std::size_t>(bi) * kBlock;
      run_range(lo, std::min(plan.cells, lo + kBlock));
    }
  } else {
    run_range(0, plan.cells);
  }
  return Potential(std::move(plan.domain), std::move(plan.cards), std::move(out));
}

}  // namespace

Potential multiply(const Potential& lhs, const Potential& rhs) {
  return apply_binary(lhs, rhs, [](double x, double y) { return x * y; });
}

Potential divide(const Potential& num, const Potential& den) {
  for (VarId v : den.domain())
    if (!num.has(v))
      throw DomainError("divisor variable " + std::to_string(v) + " not in numerator domain");
  std::atomic<bool> div_zero{false};
  Potential out = apply_binary(num, den, [&div_zero](double x, double y) {
    if (y == 0.0) {
      if (x != 0.0) div_zero.store(true, std::memory_order_relaxed);
      return 0.0;
    }
    return x / y;
  });
  if (div_zero.load())
    throw DivideByZeroError("x/0 with x > 0: inconsistent tree or bad divisor");
  return out;
}

namespace {

struct MarginalPlan {
  std::vector<VarId> domain;           // kept, in source order
  std::vector<int> cards;              // kept cards
  std::vector<std::int64_t> src_kept;  // source stride per kept slot
  std::vector<int> elim_cards;
  std::vector<std::int64_t> src_elim;  // source stride per eliminated slot
  std::size_t out_cells = 1, elim_cells = 1;
};

MarginalPlan make_marginal_plan(const Potential& p, const std::vector<VarId>& keep) {
  for (VarId v : keep)
    if (!p.has(v)) throw DomainError("keep variable " + std::to_string(v) + " not in domain");
  MarginalPlan plan;
  const auto st = p.strides();
  for (std::size_t i = 0; i < p.domain().size(); ++i) {
    const bool kept = std::find(keep.begin(), keep.end(), p.domain()[i]) != keep.end();
    if (kept) {
      plan.domain.push_back(p.domain()[i]);
      plan.cards.push_back(p.cards()[i]);
      plan.src_kept.push_back(st[i]);
      plan.out_cells *= static_cast<std::size_t>(p.cards()[i]);
    } else {
      plan.elim_cards.push_back(p.cards()[i]);
      plan.src_elim.push_back(st[i]);
      plan.elim_cells *= static_cast<std::size_t>(p.cards()[i]);
    }
  }
  return plan;
}

// Sum of the elimination block anchored at `base`. Fixed odometer order, so
// every caller gets identical floating-point results.
double sum_block(const double* v, std::int64_t base, const MarginalPlan& plan) {
  const std::size_t m = plan.elim_cards.size();
  if (m == 0) return v[base];
  std::vector<int> digit(m, 0);
  std::int64_t off = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < plan.elim_cells; ++i) {
    acc += v[base + off];
    for (std::size_t k = m; k-- > 0;) {
      ++digit[k];
      off += plan.src_elim[k];
      if (digit[k] < plan.elim_cards[k]) break;
      digit[k] = 0;
      off -= plan.src_elim[k] * plan.elim_cards[k];
    }
  }
  return acc;
}

}  // namespace

Potential marginalize(const Potential& p, const std::vector<VarId>& keep) {
  const MarginalPlan plan = make_marginal_plan(p, keep);
  std::vector<double> out(plan.out_cells);
  const double* v = p.values().data();
  const std::size_t m = plan.domain.size();

  auto run_range = [&](std::size_t lo, std::size_t hi) {
    std::vector<int> digit(m);
    std::int64_t base = 0;
    std::size_t rem = lo;
    for (std::size_t k = m; k-- > 0;) {
      digit[k] = static_cast<int>(rem % static_cast<std::size_t>(plan.cards[k]));
      rem /= static_cast<std::size_t>(plan.cards[k]);
      base += digit[k] * plan.src_kept[k];
    }
    for (std::size_t flat = lo; flat < hi; ++flat) {
      out[flat] = sum_block(v, base, plan);
      for (std::size_t k = m; k-- > 0;) {
        ++digit[k];
        base += plan.src_kept[k];
        if (digit[k] < plan.cards[k]) break;
        digit[k] = 0;
        base -= plan.src_kept[k] * plan.cards[k];
      }
    }
  };

  if (p.size() >= g_parallel_threshold && plan.out_cells > 1) {
    // block size adapts so each task sums roughly the same cell count
    const std::size_t per_out = std::max<std::size_t>(plan.elim_cells, 1);
    const std::size_t kBlock = std::max<std::size_t>(1, (std::size_t(1) << 13) / per_out);
    const std::int64_t nblocks = static_cast<std::int64_t>((plan.out_cells + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
    for (std::int64_t bi = 0; bi < nblocks; ++bi) {
      const std::size_t lo = static_cast<std::size_t>(bi) * kBlock;
      run_range(lo, std::min(plan.out_cells, lo + kBlock));
    }
  } else {
    run_range(0, plan.out_cells);
  }
  return Potential(plan.domain, plan.cards, std::move(out));
}

Potential normalize(const Potential& p) {
  const double total = p.sum();
  if (total <= 0.0) throw DegeneratePotentialError("cannot normalize an all-zero table");
  Potential out = p;
  for (double& v : out.values()) v /= total;
  return out;
}

Potential invert_nonzero(const Potential& p) {
  Potential out = p;
  for (double& v : out.values()) v = (v == 0.0) ? 0.0 : 1.0 / v;
  return out;
}

Potential reorder(const Potential& p, const std::vector<VarId>& new_domain) {
  if (new_domain.size() != p.domain().size())
    throw DomainError("reorder: domain size mismatch");
  if (new_domain == p.domain()) return p;
  std::vector<int> cards(new_domain.size());
  for (std::size_t i = 0; i < new_domain.size(); ++i) cards[i] = p.card_of(new_domain[i]);
  Potential out = Potential::zeros(new_domain, cards);
  // Walk the source once, tracking the destination flat index.
  const auto dst_strides = out.strides();
  std::vector<std::int64_t> dst_per_src(p.domain().size());
  for (std::size_t i = 0; i < p.domain().size(); ++i) {
    const int s = out.slot_of(p.domain()[i]);
    if (s < 0) throw DomainError("reorder: domains are not a permutation");
    dst_per_src[i] = dst_strides[static_cast<std::size_t>(s)];
  }
  const std::size_t m = p.domain().size();
  std::vector<int> digit(m, 0);
  std::int64_t dst = 0;
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    out[static_cast<std::size_t>(dst)] = p[flat];
    for (std::size_t k = m; k-- > 0;) {
      ++digit[k];
      dst += dst_per_src[k];
      if (digit[k] < p.cards()[k]) break;
      digit[k] = 0;
      dst -= dst_per_src[k] * p.cards()[k];
    }
  }
  return out;
}

namespace {

void require_same_varset(const Potential& a, const Potential& b, const char* what) {
  if (a.domain().size() != b.domain().size())
    throw DomainError(std::string(what) + ": domains differ in size");
  for (VarId v : a.domain())
    if (!b.has(v)) throw DomainError(std::string(what) + ": domains hold different variables");
}

}  // namespace

double kl_divergence(const Potential& phi, const Potential& psi) {
  require_same_varset(phi, psi, "kl_divergence");
  const Potential q = reorder(psi, phi.domain());
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double p = phi[i], r = q[i];
    if (p == 0.0) continue;  // 0 * ln(0/x) = 0, including the phi = psi = 0 cell
    if (r == 0.0)
      throw InfiniteDivergenceError("phi > 0 where psi = 0");
    acc += p * std::log(p / r);
  }
  return acc < 0.0 ? 0.0 : acc;  // clamp rounding noise; KL >= 0 for matched masses
}

double max_abs_diff(const Potential& phi, const Potential& psi, const std::vector<VarId>& sub) {
  require_same_varset(phi, psi, "max_abs_diff");
  for (VarId v : sub)
    if (!phi.has(v)) throw DomainError("max_abs_diff: sub variable not in domain");
  const Potential a = marginalize(phi, sub);
  const Potential b = reorder(marginalize(psi, sub), a.domain());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool approx_equal(const Potential& a, const Potential& b, double tol) {
  if (a.domain().size() != b.domain().size()) return false;
  for (VarId v : a.domain())
    if (!b.has(v)) return false;
  const Potential r = reorder(b, a.domain());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - r[i]) > tol) return false;
  return true;
}

}  // namespace jtr
