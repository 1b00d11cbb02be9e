#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gtpush/patterns.hpp"
#include "gtpush/rational.hpp"
#include "gtpush/schur.hpp"
#include "gtpush/sparse.hpp"

namespace gtpush {

// W^n ∩ [lower, bound]^n in lexicographic order.
std::vector<Row> chamber_states(std::size_t n, int bound, int lower = 0);

// {(x, y) : x ⪯ y, y ∈ W^{n+1} ∩ [0, bound]^{n+1}}.
std::vector<PairState> nested_pair_states(std::size_t n, int bound);

// {(x, y) : x ≺ y, x, y ∈ W_0^n ∩ [0, bound]^n}.
std::vector<PairState> shifted_pair_states(std::size_t n, int bound);

/// Charlier h-transform generator: Q(x, x+e_i) = S_{x+e_i}(q) / S_x(q),
/// diagonal -(q_1 + ... + q_n).
SparseGenerator<Row> q_charlier(std::size_t n, const RateVector& q, int bound);

/// One-step kernel p(x, x') = prod(1 - q_i) S_{x'}(q) / S_x(q) 1[x ≺ x'],
/// restricted to targets inside the box.
StepKernel<Row> kernel_geometric(std::size_t n, const RateVector& q, int bound);

/// Symplectic h-transform generator Q_n on W_0^k, k = ceil(n/2) = |q|.
SparseGenerator<Row> q_symplectic(int n, const RateVector& q, int bound);

// -Q_n(x, x) from the closed form.
Rational q_symplectic_leaving_rate(int n, const RateVector& q, const Row& x);

/// Coupled (X, Y) generator with X driven by the Charlier generator on
/// n coordinates and Y at rate q_{n+1}; |q_ext| = n + 1.
SparseGenerator<PairState> coupling_generator_poisson(std::size_t n, const RateVector& q_ext, int bound);

// The blocking factor b and the pushing factor c of the geometric coupling.
class BlockPushFactors {
 public:
  explicit BlockPushFactors(Rational q) : q_(std::move(q)) {}
  virtual ~BlockPushFactors() = default;

  const Rational& q() const { return q_; }
  // (1-q) 1[v < u] + 1[u = v]
  virtual Rational blocking(int u, int v) const;
  // q^{-v} 1[u <= v] + q^{-u} 1[u > v]
  virtual Rational pushing(int u, int v) const;

 private:
  Rational q_;
};

// Probability that Y moves from y to y' given X moved from x to x'.
Rational coupling_r_factor(const BlockPushFactors& f, const Row& yp, const Row& xp, const Row& x, const Row& y);

// Left hand side of the integrating-out identity:
// sum_{u = v1p}^{min(v2, up)} q^{-u} b(u, v1p) c(up, v2).
Rational block_push_sum(const BlockPushFactors& f, int v1p, int v2, int up);

/// One-step kernel of the coupled geometric recursion,
/// q((x,y),(x',y')) = r(y', x', x, y) p_X(x, x').
StepKernel<PairState> coupling_kernel_geometric(std::size_t n, const RateVector& q_ext, int bound);
StepKernel<PairState> coupling_kernel_geometric(std::size_t n, const RateVector& q_ext, int bound,
                                                const BlockPushFactors& factors);

/// A_0 on {x ≺ y} with X driven by Q_{2n-1}; |q| = n.
SparseGenerator<PairState> coupling_generator_wall_odd_even(std::size_t n, const RateVector& q, int bound);

/// A_0 on {x ⪯ y} with X driven by Q_{2n}; |q_ext| = n + 1.
SparseGenerator<PairState> coupling_generator_wall_even_odd(std::size_t n, const RateVector& q_ext, int bound);

enum class CouplingVariant { poisson, geometric, wall_odd_even, wall_even_odd };

std::string to_string(CouplingVariant v);
CouplingVariant parse_coupling_variant(const std::string& name);

// The weight m(x, y) of each variant, with Schur values cached.
class CouplingWeight {
 public:
  CouplingWeight(CouplingVariant variant, RateVector q);

  CouplingVariant variant() const { return variant_; }
  const RateVector& rates() const { return q_; }

  // Length of the y row for coupling index n, and the length of q it needs.
  static std::size_t y_length(CouplingVariant v, std::size_t n);
  static std::size_t rate_length(CouplingVariant v, std::size_t n);

  Rational operator()(const Row& x, const Row& y);

  // Λ(y, ·): all (x, y) with m(x, y) > 0.
  std::vector<std::pair<PairState, Rational>> lambda_row(const Row& y);

 private:
  CouplingVariant variant_;
  RateVector q_;
  SchurEvaluator schur_;
  SpSchurEvaluator sp_;
};

Rational m_weight(const Row& x, const Row& y, CouplingVariant variant, const RateVector& q_ext);

// Λ(y, ·) as an explicit distribution.
std::vector<std::pair<PairState, Rational>> lambda_kernel(const Row& y, CouplingVariant variant,
                                                          const RateVector& q_ext);

// Λ materialized over the given y states.
LambdaKernel lambda_kernel_matrix(CouplingVariant variant, const RateVector& q_ext,
                                  const std::vector<Row>& y_states, int bound);

}  // namespace gtpush
