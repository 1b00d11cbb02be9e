#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gtpush/patterns.hpp"
#include "gtpush/rational.hpp"

namespace gtpush {

struct Branch {
  Row row;
  Rational coefficient;
};

// All z' ⪯ z with coefficient t^{|z| - |z'|}. For |z| = 1 the single branch
// is the empty row with coefficient t^{z_1}.
std::vector<Branch> branching_standard(const Row& z, const Rational& t);

// Symplectic, even row from odd row: z' ≺ z, z' >= 0, coefficient
// t^{|z'| - |z|}.
std::vector<Branch> branching_sp_even(const Row& z, const Rational& t);

// Symplectic, odd row from even row: z' ⪯ z, z' >= 0, coefficient
// t^{|z| - |z'|}.
std::vector<Branch> branching_sp_odd(const Row& z, const Rational& t);

// Memoized S_z(q_1, ..., q_{|z|}) for a fixed rate vector; rows shorter than q
// use its prefix. S_z = 0 when z is not ordered.
class SchurEvaluator {
 public:
  explicit SchurEvaluator(RateVector q);

  const RateVector& rates() const { return q_; }
  const Rational& operator()(const Row& z);

 private:
  RateVector q_;
  std::map<Row, Rational> memo_;
  Rational zero_{0};
};

// Memoized Sp^n_z(q_1, ..., q_k), k = ceil(n/2) = |z|. Zero off W_0^k.
class SpSchurEvaluator {
 public:
  explicit SpSchurEvaluator(RateVector q);

  const RateVector& rates() const { return q_; }
  const Rational& operator()(int n, const Row& z);

 private:
  RateVector q_;
  std::map<std::pair<int, Row>, Rational> memo_;
  Rational zero_{0};
};

// S_z(q) with |q| = |z|.
Rational schur(const Row& z, const RateVector& q);

// Bialternant det(q_i^{z_j + j - 1}) / det(q_i^{j - 1}). Empty when the
// rates are not distinct.
std::optional<Rational> schur_oracle(const Row& z, const RateVector& q);

// Sp^n_z(q) with |q| = |z| = ceil(n/2).
Rational sp_schur(int n, const Row& z, const RateVector& q);

// Raw sums over enumerated patterns; used to cross-check the recursions.
Rational schur_by_patterns(const Row& z, const RateVector& q);
Rational sp_schur_by_patterns(int n, const Row& z, const RateVector& q);

// Exact determinant by fraction-free elimination over the rationals.
Rational determinant(std::vector<std::vector<Rational>> a);

}  // namespace gtpush
