#pragma once

#include <map>
#include <string>
#include <vector>

#include "gtpush/kernels.hpp"
#include "gtpush/rational.hpp"
#include "gtpush/sparse.hpp"

namespace gtpush {

enum class VerificationStatus { pass, fail, inapplicable };

std::string to_string(VerificationStatus s);

struct Violation {
  std::string left;
  std::string right;
  Rational lhs;
  Rational rhs;
};

struct VerificationReport {
  std::string case_id;
  std::size_t states_checked = 0;
  std::size_t entries_compared = 0;
  std::vector<Violation> violations;
  Rational max_discrepancy = 0;
  VerificationStatus status = VerificationStatus::pass;
  std::string note;

  bool passed() const { return status == VerificationStatus::pass; }
  // Associative; used to combine reports over disjoint sets of rows.
  void merge(const VerificationReport& other);
};

// Checks L Λ = Λ R entrywise in exact arithmetic for every interior left
// state and every interior right-hand target. All jumps of the continuous
// time objects have reach 1, so sources of interior targets are present.
template <class Y, class P>
VerificationReport verify_intertwining(const std::string& case_id, const SparseMatrix<Y, Y>& left,
                                       const SparseMatrix<Y, P>& lambda, const SparseMatrix<P, P>& right);

// Q_Y Λ = Λ A.
VerificationReport verify_generator_intertwining(const SparseGenerator<Row>& q_y, const LambdaKernel& lambda,
                                                 const SparseGenerator<PairState>& a,
                                                 const std::string& case_id = "generator");

// p_Y Λ = Λ q, with both kernels evaluated entrywise (targets beyond the
// box never enter the check for interior arguments).
VerificationReport verify_kernel_intertwining(const StepKernel<Row>& p_y, const LambdaKernel& lambda,
                                              const StepKernel<PairState>& q_step,
                                              const std::string& case_id = "kernel");

// Row sums exactly zero at interior states.
template <class S>
VerificationReport verify_conservative(const SparseGenerator<S>& q, const std::string& case_id = "conservative");

// The three objects of one intertwining: the marginal operator on Y, Λ and
// the coupled operator on (X, Y).
struct IntertwiningCase {
  CouplingVariant variant;
  std::size_t n;
  RateVector q;
  int bound;
  SparseGenerator<Row> left;
  LambdaKernel lambda;
  SparseGenerator<PairState> right;

  std::string id() const;
};

IntertwiningCase build_intertwining_case(CouplingVariant variant, std::size_t n, const RateVector& q, int bound);
VerificationReport verify_case(const IntertwiningCase& c);

// Dense transition matrix over the states of a truncated generator.
template <class S>
class DenseKernel {
 public:
  DenseKernel() = default;
  explicit DenseKernel(std::vector<S> states);

  const std::vector<S>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::size_t index(const S& s) const { return index_.at(s); }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * states_.size() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * states_.size() + j]; }
  std::vector<double> row(std::size_t i) const;

 private:
  std::vector<S> states_;
  std::map<S, std::size_t> index_;
  std::vector<double> data_;
};

// Transition law at time t from `init` by uniformization: a Poisson(c t)
// mixture of powers of I + Q / c with c = max |Q(x, x)|, truncated once the
// remaining Poisson mass is below tol.
template <class S>
std::vector<double> semigroup_row(const SparseGenerator<S>& q, const S& init, const Rational& t, double tol);

template <class S>
DenseKernel<S> semigroup(const SparseGenerator<S>& q, const Rational& t, double tol);

// Law after `steps` steps of a truncated step kernel, in floating point.
template <class S>
std::vector<double> kernel_power_row(const StepKernel<S>& k, const S& init, int steps);

// max |(p_t Λ)(y, v) - (Λ q_t)(y, v)| over all states of the truncated case.
double semigroup_intertwining_discrepancy(const IntertwiningCase& c, const Rational& t, double tol);

}  // namespace gtpush
