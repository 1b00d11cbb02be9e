#include "gtpush/intertwine.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace gtpush {

std::string to_string(VerificationStatus s) {
  switch (s) {
    case VerificationStatus::pass: return "pass";
    case VerificationStatus::fail: return "fail";
    case VerificationStatus::inapplicable: return "inapplicable";
  }
  return "unknown";
}

void VerificationReport::merge(const VerificationReport& other) {
  states_checked += other.states_checked;
  entries_compared += other.entries_compared;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  if (other.max_discrepancy > max_discrepancy) max_discrepancy = other.max_discrepancy;
  if (status == VerificationStatus::inapplicable || other.status == VerificationStatus::inapplicable)
    status = VerificationStatus::inapplicable;
  else
    status = violations.empty() ? VerificationStatus::pass : VerificationStatus::fail;
}

template <class Y, class P>
VerificationReport verify_intertwining(const std::string& case_id, const SparseMatrix<Y, Y>& left,
                                       const SparseMatrix<Y, P>& lambda, const SparseMatrix<P, P>& right) {
  VerificationReport report;
  report.case_id = case_id;
  report.note = "exact check at interior states (every coordinate <= " + std::to_string(left.bound() - 1) + ")";
  for (const auto& y : left.states()) {
    if (!left.is_interior(y)) continue;
    std::map<P, Rational> lhs, rhs;
    for (const auto& [yt, rate] : left.row(y))
      for (const auto& [p, mass] : lambda.row(yt)) lhs[p] += rate * mass;
    for (const auto& [p0, mass] : lambda.row(y))
      for (const auto& [p, rate] : right.row(p0)) rhs[p] += mass * rate;

    std::set<P> keys;
    for (const auto& [p, v] : lhs) keys.insert(p);
    for (const auto& [p, v] : rhs) keys.insert(p);
    for (const auto& p : keys) {
      if (!right.is_interior(p)) continue;
      const Rational l = lhs.count(p) ? lhs[p] : Rational(0);
      const Rational r = rhs.count(p) ? rhs[p] : Rational(0);
      ++report.entries_compared;
      if (l != r) {
        Rational diff = abs(l - r);
        if (diff > report.max_discrepancy) report.max_discrepancy = diff;
        report.violations.push_back({format_state(y), format_state(p), l, r});
      }
    }
    ++report.states_checked;
  }
  report.status = report.violations.empty() ? VerificationStatus::pass : VerificationStatus::fail;
  return report;
}

template VerificationReport verify_intertwining<Row, PairState>(const std::string&, const SparseMatrix<Row, Row>&,
                                                                const SparseMatrix<Row, PairState>&,
                                                                const SparseMatrix<PairState, PairState>&);

VerificationReport verify_generator_intertwining(const SparseGenerator<Row>& q_y, const LambdaKernel& lambda,
                                                 const SparseGenerator<PairState>& a, const std::string& case_id) {
  return verify_intertwining(case_id, q_y, lambda, a);
}

VerificationReport verify_kernel_intertwining(const StepKernel<Row>& p_y, const LambdaKernel& lambda,
                                              const StepKernel<PairState>& q_step, const std::string& case_id) {
  return verify_intertwining(case_id, p_y, lambda, q_step);
}

template <class S>
VerificationReport verify_conservative(const SparseGenerator<S>& q, const std::string& case_id) {
  VerificationReport report;
  report.case_id = case_id;
  report.note = "row sums at interior states (every coordinate <= " + std::to_string(q.bound() - 1) + ")";
  for (const auto& s : q.states()) {
    if (!q.is_interior(s)) continue;
    ++report.states_checked;
    Rational sum = 0;
    for (const auto& [to, v] : q.row(s)) {
      ++report.entries_compared;
      if (to != s && v < 0) report.violations.push_back({format_state(s), format_state(to), v, Rational(0)});
      sum += v;
    }
    if (sum != 0) {
      Rational diff = abs(sum);
      if (diff > report.max_discrepancy) report.max_discrepancy = diff;
      report.violations.push_back({format_state(s), "row-sum", sum, Rational(0)});
    }
  }
  report.status = report.violations.empty() ? VerificationStatus::pass : VerificationStatus::fail;
  return report;
}

template VerificationReport verify_conservative<Row>(const SparseGenerator<Row>&, const std::string&);
template VerificationReport verify_conservative<PairState>(const SparseGenerator<PairState>&, const std::string&);

std::string IntertwiningCase::id() const {
  std::string rates;
  for (std::size_t i = 0; i < q.size(); ++i) rates += (i ? "," : "") + to_string(q[i]);
  return to_string(variant) + " n=" + std::to_string(n) + " q=(" + rates + ") B=" + std::to_string(bound);
}

IntertwiningCase build_intertwining_case(CouplingVariant variant, std::size_t n, const RateVector& q, int bound) {
  if (n < 1) throw std::invalid_argument("intertwining case needs n >= 1");
  if (q.size() != CouplingWeight::rate_length(variant, n))
    throw std::invalid_argument("rate vector of length " + std::to_string(q.size()) + " does not fit variant " +
                                to_string(variant) + " with n=" + std::to_string(n));
  IntertwiningCase c{variant, n, q, bound, {}, {}, {}};
  switch (variant) {
    case CouplingVariant::poisson:
      c.left = q_charlier(n + 1, q, bound);
      c.right = coupling_generator_poisson(n, q, bound);
      break;
    case CouplingVariant::geometric:
      c.left = kernel_geometric(n + 1, q, bound);
      c.right = coupling_kernel_geometric(n, q, bound);
      break;
    case CouplingVariant::wall_odd_even:
      c.left = q_symplectic(static_cast<int>(2 * n), q, bound);
      c.right = coupling_generator_wall_odd_even(n, q, bound);
      break;
    case CouplingVariant::wall_even_odd:
      c.left = q_symplectic(static_cast<int>(2 * n + 1), q, bound);
      c.right = coupling_generator_wall_even_odd(n, q, bound);
      break;
  }
  c.lambda = lambda_kernel_matrix(variant, q, c.left.states(), bound);
  return c;
}

VerificationReport verify_case(const IntertwiningCase& c) {
  if (c.variant == CouplingVariant::geometric) return verify_kernel_intertwining(c.left, c.lambda, c.right, c.id());
  return verify_generator_intertwining(c.left, c.lambda, c.right, c.id());
}

template <class S>
DenseKernel<S>::DenseKernel(std::vector<S> states)
    : states_(std::move(states)), data_(states_.size() * states_.size(), 0.0) {
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

template <class S>
std::vector<double> DenseKernel<S>::row(std::size_t i) const {
  const std::size_t n = states_.size();
  return std::vector<double>(data_.begin() + static_cast<long>(i * n), data_.begin() + static_cast<long>((i + 1) * n));
}

namespace {

using SparseRows = std::vector<std::vector<std::pair<std::size_t, double>>>;

template <class S>
SparseRows to_double_rows(const SparseMatrix<S, S>& m, const std::map<S, std::size_t>& index, double scale,
                          bool add_identity) {
  SparseRows rows(m.states().size());
  for (std::size_t i = 0; i < m.states().size(); ++i) {
    bool diag_seen = false;
    for (const auto& [to, v] : m.row(m.states()[i])) {
      auto it = index.find(to);
      if (it == index.end()) continue;
      double value = to_double(v) * scale;
      if (add_identity && it->second == i) {
        value += 1.0;
        diag_seen = true;
      }
      rows[i].emplace_back(it->second, value);
    }
    if (add_identity && !diag_seen) rows[i].emplace_back(i, 1.0);
  }
  return rows;
}

template <class S>
std::map<S, std::size_t> make_index(const std::vector<S>& states) {
  std::map<S, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);
  return index;
}

template <class S>
double uniformization_rate(const SparseGenerator<S>& q) {
  double c = 0;
  for (const auto& s : q.states()) c = std::max(c, std::fabs(to_double(q.at(s, s))));
  return c;
}

std::vector<double> uniformized_row(const SparseRows& jump, std::size_t start, double lambda_t, double tol) {
  const std::size_t n = jump.size();
  std::vector<double> v(n, 0.0), next(n, 0.0), acc(n, 0.0);
  v[start] = 1.0;
  if (lambda_t == 0.0) return v;
  double cumulative = 0.0;
  for (long k = 0;; ++k) {
    double w = std::exp(-lambda_t + static_cast<double>(k) * std::log(lambda_t) - std::lgamma(static_cast<double>(k) + 1.0));
    for (std::size_t i = 0; i < n; ++i) acc[i] += w * v[i];
    cumulative += w;
    if (1.0 - cumulative < tol && static_cast<double>(k) > lambda_t) break;
    if (k > 100000) throw std::runtime_error("uniformization did not converge");
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] == 0.0) continue;
      for (const auto& [j, p] : jump[i]) next[j] += v[i] * p;
    }
    std::swap(v, next);
  }
  return acc;
}

}  // namespace

template <class S>
std::vector<double> semigroup_row(const SparseGenerator<S>& q, const S& init, const Rational& t, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("semigroup: tol must be positive");
  if (t < 0) throw std::invalid_argument("semigroup: t must be nonnegative");
  auto index = make_index(q.states());
  auto it = index.find(init);
  if (it == index.end()) throw std::invalid_argument("semigroup: initial state outside the space");
  double c = uniformization_rate(q);
  if (c == 0.0) c = 1.0;
  auto jump = to_double_rows(q, index, 1.0 / c, true);
  return uniformized_row(jump, it->second, c * to_double(t), tol);
}

template <class S>
DenseKernel<S> semigroup(const SparseGenerator<S>& q, const Rational& t, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("semigroup: tol must be positive");
  if (t < 0) throw std::invalid_argument("semigroup: t must be nonnegative");
  DenseKernel<S> out(q.states());
  auto index = make_index(q.states());
  double c = uniformization_rate(q);
  if (c == 0.0) c = 1.0;
  auto jump = to_double_rows(q, index, 1.0 / c, true);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto r = uniformized_row(jump, i, c * to_double(t), tol);
    for (std::size_t j = 0; j < r.size(); ++j) out(i, j) = r[j];
  }
  return out;
}

template <class S>
std::vector<double> kernel_power_row(const StepKernel<S>& k, const S& init, int steps) {
  if (steps < 0) throw std::invalid_argument("kernel_power_row: steps must be nonnegative");
  auto index = make_index(k.states());
  auto it = index.find(init);
  if (it == index.end()) throw std::invalid_argument("kernel_power_row: initial state outside the space");
  auto rows = to_double_rows(k, index, 1.0, false);
  std::vector<double> v(rows.size(), 0.0), next(rows.size(), 0.0);
  v[it->second] = 1.0;
  for (int s = 0; s < steps; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (v[i] == 0.0) continue;
      for (const auto& [j, p] : rows[i]) next[j] += v[i] * p;
    }
    std::swap(v, next);
  }
  return v;
}

template class DenseKernel<Row>;
template class DenseKernel<PairState>;
template std::vector<double> semigroup_row<Row>(const SparseGenerator<Row>&, const Row&, const Rational&, double);
template std::vector<double> semigroup_row<PairState>(const SparseGenerator<PairState>&, const PairState&,
                                                      const Rational&, double);
template DenseKernel<Row> semigroup<Row>(const SparseGenerator<Row>&, const Rational&, double);
template DenseKernel<PairState> semigroup<PairState>(const SparseGenerator<PairState>&, const Rational&, double);
template std::vector<double> kernel_power_row<Row>(const StepKernel<Row>&, const Row&, int);
template std::vector<double> kernel_power_row<PairState>(const StepKernel<PairState>&, const PairState&, int);

double semigroup_intertwining_discrepancy(const IntertwiningCase& c, const Rational& t, double tol) {
  if (c.variant == CouplingVariant::geometric)
    throw std::invalid_argument("semigroup check applies to continuous time cases");
  auto py = semigroup(c.left, t, tol);
  auto pa = semigroup(c.right, t, tol);
  const auto& pair_states = c.right.states();
  auto pair_index = make_index(pair_states);

  std::vector<std::vector<std::pair<std::size_t, double>>> lambda(py.size());
  for (std::size_t i = 0; i < py.size(); ++i)
    for (const auto& [p, w] : c.lambda.row(py.states()[i])) lambda[i].emplace_back(pair_index.at(p), to_double(w));

  double worst = 0.0;
  std::vector<double> lhs(pair_states.size()), rhs(pair_states.size());
  for (std::size_t i = 0; i < py.size(); ++i) {
    std::fill(lhs.begin(), lhs.end(), 0.0);
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (std::size_t k = 0; k < py.size(); ++k) {
      double p = py(i, k);
      if (p == 0.0) continue;
      for (const auto& [j, w] : lambda[k]) lhs[j] += p * w;
    }
    for (const auto& [j0, w] : lambda[i])
      for (std::size_t j = 0; j < pair_states.size(); ++j) rhs[j] += w * pa(j0, j);
    for (std::size_t j = 0; j < pair_states.size(); ++j) worst = std::max(worst, std::fabs(lhs[j] - rhs[j]));
  }
  return worst;
}

}  // namespace gtpush
