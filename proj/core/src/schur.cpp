#include "gtpush/schur.hpp"

#include <stdexcept>

namespace gtpush {

std::vector<Branch> branching_standard(const Row& z, const Rational& t) {
  std::vector<Branch> out;
  if (z.empty()) return out;
  const int total = row_sum(z);
  for_each_nested(z, [&](const Row& zp) { out.push_back({zp, ipow(t, total - row_sum(zp))}); });
  return out;
}

std::vector<Branch> branching_sp_even(const Row& z, const Rational& t) {
  std::vector<Branch> out;
  const int total = row_sum(z);
  for_each_shift_below(z, 0, [&](const Row& zp) { out.push_back({zp, ipow(t, row_sum(zp) - total)}); });
  return out;
}

std::vector<Branch> branching_sp_odd(const Row& z, const Rational& t) {
  std::vector<Branch> out;
  if (z.empty()) return out;
  const int total = row_sum(z);
  for_each_nested(z, [&](const Row& zp) {
    if (is_nonnegative(zp)) out.push_back({zp, ipow(t, total - row_sum(zp))});
  });
  return out;
}

SchurEvaluator::SchurEvaluator(RateVector q) : q_(std::move(q)) {}

const Rational& SchurEvaluator::operator()(const Row& z) {
  if (z.size() > q_.size()) throw std::invalid_argument("schur: row longer than rate vector");
  if (!is_ordered(z)) return zero_;
  auto it = memo_.find(z);
  if (it != memo_.end()) return it->second;
  Rational value = 0;
  if (z.empty()) {
    value = 1;
  } else {
    for (const auto& b : branching_standard(z, q_[z.size() - 1])) value += b.coefficient * (*this)(b.row);
  }
  return memo_.emplace(z, std::move(value)).first->second;
}

SpSchurEvaluator::SpSchurEvaluator(RateVector q) : q_(std::move(q)) {}

const Rational& SpSchurEvaluator::operator()(int n, const Row& z) {
  if (n < 0 || static_cast<std::size_t>((n + 1) / 2) != z.size())
    throw std::invalid_argument("sp_schur: |z| must equal ceil(n/2)");
  if (z.size() > q_.size()) throw std::invalid_argument("sp_schur: row longer than rate vector");
  if (!is_ordered(z) || !is_nonnegative(z)) return zero_;
  auto key = std::make_pair(n, z);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Rational value = 0;
  if (n == 0) {
    value = 1;
  } else {
    const Rational& qk = q_[z.size() - 1];
    auto branches = n % 2 == 0 ? branching_sp_even(z, qk) : branching_sp_odd(z, qk);
    for (const auto& b : branches) value += b.coefficient * (*this)(n - 1, b.row);
  }
  return memo_.emplace(std::move(key), std::move(value)).first->second;
}

Rational schur(const Row& z, const RateVector& q) {
  if (z.size() != q.size()) throw std::invalid_argument("schur: |z| must equal |q|");
  SchurEvaluator eval(q);
  return eval(z);
}

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return det;
}

std::optional<Rational> schur_oracle(const Row& z, const RateVector& q) {
  if (z.size() != q.size()) throw std::invalid_argument("schur_oracle: |z| must equal |q|");
  if (!q.all_distinct()) return std::nullopt;
  if (!is_ordered(z)) return Rational(0);
  const std::size_t n = z.size();
  std::vector<std::vector<Rational>> num(n, std::vector<Rational>(n)), den(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      num[i][j] = ipow(q[i], z[j] + static_cast<long>(j));
      den[i][j] = ipow(q[i], static_cast<long>(j));
    }
  Rational d = determinant(std::move(den));
  if (d == 0) return std::nullopt;
  return determinant(std::move(num)) / d;
}

Rational sp_schur(int n, const Row& z, const RateVector& q) {
  if (q.size() != z.size()) throw std::invalid_argument("sp_schur: |q| must equal |z|");
  SpSchurEvaluator eval(q);
  return eval(n, z);
}

Rational schur_by_patterns(const Row& z, const RateVector& q) {
  if (!is_ordered(z)) return 0;
  Rational total = 0;
  for (const auto& p : enumerate_patterns(z, PatternKind::standard)) total += weight(p, q);
  return total;
}

Rational sp_schur_by_patterns(int n, const Row& z, const RateVector& q) {
  if (!is_ordered(z) || !is_nonnegative(z)) return 0;
  Rational total = 0;
  for (const auto& p : enumerate_patterns(z, PatternKind::symplectic, static_cast<std::size_t>(n)))
    total += weight(p, q);
  return total;
}

}  // namespace gtpush
