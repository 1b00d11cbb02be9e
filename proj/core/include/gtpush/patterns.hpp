#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gtpush/rational.hpp"
#include "gtpush/rng.hpp"

namespace gtpush {

using Row = std::vector<int>;

int row_sum(const Row& row);
std::string format_row(const Row& row);  // "0,1,2"
Row parse_row(const std::string& text);

bool is_ordered(const Row& row);
bool is_nonnegative(const Row& row);

// Ordered integer vector; an element of the Weyl chamber W^k, or of W_0^k
// when `wall` is set.
class ChamberPoint {
 public:
  ChamberPoint() = default;
  explicit ChamberPoint(Row coords, bool wall = false);

  const Row& coords() const { return coords_; }
  bool wall() const { return wall_; }
  std::size_t size() const { return coords_.size(); }
  int operator[](std::size_t i) const { return coords_[i]; }

  auto operator<=>(const ChamberPoint&) const = default;

 private:
  Row coords_;
  bool wall_ = false;
};

// Positive exact rates. With `unit_interval` every entry must lie in (0,1).
class RateVector {
 public:
  RateVector() = default;
  explicit RateVector(std::vector<Rational> q, bool unit_interval = false);

  std::size_t size() const { return q_.size(); }
  const Rational& operator[](std::size_t i) const { return q_[i]; }
  const std::vector<Rational>& values() const { return q_; }
  bool unit_interval() const { return unit_interval_; }
  bool all_distinct() const;
  RateVector prefix(std::size_t k) const;

 private:
  std::vector<Rational> q_;
  bool unit_interval_ = false;
};

enum class PatternKind { standard, symplectic };

std::string to_string(PatternKind kind);

// Row length of row j (1-based) of a pattern of the given kind.
std::size_t row_length(PatternKind kind, std::size_t j);

// x ≺ x': x_1 <= x'_1 <= x_2 <= ... <= x_n <= x'_n (equal lengths).
bool interlace_shift(const Row& x, const Row& xp);
// x ⪯ y: y_i <= x_i <= y_{i+1}, |y| = |x| + 1.
bool interlace_nest(const Row& x, const Row& y);

// Rows x^1 (top) ... x^n (bottom). Row lengths are checked on construction,
// interlacing is not (see is_valid).
class Pattern {
 public:
  Pattern(PatternKind kind, std::vector<Row> rows);

  PatternKind kind() const { return kind_; }
  std::size_t depth() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(std::size_t j) const { return rows_.at(j - 1); }  // 1-based
  Row& mutable_row(std::size_t j) { return rows_.at(j - 1); }
  const Row& bottom() const { return rows_.back(); }

  auto operator<=>(const Pattern&) const = default;

 private:
  PatternKind kind_;
  std::vector<Row> rows_;
};

// Interlacing between row j-1 (`above`) and row j (`row`), rows 1-based,
// including the wall for symplectic patterns. For j == 1 only the wall applies.
bool rows_compatible(PatternKind kind, std::size_t j, const Row* above, const Row& row);

bool is_valid(const Pattern& p);

// Zero pattern of the given depth, bottom row included.
Pattern zero_pattern(PatternKind kind, std::size_t depth);

// All patterns with bottom row z. For symplectic patterns the depth n must
// be 2k-1 or 2k with k = |z|; for standard patterns depth is |z|.
std::vector<Pattern> enumerate_patterns(const Row& z, PatternKind kind, std::size_t depth = 0);

Rational weight(const Pattern& p, const RateVector& q);

// Enumerators for the sets that appear as supports and branchings.

// All x with x ⪯ y.
template <class F>
void for_each_nested(const Row& y, F&& f) {
  const std::size_t n = y.size() - 1;
  Row x(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      f(static_cast<const Row&>(x));
      return;
    }
    int lo = y[i];
    if (i > 0 && x[i - 1] > lo) lo = x[i - 1];
    for (int v = lo; v <= y[i + 1]; ++v) {
      x[i] = v;
      self(self, i + 1);
    }
  };
  if (y.empty()) return;
  rec(rec, 0);
}

// All x with x ≺ y and x_1 >= floor (floor = 0 for the wall).
template <class F>
void for_each_shift_below(const Row& y, int floor, F&& f) {
  const std::size_t n = y.size();
  Row x(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      f(static_cast<const Row&>(x));
      return;
    }
    int lo = i == 0 ? floor : y[i - 1];
    for (int v = lo; v <= y[i]; ++v) {
      x[i] = v;
      self(self, i + 1);
    }
  };
  if (n == 0) {
    f(static_cast<const Row&>(x));
    return;
  }
  rec(rec, 0);
}

// All x' with x ≺ x' and x'_n <= cap.
template <class F>
void for_each_shift_above(const Row& x, int cap, F&& f) {
  const std::size_t n = x.size();
  Row xp(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      f(static_cast<const Row&>(xp));
      return;
    }
    int hi = i + 1 < n ? x[i + 1] : cap;
    for (int v = x[i]; v <= hi; ++v) {
      xp[i] = v;
      self(self, i + 1);
    }
  };
  if (n == 0 || x.back() > cap) return;
  rec(rec, 0);
}

class SchurEvaluator;
class SpSchurEvaluator;

// Draws patterns from M_z (standard) or M^n_z (symplectic) by sampling the
// penultimate row given the bottom row from its exact branching law and
// recursing upwards. Conditional laws are cached per row.
class PatternSampler {
 public:
  PatternSampler(Row z, RateVector q, PatternKind kind, std::size_t depth = 0);
  ~PatternSampler();
  PatternSampler(PatternSampler&&) noexcept;
  PatternSampler& operator=(PatternSampler&&) noexcept;

  Pattern operator()(Rng& rng);

  // Exact conditional law of row j-1 given row j (1 < j <= depth).
  const std::vector<std::pair<Row, Rational>>& conditional(std::size_t j, const Row& row);

 private:
  struct Cache;
  Row z_;
  RateVector q_;
  PatternKind kind_;
  std::size_t depth_;
  std::unique_ptr<Cache> cache_;
};

Pattern sample_pattern(const Row& z, const RateVector& q, PatternKind kind, Rng& rng,
                       std::size_t depth = 0);

}  // namespace gtpush
