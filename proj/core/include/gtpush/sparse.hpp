#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtpush/patterns.hpp"
#include "gtpush/rational.hpp"

namespace gtpush {

// A state of two consecutive rows (x above y).
struct PairState {
  Row x;
  Row y;
  auto operator<=>(const PairState&) const = default;
};

inline int max_coord(const Row& r) { return r.empty() ? 0 : *std::max_element(r.begin(), r.end()); }
inline int max_coord(const PairState& s) { return std::max(max_coord(s.x), max_coord(s.y)); }

inline std::string format_state(const Row& r) { return format_row(r); }
inline std::string format_state(const PairState& s) { return format_row(s.x) + "|" + format_row(s.y); }

// Sparse exact matrix over a finite truncated state space. States with any
// coordinate above `bound` are not represented; a state is interior when every
// coordinate is at most bound - 1.
template <class From, class To = From>
class SparseMatrix {
 public:
  using Entries = std::map<To, Rational>;

  SparseMatrix() = default;
  SparseMatrix(std::vector<From> states, int bound) : states_(std::move(states)), bound_(bound) {
    index_.insert(states_.begin(), states_.end());
  }

  const std::vector<From>& states() const { return states_; }
  int bound() const { return bound_; }
  bool contains(const From& s) const { return index_.count(s) != 0; }
  bool is_interior(const From& s) const { return max_coord(s) <= bound_ - 1; }

  void set(const From& from, const To& to, Rational value) {
    if (value == 0) {
      auto it = rows_.find(from);
      if (it != rows_.end()) it->second.erase(to);
      return;
    }
    rows_[from][to] = std::move(value);
  }

  void add(const From& from, const To& to, const Rational& value) {
    if (value == 0) return;
    Rational& slot = rows_[from][to];
    slot += value;
    if (slot == 0) rows_[from].erase(to);
  }

  Rational at(const From& from, const To& to) const {
    auto it = rows_.find(from);
    if (it == rows_.end()) return 0;
    auto jt = it->second.find(to);
    return jt == it->second.end() ? Rational(0) : jt->second;
  }

  const Entries& row(const From& from) const {
    static const Entries empty;
    auto it = rows_.find(from);
    return it == rows_.end() ? empty : it->second;
  }

  Rational row_sum(const From& from) const {
    Rational s = 0;
    for (const auto& [to, v] : row(from)) s += v;
    return s;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& [from, r] : rows_) n += r.size();
    return n;
  }

 private:
  std::vector<From> states_;
  std::set<From> index_;
  std::map<From, Entries> rows_;
  int bound_ = 0;
};

template <class S>
using SparseGenerator = SparseMatrix<S, S>;
template <class S>
using StepKernel = SparseMatrix<S, S>;
using LambdaKernel = SparseMatrix<Row, PairState>;

}  // namespace gtpush
