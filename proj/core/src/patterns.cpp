#include "gtpush/patterns.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gtpush/schur.hpp"

namespace gtpush {

int row_sum(const Row& row) { return std::accumulate(row.begin(), row.end(), 0); }

std::string format_row(const Row& row) {
  std::ostringstream os;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << row[i];
  }
  return os.str();
}

Row parse_row(const std::string& text) {
  Row out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer in row: '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("bad integer in row: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

bool is_ordered(const Row& row) { return std::is_sorted(row.begin(), row.end()); }

bool is_nonnegative(const Row& row) {
  return std::all_of(row.begin(), row.end(), [](int v) { return v >= 0; });
}

ChamberPoint::ChamberPoint(Row coords, bool wall) : coords_(std::move(coords)), wall_(wall) {
  if (!is_ordered(coords_)) throw std::invalid_argument("chamber point not ordered: " + format_row(coords_));
  if (wall_ && !coords_.empty() && coords_.front() < 0)
    throw std::invalid_argument("chamber point crosses the wall: " + format_row(coords_));
}

RateVector::RateVector(std::vector<Rational> q, bool unit_interval)
    : q_(std::move(q)), unit_interval_(unit_interval) {
  for (const auto& v : q_) {
    if (v <= 0) throw std::invalid_argument("rates must be positive, got " + to_string(v));
    if (unit_interval_ && v >= 1) throw std::invalid_argument("parameter must lie in (0,1), got " + to_string(v));
  }
}

bool RateVector::all_distinct() const {
  for (std::size_t i = 0; i < q_.size(); ++i)
    for (std::size_t j = i + 1; j < q_.size(); ++j)
      if (q_[i] == q_[j]) return false;
  return true;
}

RateVector RateVector::prefix(std::size_t k) const {
  if (k > q_.size()) throw std::invalid_argument("rate prefix longer than rate vector");
  return RateVector(std::vector<Rational>(q_.begin(), q_.begin() + static_cast<long>(k)), unit_interval_);
}

std::string to_string(PatternKind kind) { return kind == PatternKind::standard ? "standard" : "symplectic"; }

std::size_t row_length(PatternKind kind, std::size_t j) {
  return kind == PatternKind::standard ? j : (j + 1) / 2;
}

bool interlace_shift(const Row& x, const Row& xp) {
  if (x.size() != xp.size()) throw std::invalid_argument("interlace_shift: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > xp[i]) return false;
    if (i + 1 < x.size() && xp[i] > x[i + 1]) return false;
  }
  return true;
}

bool interlace_nest(const Row& x, const Row& y) {
  if (y.size() != x.size() + 1) throw std::invalid_argument("interlace_nest: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] > x[i] || x[i] > y[i + 1]) return false;
  return true;
}

Pattern::Pattern(PatternKind kind, std::vector<Row> rows) : kind_(kind), rows_(std::move(rows)) {
  for (std::size_t j = 1; j <= rows_.size(); ++j)
    if (rows_[j - 1].size() != row_length(kind_, j))
      throw std::invalid_argument("malformed pattern: row " + std::to_string(j) + " has length " +
                                  std::to_string(rows_[j - 1].size()) + ", expected " +
                                  std::to_string(row_length(kind_, j)));
}

bool rows_compatible(PatternKind kind, std::size_t j, const Row* above, const Row& row) {
  if (kind == PatternKind::standard) {
    if (j == 1 || above == nullptr) return true;
    return interlace_nest(*above, row);
  }
  if (!row.empty() && row.front() < 0) return false;
  if (j == 1 || above == nullptr) return true;
  return j % 2 == 0 ? interlace_shift(*above, row) : interlace_nest(*above, row);
}

bool is_valid(const Pattern& p) {
  for (std::size_t j = 1; j <= p.depth(); ++j) {
    const Row& row = p.row(j);
    if (!is_ordered(row)) return false;
    if (p.kind() == PatternKind::symplectic && !is_nonnegative(row)) return false;
    if (!rows_compatible(p.kind(), j, j > 1 ? &p.row(j - 1) : nullptr, row)) return false;
  }
  return true;
}

Pattern zero_pattern(PatternKind kind, std::size_t depth) {
  std::vector<Row> rows;
  for (std::size_t j = 1; j <= depth; ++j) rows.emplace_back(row_length(kind, j), 0);
  return Pattern(kind, std::move(rows));
}

namespace {

std::size_t resolve_depth(const Row& z, PatternKind kind, std::size_t depth) {
  if (kind == PatternKind::standard) {
    if (depth != 0 && depth != z.size()) throw std::invalid_argument("standard pattern depth must equal |z|");
    return z.size();
  }
  if (depth == 0 || row_length(kind, depth) != z.size())
    throw std::invalid_argument("symplectic depth must be 2k-1 or 2k with k = |z|");
  return depth;
}

// Rows strictly above row j that are compatible with `row`.
template <class F>
void for_each_row_above(PatternKind kind, std::size_t j, const Row& row, F&& f) {
  if (kind == PatternKind::standard) {
    for_each_nested(row, f);
  } else if (j % 2 == 0) {
    for_each_shift_below(row, 0, f);
  } else {
    // x^{j-1} ⪯ x^j with x^{j-1} >= 0
    for_each_nested(row, [&](const Row& x) {
      if (is_nonnegative(x)) f(x);
    });
  }
}

}  // namespace

std::vector<Pattern> enumerate_patterns(const Row& z, PatternKind kind, std::size_t depth) {
  depth = resolve_depth(z, kind, depth);
  if (!is_ordered(z) || (kind == PatternKind::symplectic && !is_nonnegative(z)))
    throw std::invalid_argument("bottom row outside the chamber: " + format_row(z));
  std::vector<Pattern> out;
  std::vector<Row> rows(depth);
  rows[depth - 1] = z;
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == 1) {
      out.emplace_back(kind, rows);
      return;
    }
    for_each_row_above(kind, j, rows[j - 1], [&](const Row& x) {
      rows[j - 2] = x;
      self(self, j - 1);
    });
  };
  rec(rec, depth);
  return out;
}

Rational weight(const Pattern& p, const RateVector& q) {
  const std::size_t n = p.depth();
  Rational w = 1;
  if (p.kind() == PatternKind::standard) {
    if (q.size() != n) throw std::invalid_argument("weight: rate vector length must equal depth");
    int prev = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      int s = row_sum(p.row(i));
      w *= ipow(q[i - 1], s - prev);
      prev = s;
    }
    return w;
  }
  if (q.size() != (n + 1) / 2) throw std::invalid_argument("weight: symplectic rate vector length must be ceil(n/2)");
  int prev = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    int s = row_sum(p.row(j));
    const Rational& qi = q[(j + 1) / 2 - 1];
    // odd rows: q_i^{|x^{2i-1}| - |x^{2i-2}|}; even rows: q_i^{|x^{2i-1}| - |x^{2i}|}
    w *= j % 2 == 1 ? ipow(qi, s - prev) : ipow(qi, prev - s);
    prev = s;
  }
  return w;
}

struct PatternSampler::Cache {
  std::map<std::pair<std::size_t, Row>, std::vector<std::pair<Row, Rational>>> laws;
  std::map<std::pair<std::size_t, Row>, std::vector<double>> cumulative;
  SchurEvaluator schur;
  SpSchurEvaluator sp;
  explicit Cache(const RateVector& q) : schur(q), sp(q) {}
};

PatternSampler::PatternSampler(Row z, RateVector q, PatternKind kind, std::size_t depth)
    : z_(std::move(z)), q_(std::move(q)), kind_(kind), depth_(resolve_depth(z_, kind, depth)) {
  if (!is_ordered(z_) || (kind_ == PatternKind::symplectic && !is_nonnegative(z_)))
    throw std::invalid_argument("bottom row outside the chamber: " + format_row(z_));
  std::size_t need = kind_ == PatternKind::standard ? depth_ : (depth_ + 1) / 2;
  if (q_.size() != need) throw std::invalid_argument("sample_pattern: rate vector has wrong length");
  cache_ = std::make_unique<Cache>(q_);
}

PatternSampler::~PatternSampler() = default;
PatternSampler::PatternSampler(PatternSampler&&) noexcept = default;
PatternSampler& PatternSampler::operator=(PatternSampler&&) noexcept = default;

const std::vector<std::pair<Row, Rational>>& PatternSampler::conditional(std::size_t j, const Row& row) {
  auto key = std::make_pair(j, row);
  auto it = cache_->laws.find(key);
  if (it != cache_->laws.end()) return it->second;

  std::vector<Branch> branches;
  std::vector<Rational> sub;
  if (kind_ == PatternKind::standard) {
    branches = branching_standard(row, q_[j - 1]);
    for (const auto& b : branches) sub.push_back(cache_->schur(b.row));
  } else {
    const Rational& qk = q_[(j + 1) / 2 - 1];
    branches = j % 2 == 0 ? branching_sp_even(row, qk) : branching_sp_odd(row, qk);
    for (const auto& b : branches) sub.push_back(cache_->sp(static_cast<int>(j - 1), b.row));
  }
  Rational total = 0;
  std::vector<std::pair<Row, Rational>> law;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    Rational w = branches[i].coefficient * sub[i];
    total += w;
    law.emplace_back(branches[i].row, w);
  }
  std::vector<double> cum;
  Rational acc = 0;
  for (auto& [r, w] : law) {
    w /= total;
    acc += w;
    cum.push_back(to_double(acc));
  }
  cache_->cumulative[key] = std::move(cum);
  return cache_->laws.emplace(key, std::move(law)).first->second;
}

Pattern PatternSampler::operator()(Rng& rng) {
  std::vector<Row> rows(depth_);
  rows[depth_ - 1] = z_;
  for (std::size_t j = depth_; j > 1; --j) {
    const auto& law = conditional(j, rows[j - 1]);
    const auto& cum = cache_->cumulative.at({j, rows[j - 1]});
    double u = uniform01(rng);
    std::size_t pick = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (pick >= law.size()) pick = law.size() - 1;
    rows[j - 2] = law[pick].first;
  }
  return Pattern(kind_, std::move(rows));
}

Pattern sample_pattern(const Row& z, const RateVector& q, PatternKind kind, Rng& rng, std::size_t depth) {
  PatternSampler sampler(z, q, kind, depth);
  return sampler(rng);
}

}  // namespace gtpush
