#include "gtpush/kernels.hpp"

#include <set>
#include <stdexcept>

namespace gtpush {

namespace {

Row shifted(Row r, std::size_t i, int d) {
  r[i] += d;
  return r;
}

bool in_box(const Row& r, int bound) { return max_coord(r) <= bound; }

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

std::vector<Row> chamber_states(std::size_t n, int bound, int lower) {
  std::vector<Row> out;
  Row cur(n);
  auto rec = [&](auto&& self, std::size_t i, int lo) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v <= bound; ++v) {
      cur[i] = v;
      self(self, i + 1, v);
    }
  };
  rec(rec, 0, lower);
  return out;
}

std::vector<PairState> nested_pair_states(std::size_t n, int bound) {
  std::vector<PairState> out;
  for (const auto& y : chamber_states(n + 1, bound))
    for_each_nested(y, [&](const Row& x) { out.push_back({x, y}); });
  return out;
}

std::vector<PairState> shifted_pair_states(std::size_t n, int bound) {
  std::vector<PairState> out;
  for (const auto& y : chamber_states(n, bound))
    for_each_shift_below(y, 0, [&](const Row& x) { out.push_back({x, y}); });
  return out;
}

SparseGenerator<Row> q_charlier(std::size_t n, const RateVector& q, int bound) {
  require(q.size() == n, "q_charlier: |q| must equal n");
  require(bound >= 1, "q_charlier: bound must be at least 1");
  SparseGenerator<Row> gen(chamber_states(n, bound), bound);
  SchurEvaluator schur(q);
  Rational leaving = 0;
  for (std::size_t i = 0; i < n; ++i) leaving += q[i];
  for (const auto& x : gen.states()) {
    const Rational& sx = schur(x);
    for (std::size_t i = 0; i < n; ++i) {
      Row xp = shifted(x, i, 1);
      if (!is_ordered(xp) || !in_box(xp, bound)) continue;
      gen.set(x, xp, schur(xp) / sx);
    }
    gen.set(x, x, -leaving);
  }
  return gen;
}

StepKernel<Row> kernel_geometric(std::size_t n, const RateVector& q, int bound) {
  require(q.size() == n, "kernel_geometric: |q| must equal n");
  for (const auto& v : q.values()) require(v > 0 && v < 1, "kernel_geometric: parameters must lie in (0,1)");
  StepKernel<Row> kernel(chamber_states(n, bound), bound);
  SchurEvaluator schur(q);
  Rational a = 1;
  for (const auto& v : q.values()) a *= 1 - v;
  for (const auto& x : kernel.states()) {
    Rational scale = a / schur(x);
    for_each_shift_above(x, bound, [&](const Row& xp) { kernel.set(x, xp, scale * schur(xp)); });
  }
  return kernel;
}

Rational q_symplectic_leaving_rate(int n, const RateVector& q, const Row& x) {
  const std::size_t k = q.size();
  Rational out = 0;
  if (n % 2 == 0) {
    for (std::size_t i = 0; i < k; ++i) out += q[i] + 1 / q[i];
    return out;
  }
  for (std::size_t i = 0; i + 1 < k; ++i) out += q[i] + 1 / q[i];
  out += q[k - 1];
  if (x[0] > 0) out += 1 / q[k - 1];
  return out;
}

SparseGenerator<Row> q_symplectic(int n, const RateVector& q, int bound) {
  require(n >= 1, "q_symplectic: n must be positive");
  require(q.size() == static_cast<std::size_t>((n + 1) / 2), "q_symplectic: |q| must equal ceil(n/2)");
  require(bound >= 1, "q_symplectic: bound must be at least 1");
  const std::size_t k = q.size();
  SparseGenerator<Row> gen(chamber_states(k, bound), bound);
  SpSchurEvaluator sp(q);
  for (const auto& x : gen.states()) {
    const Rational& sx = sp(n, x);
    for (std::size_t i = 0; i < k; ++i)
      for (int d : {1, -1}) {
        Row xp = shifted(x, i, d);
        if (!is_ordered(xp) || !is_nonnegative(xp) || !in_box(xp, bound)) continue;
        gen.set(x, xp, sp(n, xp) / sx);
      }
    gen.set(x, x, -q_symplectic_leaving_rate(n, q, x));
  }
  return gen;
}

SparseGenerator<PairState> coupling_generator_poisson(std::size_t n, const RateVector& q_ext, int bound) {
  require(q_ext.size() == n + 1, "coupling_generator_poisson: |q_ext| must equal n+1");
  SparseGenerator<PairState> gen(nested_pair_states(n, bound), bound);
  SchurEvaluator schur(q_ext);
  const Rational& qy = q_ext[n];
  Rational base = 0;
  for (std::size_t i = 0; i <= n; ++i) base += q_ext[i];

  for (const auto& s : gen.states()) {
    const Row& x = s.x;
    const Row& y = s.y;
    const Rational& sx = schur(x);
    for (std::size_t i = 0; i < n; ++i) {
      Row xp = shifted(x, i, 1);
      if (!is_ordered(xp)) continue;
      Rational rate = schur(xp) / sx;
      if (x[i] < y[i + 1]) {
        gen.set(s, {xp, y}, rate);
      } else {
        Row yp = shifted(y, i + 1, 1);
        if (in_box(yp, bound)) gen.set(s, {xp, yp}, rate);
      }
    }
    Rational leaving = base;
    for (std::size_t j = 0; j <= n; ++j) {
      Row yp = shifted(y, j, 1);
      if (!interlace_nest(x, yp)) continue;
      if (j < n) leaving += qy;
      if (in_box(yp, bound)) gen.set(s, {x, yp}, qy);
    }
    gen.set(s, s, -leaving);
  }
  return gen;
}

Rational BlockPushFactors::blocking(int u, int v) const {
  if (u == v) return 1;
  if (v < u) return 1 - q_;
  return 0;
}

Rational BlockPushFactors::pushing(int u, int v) const { return u <= v ? ipow(q_, -v) : ipow(q_, -u); }

Rational coupling_r_factor(const BlockPushFactors& f, const Row& yp, const Row& xp, const Row& x, const Row& y) {
  const std::size_t n = x.size();
  if (y.size() != n + 1 || yp.size() != n + 1 || xp.size() != n)
    throw std::invalid_argument("coupling_r_factor: dimension mismatch");
  for (std::size_t j = 0; j <= n; ++j)
    if (yp[j] < y[j]) return 0;
  const Rational& q = f.q();
  Rational r = ipow(q, yp[0] - y[0]) * f.blocking(x[0], yp[0]);
  for (std::size_t i = 1; i < n; ++i) {
    if (r == 0) return r;
    r *= ipow(q, yp[i]) * f.blocking(x[i], yp[i]) * f.pushing(xp[i - 1], y[i]);
  }
  r *= ipow(q, yp[n]) * (1 - q) * f.pushing(xp[n - 1], y[n]);
  return r;
}

Rational block_push_sum(const BlockPushFactors& f, int v1p, int v2, int up) {
  Rational total = 0;
  for (int u = v1p; u <= std::min(v2, up); ++u)
    total += ipow(f.q(), -u) * f.blocking(u, v1p) * f.pushing(up, v2);
  return total;
}

StepKernel<PairState> coupling_kernel_geometric(std::size_t n, const RateVector& q_ext, int bound) {
  return coupling_kernel_geometric(n, q_ext, bound, BlockPushFactors(q_ext[q_ext.size() - 1]));
}

StepKernel<PairState> coupling_kernel_geometric(std::size_t n, const RateVector& q_ext, int bound,
                                                const BlockPushFactors& factors) {
  require(q_ext.size() == n + 1, "coupling_kernel_geometric: |q_ext| must equal n+1");
  require(n >= 1, "coupling_kernel_geometric: n must be positive");
  for (const auto& v : q_ext.values())
    require(v > 0 && v < 1, "coupling_kernel_geometric: parameters must lie in (0,1)");
  StepKernel<PairState> kernel(nested_pair_states(n, bound), bound);
  SchurEvaluator schur(q_ext);
  Rational a = 1;
  for (std::size_t i = 0; i < n; ++i) a *= 1 - q_ext[i];

  for (const auto& s : kernel.states()) {
    const Row& x = s.x;
    const Row& y = s.y;
    Rational scale = a / schur(x);
    for_each_shift_above(x, bound, [&](const Row& xp) {
      Rational px = scale * schur(xp);
      // y'_j ranges over [max(y_j, x'_{j-1}), x'_j] and y'_{n+1} over
      // [max(y_{n+1}, x'_n), bound]; r vanishes off the recursion's support.
      Row yp(n + 1);
      auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == n + 1) {
          Rational r = coupling_r_factor(factors, yp, xp, x, y);
          if (r != 0) kernel.set(s, {xp, yp}, r * px);
          return;
        }
        int lo = j == 0 ? y[0] : std::max(y[j], xp[j - 1]);
        int hi = j < n ? xp[j] : bound;
        for (int v = lo; v <= hi; ++v) {
          yp[j] = v;
          self(self, j + 1);
        }
      };
      rec(rec, 0);
    });
  }
  return kernel;
}

SparseGenerator<PairState> coupling_generator_wall_odd_even(std::size_t n, const RateVector& q, int bound) {
  require(n >= 1 && q.size() == n, "coupling_generator_wall_odd_even: |q| must equal n");
  const int odd = static_cast<int>(2 * n - 1);
  SparseGenerator<PairState> gen(shifted_pair_states(n, bound), bound);
  SpSchurEvaluator sp(q);
  const Rational& qn = q[n - 1];
  const Rational qn_inv = 1 / qn;

  for (const auto& s : gen.states()) {
    const Row& x = s.x;
    const Row& y = s.y;
    const Rational& sx = sp(odd, x);
    for (std::size_t j = 0; j < n; ++j) {
      for (int d : {1, -1}) {
        Row xp = shifted(x, j, d);
        if (!is_ordered(xp) || !is_nonnegative(xp)) continue;
        Rational rate = sp(odd, xp) / sx;
        if (d == 1) {
          if (x[j] < y[j]) {
            gen.set(s, {xp, y}, rate);
          } else {
            Row yp = shifted(y, j, 1);
            if (in_box(yp, bound)) gen.set(s, {xp, yp}, rate);
          }
        } else {
          if (j == 0 || x[j] > y[j - 1]) {
            gen.set(s, {xp, y}, rate);
          } else {
            gen.set(s, {xp, shifted(y, j - 1, -1)}, rate);
          }
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (int d : {1, -1}) {
        Row yp = shifted(y, j, d);
        if (!interlace_shift(x, yp) || !in_box(yp, bound)) continue;
        gen.set(s, {x, yp}, d == 1 ? qn_inv : qn);
      }
    }
    Rational leaving = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) leaving += q[i] + 1 / q[i];
    leaving += qn;
    if (x[0] > 0) leaving += qn_inv;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (y[i] < x[i + 1]) leaving += qn_inv;
      if (y[i] > x[i]) leaving += qn;
    }
    if (y[n - 1] > x[n - 1]) leaving += qn;
    leaving += qn_inv;
    gen.set(s, s, -leaving);
  }
  return gen;
}

SparseGenerator<PairState> coupling_generator_wall_even_odd(std::size_t n, const RateVector& q_ext, int bound) {
  require(n >= 1 && q_ext.size() == n + 1, "coupling_generator_wall_even_odd: |q_ext| must equal n+1");
  const int even = static_cast<int>(2 * n);
  SparseGenerator<PairState> gen(nested_pair_states(n, bound), bound);
  SpSchurEvaluator sp(q_ext);
  const Rational& qy = q_ext[n];
  const Rational qy_inv = 1 / qy;

  for (const auto& s : gen.states()) {
    const Row& x = s.x;
    const Row& y = s.y;
    const Rational& sx = sp(even, x);
    for (std::size_t i = 0; i < n; ++i) {
      for (int d : {1, -1}) {
        Row xp = shifted(x, i, d);
        if (!is_ordered(xp) || !is_nonnegative(xp)) continue;
        Rational rate = sp(even, xp) / sx;
        if (d == 1) {
          if (x[i] < y[i + 1]) {
            gen.set(s, {xp, y}, rate);
          } else {
            Row yp = shifted(y, i + 1, 1);
            if (in_box(yp, bound)) gen.set(s, {xp, yp}, rate);
          }
        } else {
          if (x[i] > y[i]) {
            gen.set(s, {xp, y}, rate);
          } else {
            gen.set(s, {xp, shifted(y, i, -1)}, rate);
          }
        }
      }
    }
    for (std::size_t j = 0; j <= n; ++j) {
      for (int d : {1, -1}) {
        Row yp = shifted(y, j, d);
        if (!is_nonnegative(yp) || !interlace_nest(x, yp) || !in_box(yp, bound)) continue;
        gen.set(s, {x, yp}, d == 1 ? qy : qy_inv);
      }
    }
    Rational leaving = 0;
    for (std::size_t i = 0; i < n; ++i) leaving += q_ext[i] + 1 / q_ext[i];
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] < x[i]) leaving += qy;
      if (y[i + 1] > x[i]) leaving += qy_inv;
    }
    leaving += qy;
    if (y[0] > 0) leaving += qy_inv;
    gen.set(s, s, -leaving);
  }
  return gen;
}

std::string to_string(CouplingVariant v) {
  switch (v) {
    case CouplingVariant::poisson: return "poisson";
    case CouplingVariant::geometric: return "geometric";
    case CouplingVariant::wall_odd_even: return "wall-odd-even";
    case CouplingVariant::wall_even_odd: return "wall-even-odd";
  }
  return "unknown";
}

CouplingVariant parse_coupling_variant(const std::string& name) {
  for (auto v : {CouplingVariant::poisson, CouplingVariant::geometric, CouplingVariant::wall_odd_even,
                 CouplingVariant::wall_even_odd})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown coupling variant '" + name + "'");
}

CouplingWeight::CouplingWeight(CouplingVariant variant, RateVector q)
    : variant_(variant), q_(std::move(q)), schur_(q_), sp_(q_) {}

std::size_t CouplingWeight::y_length(CouplingVariant v, std::size_t n) {
  return v == CouplingVariant::wall_odd_even ? n : n + 1;
}

std::size_t CouplingWeight::rate_length(CouplingVariant v, std::size_t n) { return y_length(v, n); }

Rational CouplingWeight::operator()(const Row& x, const Row& y) {
  if (y.size() != q_.size()) throw std::invalid_argument("m_weight: |y| must equal |q|");
  const bool shifted_pair = variant_ == CouplingVariant::wall_odd_even;
  if (shifted_pair ? x.size() != y.size() : x.size() + 1 != y.size())
    throw std::invalid_argument("m_weight: dimension mismatch for variant " + to_string(variant_));
  const int dx = row_sum(x);
  const int dy = row_sum(y);
  const Rational& qlast = q_[y.size() - 1];
  switch (variant_) {
    case CouplingVariant::poisson:
    case CouplingVariant::geometric: {
      if (!is_ordered(y) || !interlace_nest(x, y)) return 0;
      return ipow(qlast, dy - dx) * schur_(x) / schur_(y);
    }
    case CouplingVariant::wall_odd_even: {
      if (!is_nonnegative(x) || !is_ordered(y) || !interlace_shift(x, y)) return 0;
      const int n = static_cast<int>(y.size());
      return ipow(qlast, dx - dy) * sp_(2 * n - 1, x) / sp_(2 * n, y);
    }
    case CouplingVariant::wall_even_odd: {
      if (!is_nonnegative(y) || !is_ordered(y) || !interlace_nest(x, y)) return 0;
      const int n = static_cast<int>(x.size());
      return ipow(qlast, dy - dx) * sp_(2 * n, x) / sp_(2 * n + 1, y);
    }
  }
  return 0;
}

std::vector<std::pair<PairState, Rational>> CouplingWeight::lambda_row(const Row& y) {
  const bool wall = variant_ == CouplingVariant::wall_odd_even || variant_ == CouplingVariant::wall_even_odd;
  if (!is_ordered(y) || (wall && !is_nonnegative(y)))
    throw std::invalid_argument("lambda_kernel: y outside the chamber: " + format_row(y));
  std::vector<std::pair<PairState, Rational>> out;
  auto emit = [&](const Row& x) {
    Rational w = (*this)(x, y);
    if (w != 0) out.push_back({{x, y}, std::move(w)});
  };
  if (variant_ == CouplingVariant::wall_odd_even)
    for_each_shift_below(y, 0, emit);
  else
    for_each_nested(y, emit);
  return out;
}

Rational m_weight(const Row& x, const Row& y, CouplingVariant variant, const RateVector& q_ext) {
  CouplingWeight m(variant, q_ext);
  return m(x, y);
}

std::vector<std::pair<PairState, Rational>> lambda_kernel(const Row& y, CouplingVariant variant,
                                                          const RateVector& q_ext) {
  CouplingWeight m(variant, q_ext);
  return m.lambda_row(y);
}

LambdaKernel lambda_kernel_matrix(CouplingVariant variant, const RateVector& q_ext, const std::vector<Row>& y_states,
                                  int bound) {
  LambdaKernel lambda(y_states, bound);
  CouplingWeight m(variant, q_ext);
  for (const auto& y : y_states)
    for (auto& [p, w] : m.lambda_row(y)) lambda.set(y, p, w);
  return lambda;
}

}  // namespace gtpush
