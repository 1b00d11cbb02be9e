#include "gtpush/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gtpush {

std::string to_string(Cause c) { return c == Cause::self ? "self" : "push"; }

Trajectory::Trajectory(Pattern initial, TimeKind kind) : initial_(std::move(initial)), kind_(kind) {}
Trajectory::Trajectory(ChamberPoint initial, TimeKind kind) : initial_(std::move(initial)), kind_(kind) {}

const Pattern& Trajectory::initial_pattern() const {
  if (!is_pattern()) throw std::logic_error("trajectory starts from a chamber point");
  return std::get<Pattern>(initial_);
}

const ChamberPoint& Trajectory::initial_point() const {
  if (is_pattern()) throw std::logic_error("trajectory starts from a pattern");
  return std::get<ChamberPoint>(initial_);
}

Pattern Trajectory::pattern_at(double t) const {
  Pattern p = initial_pattern();
  for (const auto& e : events_) {
    if (e.time > t) break;
    p.mutable_row(e.row).at(e.index - 1) += e.displacement;
  }
  return p;
}

Row Trajectory::point_at(double t) const {
  Row x = initial_point().coords();
  for (const auto& e : events_) {
    if (e.time > t) break;
    x.at(e.index - 1) += e.displacement;
  }
  return x;
}

Pattern Trajectory::final_pattern() const {
  Pattern p = initial_pattern();
  for (const auto& e : events_) p.mutable_row(e.row).at(e.index - 1) += e.displacement;
  return p;
}

Row Trajectory::final_point() const {
  Row x = initial_point().coords();
  for (const auto& e : events_) x.at(e.index - 1) += e.displacement;
  return x;
}

bool Trajectory::replay_valid() const {
  if (is_pattern()) {
    Pattern p = initial_pattern();
    if (!is_valid(p)) return false;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const auto& e = events_[i];
      if (e.row < 1 || e.row > p.depth() || e.index < 1 || e.index > p.row(e.row).size()) return false;
      p.mutable_row(e.row)[e.index - 1] += e.displacement;
      bool last_of_group = i + 1 == events_.size() || events_[i + 1].time != e.time;
      if (last_of_group && !is_valid(p)) return false;
    }
    return true;
  }
  Row x = initial_point().coords();
  const bool wall = initial_point().wall();
  auto ok = [&] { return is_ordered(x) && (!wall || is_nonnegative(x)); };
  if (!ok()) return false;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    if (e.index < 1 || e.index > x.size()) return false;
    x[e.index - 1] += e.displacement;
    bool last_of_group = i + 1 == events_.size() || events_[i + 1].time != e.time;
    if (last_of_group && !ok()) return false;
  }
  return true;
}

std::string Trajectory::to_jsonl() const {
  std::ostringstream out;
  char buf[64];
  for (const auto& e : events_) {
    if (kind_ == TimeKind::discrete)
      std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(e.time));
    else
      std::snprintf(buf, sizeof buf, "%.17g", e.time);
    out << "{\"t\":" << buf << ",\"row\":" << e.row << ",\"i\":" << e.index << ",\"d\":" << e.displacement
        << ",\"cause\":\"" << to_string(e.cause) << "\"}\n";
  }
  return out.str();
}

double sample_exponential(Rng& rng, double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential rate must be positive");
  return -std::log1p(-uniform01(rng)) / rate;
}

int sample_geometric(Rng& rng, double q) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("geometric parameter must lie in (0,1)");
  return static_cast<int>(std::floor(std::log1p(-uniform01(rng)) / std::log(q)));
}

namespace {

struct Attempt {
  double time;
  std::size_t row;
  std::size_t index;
  int dir;

  bool operator>(const Attempt& o) const {
    return std::tie(time, row, index, dir) > std::tie(o.time, o.row, o.index, o.dir);
  }
};

// One exponential clock per (row, index, direction), or a fixed list of
// ring times for overridden clocks.
struct ClockSet {
  struct Clock {
    std::size_t row, index;
    int dir;
    double rate;
    const std::vector<double>* fixed = nullptr;
    std::size_t next_fixed = 0;
  };
  std::vector<Clock> clocks;
  std::map<std::tuple<std::size_t, std::size_t, int>, std::size_t> lookup;
  std::priority_queue<Attempt, std::vector<Attempt>, std::greater<>> queue;

  void add(std::size_t row, std::size_t index, int dir, double rate, const std::vector<double>* fixed) {
    lookup[{row, index, dir}] = clocks.size();
    clocks.push_back({row, index, dir, rate, fixed, 0});
  }

  void schedule(std::size_t c, double now, Rng& rng) {
    auto& clock = clocks[c];
    if (clock.fixed) {
      const auto& times = *clock.fixed;
      while (clock.next_fixed < times.size() && times[clock.next_fixed] < now) ++clock.next_fixed;
      if (clock.next_fixed < times.size()) queue.push({times[clock.next_fixed++], clock.row, clock.index, clock.dir});
      return;
    }
    queue.push({now + sample_exponential(rng, clock.rate), clock.row, clock.index, clock.dir});
  }
};

void check_init(const Pattern& init, PatternKind kind, std::size_t n) {
  if (init.kind() != kind) throw std::invalid_argument("initial pattern has the wrong kind");
  if (init.depth() != n) throw std::invalid_argument("initial pattern depth differs from n");
  if (!is_valid(init)) throw std::invalid_argument("initial pattern is not a valid pattern");
}

// Moves particle (row, index) by dir unless blocked by the row above, then
// restores interlacing below by pushing one particle per row in the same
// direction. Returns false when the move is blocked.
bool attempt_move(Pattern& p, std::size_t row, std::size_t index, int dir, double time, Trajectory& traj) {
  Row moved = p.row(row);
  moved[index - 1] += dir;
  const Row* above = row > 1 ? &p.row(row - 1) : nullptr;
  if (!rows_compatible(p.kind(), row, above, moved) || !is_ordered(moved)) return false;
  p.mutable_row(row) = std::move(moved);
  traj.record({time, row, index, dir, Cause::self});
  for (std::size_t r = row + 1; r <= p.depth(); ++r) {
    if (rows_compatible(p.kind(), r, &p.row(r - 1), p.row(r))) break;
    bool fixed = false;
    for (std::size_t m = 0; m < p.row(r).size() && !fixed; ++m) {
      Row trial = p.row(r);
      trial[m] += dir;
      if (rows_compatible(p.kind(), r, &p.row(r - 1), trial) && is_ordered(trial)) {
        p.mutable_row(r) = std::move(trial);
        traj.record({time, r, m + 1, dir, Cause::push});
        fixed = true;
      }
    }
    if (!fixed) throw std::logic_error("push cascade could not restore interlacing");
  }
  return true;
}

Trajectory run_continuous(Pattern state, ClockSet clocks, double t_end, Rng& rng, SimulationOptions options) {
  Trajectory traj(state, TimeKind::continuous);
  for (std::size_t c = 0; c < clocks.clocks.size(); ++c) clocks.schedule(c, 0.0, rng);
  while (!clocks.queue.empty()) {
    Attempt a = clocks.queue.top();
    if (a.time > t_end) break;
    clocks.queue.pop();
    attempt_move(state, a.row, a.index, a.dir, a.time, traj);
    if (options.check_invariants && !is_valid(state))
      throw std::logic_error("invalid pattern after transition at t=" + std::to_string(a.time));
    clocks.schedule(clocks.lookup.at({a.row, a.index, a.dir}), a.time, rng);
  }
  return traj;
}

}  // namespace

Trajectory simulate_poisson(std::size_t n, const RateVector& q, const Pattern& init, const Rational& t_end, Rng& rng,
                            const ClockOverrides& overrides, SimulationOptions options) {
  check_init(init, PatternKind::standard, n);
  if (q.size() < n) throw std::invalid_argument("need one rate per row");
  if (t_end < 0) throw std::invalid_argument("t_end must be nonnegative");
  ClockSet clocks;
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t j = 1; j <= k; ++j) {
      auto it = overrides.find({k, j});
      clocks.add(k, j, +1, to_double(q[k - 1]), it == overrides.end() ? nullptr : &it->second);
    }
  return run_continuous(init, std::move(clocks), to_double(t_end), rng, options);
}

Trajectory simulate_wall(std::size_t n, const RateVector& q, const Pattern& init, const Rational& t_end, Rng& rng,
                         SimulationOptions options) {
  check_init(init, PatternKind::symplectic, n);
  if (q.size() < (n + 1) / 2) throw std::invalid_argument("need one rate per pair of rows");
  if (t_end < 0) throw std::invalid_argument("t_end must be nonnegative");
  ClockSet clocks;
  for (std::size_t r = 1; r <= n; ++r) {
    const double qk = to_double(q[(r + 1) / 2 - 1]);
    const double right = r % 2 == 1 ? qk : 1.0 / qk;
    const double left = r % 2 == 1 ? 1.0 / qk : qk;
    for (std::size_t j = 1; j <= row_length(PatternKind::symplectic, r); ++j) {
      clocks.add(r, j, +1, right, nullptr);
      clocks.add(r, j, -1, left, nullptr);
    }
  }
  return run_continuous(init, std::move(clocks), to_double(t_end), rng, options);
}

GeometricNoise sample_geometric_noise(std::size_t n, const RateVector& q, int steps, Rng& rng) {
  if (q.size() < n) throw std::invalid_argument("need one rate per row");
  GeometricNoise noise(static_cast<std::size_t>(std::max(steps, 0)));
  for (auto& step : noise) {
    step.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
      step[k - 1].resize(k);
      const double qk = to_double(q[k - 1]);
      for (auto& v : step[k - 1]) v = sample_geometric(rng, qk);
    }
  }
  return noise;
}

Trajectory simulate_geometric_driven(const Pattern& init, const GeometricNoise& noise, SimulationOptions options) {
  check_init(init, PatternKind::standard, init.depth());
  const std::size_t n = init.depth();
  Pattern state = init;
  Trajectory traj(init, TimeKind::discrete);
  for (std::size_t s = 0; s < noise.size(); ++s) {
    const double step = static_cast<double>(s + 1);
    if (noise[s].size() != n) throw std::invalid_argument("noise has the wrong number of rows");
    Row above_old;
    for (std::size_t k = 1; k <= n; ++k) {
      const Row& xi = noise[s][k - 1];
      if (xi.size() != k) throw std::invalid_argument("noise row has the wrong length");
      Row y = state.row(k);
      const Row old_y = y;
      const Row* above_new = k > 1 ? &state.row(k - 1) : nullptr;
      for (std::size_t j = 0; j < k; ++j) {
        if (xi[j] < 0) throw std::invalid_argument("geometric noise must be nonnegative");
        int base = old_y[j];
        if (j > 0) base = std::max(base, (*above_new)[j - 1]);
        int target = base + xi[j];
        if (j + 1 < k) target = std::min(target, above_old[j]);
        if (base > old_y[j]) traj.record({step, k, j + 1, base - old_y[j], Cause::push});
        if (target > base) traj.record({step, k, j + 1, target - base, Cause::self});
        y[j] = target;
      }
      above_old = old_y;
      state.mutable_row(k) = std::move(y);
    }
    if (options.check_invariants && !is_valid(state))
      throw std::logic_error("invalid pattern after step " + std::to_string(s + 1));
  }
  return traj;
}

Trajectory simulate_geometric(std::size_t n, const RateVector& q, const Pattern& init, int steps, Rng& rng,
                              SimulationOptions options) {
  check_init(init, PatternKind::standard, n);
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  for (std::size_t k = 0; k < n; ++k)
    if (!(q[k] > 0 && q[k] < 1)) throw std::invalid_argument("geometric rates must lie in (0,1)");
  return simulate_geometric_driven(init, sample_geometric_noise(n, q, steps, rng), options);
}

namespace {

void record_move(Trajectory& traj, double time, const Row& from, const Row& to) {
  for (std::size_t i = 0; i < from.size(); ++i)
    if (to[i] != from[i]) traj.record({time, 1, i + 1, to[i] - from[i], Cause::self});
}

// Picks a target from a row of nonnegative weights; returns nullptr when the
// draw lands in the residual mass `total - sum(weights)`.
const Row* pick(const std::vector<std::pair<const Row*, double>>& weights, double total, Rng& rng) {
  double u = uniform01(rng) * total;
  for (const auto& [to, w] : weights) {
    if (u < w) return to;
    u -= w;
  }
  return nullptr;
}

}  // namespace

Trajectory simulate_reference(const SparseGenerator<Row>& q, const ChamberPoint& init, const Rational& horizon,
                              Rng& rng) {
  if (!q.contains(init.coords())) throw std::invalid_argument("initial point outside the generator's state space");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  Trajectory traj(init, TimeKind::continuous);
  const double t_end = to_double(horizon);
  Row x = init.coords();
  double t = 0;
  for (;;) {
    const double leave = -to_double(q.at(x, x));
    if (!(leave > 0)) break;
    t += sample_exponential(rng, leave);
    if (t > t_end) break;
    std::vector<std::pair<const Row*, double>> weights;
    for (const auto& [to, v] : q.row(x))
      if (to != x) weights.emplace_back(&to, to_double(v));
    const Row* to = pick(weights, leave, rng);
    if (!to) {
      traj.mark_escaped(t);
      break;
    }
    record_move(traj, t, x, *to);
    x = *to;
  }
  return traj;
}

Trajectory simulate_reference_steps(const StepKernel<Row>& p, const ChamberPoint& init, int steps, Rng& rng) {
  if (!p.contains(init.coords())) throw std::invalid_argument("initial point outside the kernel's state space");
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  Trajectory traj(init, TimeKind::discrete);
  Row x = init.coords();
  for (int s = 1; s <= steps; ++s) {
    std::vector<std::pair<const Row*, double>> weights;
    for (const auto& [to, v] : p.row(x)) weights.emplace_back(&to, to_double(v));
    const Row* to = pick(weights, 1.0, rng);
    if (!to) {
      traj.mark_escaped(s);
      break;
    }
    record_move(traj, s, x, *to);
    x = *to;
  }
  return traj;
}

}  // namespace gtpush
