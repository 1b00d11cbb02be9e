#include "gtpush/couplings.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace gtpush {

using nlohmann::json;

namespace {

void check_times(const std::vector<double>& times, double horizon, const char* what) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || times[i] > horizon) throw std::invalid_argument(std::string(what) + ": time outside horizon");
    if (i > 0 && !(times[i - 1] < times[i]))
      throw std::invalid_argument(std::string(what) + ": times must be strictly increasing");
  }
}

std::vector<double> poisson_times(Rng& rng, double rate, double horizon) {
  std::vector<double> out;
  double t = sample_exponential(rng, rate);
  while (t <= horizon) {
    out.push_back(t);
    t += sample_exponential(rng, rate);
  }
  return out;
}

WalkPath sample_walk(Rng& rng, double right, double left, double horizon) {
  WalkPath w;
  const double total = right + left;
  double t = sample_exponential(rng, total);
  while (t <= horizon) {
    w.jumps.emplace_back(t, uniform01(rng) * total < right ? +1 : -1);
    t += sample_exponential(rng, total);
  }
  return w;
}

}  // namespace

int PoissonPanel::value(std::size_t k, double t) const {
  const auto& ts = times.at(k - 1);
  return static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
}

void PoissonPanel::validate() const {
  for (const auto& ts : times) check_times(ts, horizon, "poisson panel");
}

void GeometricPanel::validate() const {
  for (const auto& row : eta) {
    if (row.size() != steps()) throw std::invalid_argument("geometric panel rows differ in length");
    for (int v : row)
      if (v < 0) throw std::invalid_argument("geometric panel entries must be nonnegative");
  }
}

int WalkPath::value(double t) const {
  int v = 0;
  for (const auto& [s, d] : jumps) {
    if (s > t) break;
    v += d;
  }
  return v;
}

void WallPanel::validate() const {
  if (components.size() % 2 != 0) throw std::invalid_argument("wall panel needs an even number of components");
  for (const auto& c : components) {
    std::vector<double> ts;
    for (const auto& [t, d] : c.jumps) {
      if (d != 1 && d != -1) throw std::invalid_argument("wall panel jumps must be +1 or -1");
      ts.push_back(t);
    }
    check_times(ts, horizon, "wall panel");
  }
}

PoissonPanel sample_poisson_panel(const RateVector& q, double horizon, Rng& rng) {
  PoissonPanel p;
  p.horizon = horizon;
  for (std::size_t k = 0; k < q.size(); ++k) p.times.push_back(poisson_times(rng, to_double(q[k]), horizon));
  return p;
}

GeometricPanel sample_geometric_panel(const RateVector& q, int t_max, Rng& rng) {
  GeometricPanel p;
  p.eta.resize(q.size());
  for (int t = 0; t < t_max; ++t)
    for (std::size_t k = 0; k < q.size(); ++k) p.eta[k].push_back(sample_geometric(rng, to_double(q[k])));
  return p;
}

WallPanel sample_wall_panel(const RateVector& q, double horizon, Rng& rng) {
  WallPanel p;
  p.horizon = horizon;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double qi = to_double(q[i]);
    p.components.push_back(sample_walk(rng, 1.0 / qi, qi, horizon));
    p.components.push_back(sample_walk(rng, qi, 1.0 / qi, horizon));
  }
  return p;
}

std::string to_json(const PoissonPanel& p) {
  return json{{"kind", "poisson"}, {"horizon", p.horizon}, {"times", p.times}}.dump();
}

std::string to_json(const GeometricPanel& p) { return json{{"kind", "geometric"}, {"eta", p.eta}}.dump(); }

std::string to_json(const WallPanel& p) {
  json comps = json::array();
  for (const auto& c : p.components) {
    json jumps = json::array();
    for (const auto& [t, d] : c.jumps) jumps.push_back({t, d});
    comps.push_back(jumps);
  }
  return json{{"kind", "wall"}, {"horizon", p.horizon}, {"components", comps}}.dump();
}

namespace {

json parse_kind(const std::string& text, const char* kind) {
  json j = json::parse(text);
  if (j.value("kind", "") != kind) throw std::invalid_argument(std::string("expected a ") + kind + " panel");
  return j;
}

}  // namespace

PoissonPanel poisson_panel_from_json(const std::string& text) {
  json j = parse_kind(text, "poisson");
  PoissonPanel p;
  p.horizon = j.at("horizon").get<double>();
  p.times = j.at("times").get<std::vector<std::vector<double>>>();
  p.validate();
  return p;
}

GeometricPanel geometric_panel_from_json(const std::string& text) {
  json j = parse_kind(text, "geometric");
  GeometricPanel p;
  p.eta = j.at("eta").get<std::vector<std::vector<int>>>();
  p.validate();
  return p;
}

WallPanel wall_panel_from_json(const std::string& text) {
  json j = parse_kind(text, "wall");
  WallPanel p;
  p.horizon = j.at("horizon").get<double>();
  for (const auto& c : j.at("components")) {
    WalkPath w;
    for (const auto& e : c) w.jumps.emplace_back(e.at(0).get<double>(), e.at(1).get<int>());
    p.components.push_back(std::move(w));
  }
  p.validate();
  return p;
}

std::vector<std::vector<int>> left_edge_from_walk(const PoissonPanel& panel, const std::vector<double>& t_grid) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw std::invalid_argument("time grid must be sorted");
  const std::size_t n = panel.size();
  std::vector<std::pair<double, std::size_t>> events;
  for (std::size_t k = 0; k < n; ++k)
    for (double t : panel.times[k]) events.emplace_back(t, k);
  std::sort(events.begin(), events.end());

  std::vector<int> z(n, 0), edge(n, 0), running_inf(n, 0);
  std::vector<std::vector<int>> out(n, std::vector<int>(t_grid.size(), 0));
  std::size_t e = 0;
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    while (e < events.size() && events[e].first <= t_grid[g]) {
      const double now = events[e].first;
      while (e < events.size() && events[e].first == now) ++z[events[e++].second];
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) running_inf[k] = std::min(running_inf[k], edge[k - 1] - z[k]);
        edge[k] = z[k] + running_inf[k];
      }
    }
    for (std::size_t k = 0; k < n; ++k) out[k][g] = edge[k];
  }
  return out;
}

std::vector<std::vector<int>> left_edge_of(const Trajectory& traj, const std::vector<double>& t_grid) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw std::invalid_argument("time grid must be sorted");
  Pattern p = traj.initial_pattern();
  const std::size_t n = p.depth();
  std::vector<std::vector<int>> out(n, std::vector<int>(t_grid.size(), 0));
  std::size_t e = 0;
  const auto& events = traj.events();
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    for (; e < events.size() && events[e].time <= t_grid[g]; ++e)
      p.mutable_row(events[e].row)[events[e].index - 1] += events[e].displacement;
    for (std::size_t k = 1; k <= n; ++k) out[k - 1][g] = p.row(k).front();
  }
  return out;
}

Trajectory simulate_poisson_from_panel(const PoissonPanel& panel, const RateVector& q, std::uint64_t bulk_seed) {
  const std::size_t n = panel.size();
  ClockOverrides overrides;
  for (std::size_t k = 1; k <= n; ++k) overrides[{k, 1}] = panel.times[k - 1];
  Rng rng(bulk_seed);
  return simulate_poisson(n, q, zero_pattern(PatternKind::standard, n), Rational(panel.horizon), rng, overrides);
}

bool left_edge_equals_walk(const PoissonPanel& panel, const RateVector& q, std::uint64_t bulk_seed) {
  Trajectory traj = simulate_poisson_from_panel(panel, q, bulk_seed);
  std::vector<double> grid;
  for (const auto& ts : panel.times) grid.insert(grid.end(), ts.begin(), ts.end());
  for (const auto& e : traj.events()) grid.push_back(e.time);
  grid.push_back(panel.horizon);
  std::sort(grid.begin(), grid.end());
  return left_edge_from_walk(panel, grid) == left_edge_of(traj, grid);
}

std::vector<std::vector<long>> lpp_G(const GeometricPanel& panel, std::size_t n, std::size_t t_max) {
  if (n > panel.rows() || t_max > panel.steps()) throw std::invalid_argument("panel too small for lpp_G");
  std::vector<std::vector<long>> g(n, std::vector<long>(t_max + 1, 0));
  for (std::size_t t = 1; t <= t_max; ++t)
    for (std::size_t k = 0; k < n; ++k) {
      long below = k > 0 ? g[k - 1][t] : 0;
      g[k][t] = std::max(below, g[k][t - 1]) + panel.eta[k][t - 1];
    }
  return g;
}

GeometricNoise noise_with_right_edge(const GeometricPanel& panel, const RateVector& q, std::size_t n,
                                     std::size_t t_max, std::uint64_t bulk_seed) {
  if (n > panel.rows() || t_max > panel.steps()) throw std::invalid_argument("panel too small");
  Rng rng(bulk_seed);
  GeometricNoise noise = sample_geometric_noise(n, q, static_cast<int>(t_max), rng);
  for (std::size_t t = 0; t < t_max; ++t)
    for (std::size_t k = 1; k <= n; ++k) noise[t][k - 1][k - 1] = panel.eta[k - 1][t];
  return noise;
}

bool right_edge_equals_lpp(const GeometricPanel& panel, const RateVector& q, std::size_t n, std::size_t t_max,
                           std::uint64_t bulk_seed) {
  auto g = lpp_G(panel, n, t_max);
  Trajectory traj =
      simulate_geometric_driven(zero_pattern(PatternKind::standard, n), noise_with_right_edge(panel, q, n, t_max, bulk_seed));
  for (std::size_t t = 1; t <= t_max; ++t) {
    Pattern p = traj.pattern_at(static_cast<double>(t));
    for (std::size_t k = 1; k <= n; ++k)
      if (p.row(k).back() != g[k - 1][t]) return false;
  }
  return true;
}

long wall_sup_functional(const WallPanel& panel, double t) {
  const std::size_t m = panel.components.size();
  std::vector<std::pair<double, std::size_t>> events;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < panel.components[i].jumps.size(); ++j)
      if (panel.components[i].jumps[j].first <= t) events.emplace_back(panel.components[i].jumps[j].first, i);
  std::sort(events.begin(), events.end());

  // W_i(s) = Zbar_i(s) + sup_{u <= s} (W_{i-1}(u) - Zbar_i(u)), W_0 = 0.
  std::vector<long> z(m, 0), w(m + 1, 0), best(m, 0);
  std::vector<std::size_t> cursor(m, 0);
  auto refresh = [&] {
    for (std::size_t i = 1; i <= m; ++i) {
      best[i - 1] = std::max(best[i - 1], w[i - 1] - z[i - 1]);
      w[i] = z[i - 1] + best[i - 1];
    }
  };
  refresh();
  for (std::size_t e = 0; e < events.size();) {
    const double now = events[e].first;
    for (; e < events.size() && events[e].first == now; ++e) {
      const std::size_t i = events[e].second;
      z[i] += panel.components[i].jumps[cursor[i]++].second;
    }
    refresh();
  }
  return w[m];
}

}  // namespace gtpush
