#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gtpush/dynamics.hpp"
#include "gtpush/patterns.hpp"
#include "gtpush/rational.hpp"
#include "gtpush/rng.hpp"

namespace gtpush {

// Jump times of n independent Poisson processes Z_1, ..., Z_n on [0, horizon].
struct PoissonPanel {
  double horizon = 0;
  std::vector<std::vector<double>> times;

  std::size_t size() const { return times.size(); }
  // Z_k(t), k 1-based.
  int value(std::size_t k, double t) const;
  void validate() const;
};

// eta[k-1][t-1] = η_k(t), 1 <= k <= n, 1 <= t <= t_max.
struct GeometricPanel {
  std::vector<std::vector<int>> eta;

  std::size_t rows() const { return eta.size(); }
  std::size_t steps() const { return eta.empty() ? 0 : eta.front().size(); }
  void validate() const;
};

// A nearest neighbour walk started at 0: jump times with their signs.
struct WalkPath {
  std::vector<std::pair<double, int>> jumps;
  int value(double t) const;
};

// Components (Z_1, Z~_1, ..., Z_k, Z~_k) on [0, horizon].
struct WallPanel {
  double horizon = 0;
  std::vector<WalkPath> components;
  void validate() const;
};

PoissonPanel sample_poisson_panel(const RateVector& q, double horizon, Rng& rng);
GeometricPanel sample_geometric_panel(const RateVector& q, int t_max, Rng& rng);
// Z_i jumps right at rate 1/q_i and left at rate q_i; Z~_i is distributed as -Z_i.
WallPanel sample_wall_panel(const RateVector& q, double horizon, Rng& rng);

std::string to_json(const PoissonPanel& p);
std::string to_json(const GeometricPanel& p);
std::string to_json(const WallPanel& p);
PoissonPanel poisson_panel_from_json(const std::string& text);
GeometricPanel geometric_panel_from_json(const std::string& text);
WallPanel wall_panel_from_json(const std::string& text);

/// Left edge built from the walk paths:
/// L^1 = Z_1, L^{k+1}(t) = Z_{k+1}(t) + inf_{s <= t} (L^k(s) - Z_{k+1}(s)).
/// Result[k-1][g] = L^k(t_grid[g]). Throws on an unsorted grid.
std::vector<std::vector<int>> left_edge_from_walk(const PoissonPanel& panel, const std::vector<double>& t_grid);

// Left edge (X^1_1, ..., X^n_1) of a pattern trajectory along t_grid.
std::vector<std::vector<int>> left_edge_of(const Trajectory& traj, const std::vector<double>& t_grid);

// Runs the Poisson dynamics from the zero pattern with the left-edge clocks
// taken from the panel and all other clocks from `bulk_seed`.
Trajectory simulate_poisson_from_panel(const PoissonPanel& panel, const RateVector& q, std::uint64_t bulk_seed);

bool left_edge_equals_walk(const PoissonPanel& panel, const RateVector& q, std::uint64_t bulk_seed);

/// Last passage times, G[k-1][t] for 0 <= t <= t_max (G_k(0) = 0), via
/// G_k(t) = max(G_{k-1}(t), G_k(t-1)) + η_k(t).
std::vector<std::vector<long>> lpp_G(const GeometricPanel& panel, std::size_t n, std::size_t t_max);

// Geometric noise whose right-edge jumps are η and whose bulk jumps are
// drawn from `bulk_seed`.
GeometricNoise noise_with_right_edge(const GeometricPanel& panel, const RateVector& q, std::size_t n,
                                     std::size_t t_max, std::uint64_t bulk_seed);

/// True iff the geometric dynamics from the zero pattern, with right-edge
/// jumps η, has right edge (X^1_1, ..., X^n_n) = (G_1, ..., G_n) after
/// every step.
bool right_edge_equals_lpp(const GeometricPanel& panel, const RateVector& q, std::size_t n, std::size_t t_max,
                           std::uint64_t bulk_seed);

/// sup over 0 <= t_1 <= ... <= t_{m+1} = t of sum_i (Zbar_i(t_{i+1}) - Zbar_i(t_i)),
/// m = number of components, by dynamic programming over event times.
long wall_sup_functional(const WallPanel& panel, double t);

}  // namespace gtpush
