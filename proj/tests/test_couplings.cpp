#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "gtpush/couplings.hpp"
#include "gtpush/harness.hpp"
#include "gtpush/intertwine.hpp"
#include "gtpush/kernels.hpp"
#include "oracles.hpp"

using namespace gtpush;

namespace {

const Rational q1(1, 2), q2(1, 3), q3(1, 5);

RateVector rv(std::initializer_list<Rational> r, bool unit = false) { return RateVector(std::vector<Rational>(r), unit); }

long brute_lpp(const GeometricPanel& p, std::size_t k, std::size_t t) { return oracle::brute_lpp(p.eta, k, t); }

}  // namespace

TEST(LeftEdge, ZeroPathsGiveZero) {
  PoissonPanel p{1.0, {{}, {}, {}}};
  auto out = left_edge_from_walk(p, {0.0, 0.5, 1.0});
  for (const auto& row : out)
    for (int v : row) EXPECT_EQ(v, 0);
}

TEST(LeftEdge, HandTrace) {
  PoissonPanel p{1.0, {{0.5}, {0.3}}};
  auto out = left_edge_from_walk(p, {0.2, 0.4, 0.6});
  EXPECT_EQ(out[0], (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(out[1], (std::vector<int>{0, 0, 0}));  // the jump at 0.3 is blocked
  PoissonPanel r{1.0, {{0.1, 0.2}, {0.3, 0.35, 0.4}}};
  auto o2 = left_edge_from_walk(r, {0.25, 0.45});
  EXPECT_EQ(o2[0], (std::vector<int>{2, 2}));
  EXPECT_EQ(o2[1], (std::vector<int>{0, 2}));
}

TEST(LeftEdge, RowOneIsTheWalk) {
  Rng rng(3);
  auto p = sample_poisson_panel(rv({q1, q2, q3}), 2.0, rng);
  std::vector<double> grid{0.0, 0.3, 0.9, 1.5, 2.0};
  auto out = left_edge_from_walk(p, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_EQ(out[0][g], p.value(1, grid[g]));
}

TEST(LeftEdge, RejectsUnsortedGrid) {
  PoissonPanel p{1.0, {{0.5}}};
  EXPECT_THROW(left_edge_from_walk(p, {0.5, 0.1}), std::invalid_argument);
}

TEST(LeftEdge, PathwiseEqualityWithDynamics) {
  const RateVector q = rv({Rational(1), Rational(3, 2), Rational(2)});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng = make_stream(1000, seed);
    auto panel = sample_poisson_panel(q, 2.0, rng);
    ASSERT_TRUE(left_edge_equals_walk(panel, q, derive_stream_seed(2000, seed))) << seed;
  }
}

TEST(LeftEdge, DetectsMismatch) {
  // A panel whose second row differs from the clocks actually used.
  const RateVector q = rv({Rational(1), Rational(1)});
  Rng rng(2);
  auto panel = sample_poisson_panel(q, 2.0, rng);
  panel.times[0] = {0.1, 0.2, 0.3};
  panel.times[1] = {0.5};
  Trajectory traj = simulate_poisson_from_panel(panel, q, 1);
  PoissonPanel other = panel;
  other.times[1] = {0.7};
  std::vector<double> grid{0.6, 1.0};
  EXPECT_NE(left_edge_from_walk(other, grid), left_edge_of(traj, grid));
}

TEST(Lpp, ZeroPanel) {
  GeometricPanel p{{{0, 0, 0}, {0, 0, 0}}};
  for (const auto& row : lpp_G(p, 2, 3))
    for (long v : row) EXPECT_EQ(v, 0);
}

TEST(Lpp, TwoByTwoExample) {
  GeometricPanel p{{{1, 2}, {3, 4}}};
  auto g = lpp_G(p, 2, 2);
  EXPECT_EQ(g[1][2], 8);
  EXPECT_EQ(brute_lpp(p, 2, 2), 8);
}

TEST(Lpp, MatchesPathEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = sample_geometric_panel(rv({q1, q2, q3, Rational(2, 3)}, true), 4, rng);
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t t = 1; t <= 4; ++t) {
        auto g = lpp_G(p, n, t);
        EXPECT_EQ(g[n - 1][t], brute_lpp(p, n, t));
      }
  }
}

TEST(Lpp, RejectsSmallPanel) {
  GeometricPanel p{{{1, 2}}};
  EXPECT_THROW(lpp_G(p, 2, 2), std::invalid_argument);
}

TEST(Lpp, RightEdgeEqualsLastPassage) {
  const RateVector q = rv({q1, q2, q3}, true);
  GeometricPanel zero{{{0, 0}, {0, 0}, {0, 0}}};
  EXPECT_TRUE(right_edge_equals_lpp(zero, q, 3, 2, 1));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng = make_stream(3000, seed);
    auto panel = sample_geometric_panel(q, 10, rng);
    ASSERT_TRUE(right_edge_equals_lpp(panel, q, 3, 10, derive_stream_seed(4000, seed))) << seed;
  }
}

TEST(Lpp, SingleEntryPanel) {
  GeometricPanel p{{{0}, {5}}};
  auto g = lpp_G(p, 2, 1);
  EXPECT_EQ(g[1][1], 5);
  const RateVector q = rv({q1, q2}, true);
  auto traj = simulate_geometric_driven(zero_pattern(PatternKind::standard, 2), noise_with_right_edge(p, q, 2, 1, 9));
  EXPECT_EQ(traj.final_pattern().row(2)[1], 5);
  EXPECT_TRUE(right_edge_equals_lpp(p, q, 2, 1, 9));
}

TEST(WallSup, ZeroIncrements) {
  WallPanel p{1.0, {{}, {}}};
  EXPECT_EQ(wall_sup_functional(p, 1.0), 0);
}

TEST(WallSup, SingleJumpExample) {
  WallPanel p{1.0, {WalkPath{{{0.3, +1}}}, WalkPath{}}};
  EXPECT_EQ(wall_sup_functional(p, 1.0), 1);
  EXPECT_EQ(wall_sup_functional(p, 0.2), 0);
}

TEST(WallSup, MatchesBruteForceOverEventTimes) {
  // Direct maximization over nondecreasing choices of t_1 .. t_m among
  // {0} ∪ event times ∪ {t}.
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = 1.0;
    auto panel = sample_wall_panel(rv({q1, Rational(2, 3)}, true), t, rng);
    std::vector<double> times{0.0, t};
    for (const auto& c : panel.components)
      for (const auto& [s, d] : c.jumps) times.push_back(s);
    std::sort(times.begin(), times.end());
    const std::size_t m = panel.components.size();
    long best = std::numeric_limits<long>::min();
    std::vector<double> chosen(m + 1, 0.0);
    chosen[m] = t;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t from) {
      if (i == m) {
        long s = 0;
        for (std::size_t j = 0; j < m; ++j)
          s += panel.components[j].value(chosen[j + 1]) - panel.components[j].value(chosen[j]);
        best = std::max(best, s);
        return;
      }
      for (std::size_t k = from; k < times.size(); ++k) {
        chosen[i] = times[k];
        rec(i + 1, k);
      }
    };
    rec(0, 0);
    EXPECT_EQ(wall_sup_functional(panel, t), best);
  }
}

TEST(WallSup, NonnegativeAndBoundedByTotalUpJumps) {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    auto panel = sample_wall_panel(rv({q1}, true), 2.0, rng);
    for (double t = 0; t <= 2.0; t += 0.05) {
      long v = wall_sup_functional(panel, t);
      long ups = 0;
      for (const auto& c : panel.components)
        for (const auto& [s, d] : c.jumps)
          if (s <= t && d > 0) ++ups;
      EXPECT_GE(v, 0);
      EXPECT_LE(v, ups);
    }
  }
}

TEST(WallSup, MonotoneInPositiveIncrements) {
  Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    auto panel = sample_wall_panel(rv({q1}, true), 1.0, rng);
    long before = wall_sup_functional(panel, 1.0);
    for (auto& c : panel.components) {
      for (auto& [s, d] : c.jumps)
        if (d < 0) {
          d = +1;
          break;
        }
    }
    EXPECT_GE(wall_sup_functional(panel, 1.0), before);
  }
}

TEST(WallSup, DistributionMatchesSymplecticReference) {
  const RateVector q = rv({q1}, true);
  auto samples = sample_wall_sup(q, 1.0, 40000, 5);
  auto g = q_symplectic(2, q, 30);
  Pmf reference = Pmf::with_tail(g.states(), semigroup_row(g, Row{0}, Rational(1), 1e-14));
  EXPECT_GT(chi_square_gof(samples, reference).p_value, 1e-4);
}

TEST(Panels, JsonRoundTrip) {
  Rng rng(4);
  auto pp = sample_poisson_panel(rv({q1, q2}), 1.5, rng);
  auto back = poisson_panel_from_json(to_json(pp));
  EXPECT_EQ(back.times, pp.times);
  EXPECT_EQ(back.horizon, pp.horizon);
  auto gp = sample_geometric_panel(rv({q1, q2}, true), 5, rng);
  EXPECT_EQ(geometric_panel_from_json(to_json(gp)).eta, gp.eta);
  auto wp = sample_wall_panel(rv({q1}, true), 1.0, rng);
  auto wb = wall_panel_from_json(to_json(wp));
  ASSERT_EQ(wb.components.size(), 2u);
  EXPECT_EQ(wb.components[0].jumps, wp.components[0].jumps);
  EXPECT_THROW(geometric_panel_from_json(to_json(pp)), std::invalid_argument);
  EXPECT_THROW(geometric_panel_from_json(R"({"kind":"geometric","eta":[[1,-1]]})"), std::invalid_argument);
  EXPECT_THROW(poisson_panel_from_json(R"({"kind":"poisson","horizon":1,"times":[[0.5,0.2]]})"),
               std::invalid_argument);
}
