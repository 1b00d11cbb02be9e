#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gtpush/dynamics.hpp"
#include "gtpush/harness.hpp"
#include "gtpush/intertwine.hpp"
#include "gtpush/kernels.hpp"

using namespace gtpush;

namespace {

const Rational q1(1, 2), q2(1, 3), q3(1, 5);

RateVector rv(std::initializer_list<Rational> r, bool unit = false) { return RateVector(std::vector<Rational>(r), unit); }

Pattern std_zero(std::size_t n) { return zero_pattern(PatternKind::standard, n); }
Pattern sp_zero(std::size_t n) { return zero_pattern(PatternKind::symplectic, n); }

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

TEST(Poisson, ZeroHorizonIsEmpty) {
  Rng rng(1);
  EXPECT_TRUE(simulate_poisson(2, rv({q1, q2}), std_zero(2), Rational(0), rng).events().empty());
}

TEST(Poisson, RejectsInvalidInit) {
  Rng rng(1);
  EXPECT_THROW(simulate_poisson(2, rv({q1, q2}), Pattern(PatternKind::standard, {{3}, {0, 1}}), Rational(1), rng),
               std::invalid_argument);
  EXPECT_THROW(simulate_poisson(3, rv({q1, q2, q3}), std_zero(2), Rational(1), rng), std::invalid_argument);
  EXPECT_THROW(simulate_poisson(2, rv({q1, q2}), std_zero(2), Rational(-1), rng), std::invalid_argument);
}

TEST(Poisson, SingleParticleIsPoissonCounting) {
  const int runs = 100000;
  const Rational q(3, 2);
  std::vector<double> counts;
  for (int i = 0; i < runs; ++i) {
    Rng rng = make_stream(5, static_cast<std::uint64_t>(i));
    counts.push_back(static_cast<double>(simulate_poisson(1, RateVector({q}), std_zero(1), Rational(1), rng).events().size()));
  }
  const double lambda = 1.5, sigma = std::sqrt(lambda / runs);
  EXPECT_NEAR(mean(counts), lambda, 3 * sigma);
}

TEST(Poisson, PushesOnlyFromEqualPositionsAndStaysValid) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto traj = simulate_poisson(3, rv({Rational(2), Rational(1), Rational(1, 2)}), std_zero(3), Rational(3), rng, {},
                                 {.check_invariants = true});
    EXPECT_TRUE(traj.replay_valid());
    Pattern p = traj.initial_pattern();
    const auto& ev = traj.events();
    for (std::size_t i = 0; i < ev.size(); ++i) {
      if (ev[i].cause == Cause::push) {
        ASSERT_GT(i, 0u);
        const auto& pusher = ev[i - 1];
        EXPECT_EQ(pusher.time, ev[i].time);
        EXPECT_EQ(ev[i].row, pusher.row + 1);
        EXPECT_EQ(ev[i].index, pusher.index + 1);
        // The pushed particle sat at the pusher's pre-jump position.
        EXPECT_EQ(p.row(ev[i].row)[ev[i].index - 1], p.row(pusher.row)[pusher.index - 1] - 1);
      }
      EXPECT_EQ(ev[i].displacement, 1);
      p.mutable_row(ev[i].row)[ev[i].index - 1] += ev[i].displacement;
    }
  }
}

TEST(Poisson, DeterministicUnderSeed) {
  auto run = [] {
    Rng rng(99);
    return simulate_poisson(3, rv({q1, q2, q3}), std_zero(3), Rational(5), rng).to_jsonl();
  };
  const std::string a = run(), b = run();
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
  EXPECT_NE(a.find("\"cause\":\"self\""), std::string::npos);
}

TEST(Poisson, OverriddenClockRingsAtGivenTimes) {
  Rng rng(4);
  ClockOverrides o{{{1, 1}, {0.25, 0.5, 0.75}}};
  auto traj = simulate_poisson(1, rv({q1}), std_zero(1), Rational(1), rng, o);
  ASSERT_EQ(traj.events().size(), 3u);
  EXPECT_EQ(traj.events()[1].time, 0.5);
  EXPECT_EQ(traj.final_pattern().bottom(), Row{3});
}

TEST(Poisson, BottomRowLawMatchesCharlierSemigroup) {
  ExperimentConfig c;
  c.model = Model::poisson;
  c.n = 2;
  c.q = {"1/2", "1/3"};
  c.horizon = "1";
  c.trials = 40000;
  c.seed = 17;
  c.bound = 20;
  auto r = run_marginal_experiment(c);
  EXPECT_LT(r.tv, 0.03);
  EXPECT_GT(r.chi_square.p_value, 1e-4);
}

TEST(Poisson, RandomInitialLawFromMz) {
  // Started from M_z with z = (0, 1, 2) the bottom row is the Charlier chain from z.
  ExperimentConfig c;
  c.model = Model::poisson;
  c.n = 3;
  c.q = {"1/2", "1/3", "1/5"};
  c.z = {0, 1, 2};
  c.horizon = "1/2";
  c.trials = 40000;
  c.seed = 8;
  c.bound = 10;
  auto r = run_marginal_experiment(c);
  EXPECT_LT(r.tv, 0.03);
  EXPECT_GT(r.chi_square.p_value, 1e-4);
}

TEST(Poisson, TwoTimeMarginalMatchesSemigroup) {
  // Joint law of (Y(1/2), Y(1)) against p_{1/2}(z, a) p_{1/2}(a, b).
  const RateVector q = rv({q1, q2});
  const int B = 14;
  auto g = q_charlier(2, q, B);
  auto p = semigroup(g, Rational(1, 2), 1e-14);
  std::vector<Row> support;
  std::vector<double> probs;
  const std::size_t s0 = p.index({0, 0});
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < p.size(); ++b) {
      double w = p(s0, a) * p(a, b);
      if (w < 1e-9) continue;
      Row joint = p.states()[a];
      joint.insert(joint.end(), p.states()[b].begin(), p.states()[b].end());
      support.push_back(joint);
      probs.push_back(w);
    }
  Pmf reference = Pmf::with_tail(support, probs);
  auto samples = run_trials<Row>(40000, 23, [&](std::size_t, Rng& rng) {
    auto traj = simulate_poisson(2, q, std_zero(2), Rational(1), rng);
    Row joint = traj.pattern_at(0.5).bottom();
    Row end = traj.final_pattern().bottom();
    joint.insert(joint.end(), end.begin(), end.end());
    return joint;
  });
  std::vector<Row> keep(support.begin(), support.end());
  EXPECT_LT(tv_distance(Pmf::empirical(samples).coarsen(keep), reference), 0.04);
  EXPECT_GT(chi_square_gof(samples, reference).p_value, 1e-4);
}

TEST(Geometric, ZeroStepsKeepsInit) {
  Rng rng(1);
  Pattern init(PatternKind::standard, {{1}, {0, 2}});
  auto traj = simulate_geometric(2, rv({q1, q2}, true), init, 0, rng);
  EXPECT_TRUE(traj.events().empty());
  EXPECT_EQ(traj.final_pattern(), init);
}

TEST(Geometric, RejectsBadParameters) {
  Rng rng(1);
  EXPECT_THROW(simulate_geometric(1, rv({Rational(2)}), std_zero(1), 3, rng), std::invalid_argument);
  EXPECT_THROW(simulate_geometric(2, rv({q1, q2}, true), Pattern(PatternKind::standard, {{3}, {0, 1}}), 3, rng),
               std::invalid_argument);
}

TEST(Geometric, SingleParticleMean) {
  const int runs = 100000, steps = 3;
  const double q = 0.5;
  std::vector<double> pos;
  for (int i = 0; i < runs; ++i) {
    Rng rng = make_stream(6, static_cast<std::uint64_t>(i));
    pos.push_back(simulate_geometric(1, rv({q1}, true), std_zero(1), steps, rng).final_pattern().bottom()[0]);
  }
  const double m = steps * q / (1 - q), var = steps * q / ((1 - q) * (1 - q));
  EXPECT_NEAR(mean(pos), m, 3 * std::sqrt(var / runs));
}

TEST(Geometric, HandTracedStep) {
  // Rows (1), (0,1) and jumps xi = [(2), (5, 0)]: X^1 = 3; Y_1 = min(0 + 5, 1) = 1;
  // Y_2 = max(1, 3) + 0 = 3.
  Pattern init(PatternKind::standard, {{1}, {0, 1}});
  GeometricNoise noise{{{2}, {5, 0}}};
  auto traj = simulate_geometric_driven(init, noise);
  EXPECT_EQ(traj.final_pattern().rows(), (std::vector<Row>{{3}, {1, 3}}));
  ASSERT_EQ(traj.events().size(), 3u);
  EXPECT_EQ(traj.events()[2].cause, Cause::push);
  EXPECT_EQ(traj.events()[2].displacement, 2);
}

TEST(Geometric, InterlacingHoldsAfterEveryStep) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto traj = simulate_geometric(4, rv({q1, q2, q3, Rational(2, 3)}, true), std_zero(4), 10, rng,
                                   {.check_invariants = true});
    EXPECT_TRUE(traj.replay_valid());
  }
}

TEST(Geometric, BottomRowLawMatchesKernelPower) {
  ExperimentConfig c;
  c.model = Model::geometric;
  c.n = 2;
  c.q = {"1/2", "1/3"};
  c.horizon = "3";
  c.trials = 40000;
  c.seed = 4;
  c.bound = 22;
  auto r = run_marginal_experiment(c);
  EXPECT_LT(r.tv, 0.03);
  EXPECT_GT(r.chi_square.p_value, 1e-4);
}

TEST(Wall, ZeroHorizonIsEmpty) {
  Rng rng(1);
  EXPECT_TRUE(simulate_wall(2, rv({q1}, true), sp_zero(2), Rational(0), rng).events().empty());
}

TEST(Wall, SingleParticleBirthDeath) {
  // Row 1 alone: right at rate q, left at rate 1/q off the wall. Compare with
  // the Q_1 semigroup at t = 1.
  ExperimentConfig c;
  c.model = Model::wall;
  c.n = 1;
  c.q = {"1/2"};
  c.horizon = "1";
  c.trials = 40000;
  c.seed = 2;
  c.bound = 16;
  auto r = run_marginal_experiment(c);
  EXPECT_LT(r.tv, 0.03);
  EXPECT_GT(r.chi_square.p_value, 1e-4);
  Rng rng(5);
  auto traj = simulate_wall(1, rv({q1}, true), sp_zero(1), Rational(20), rng);
  EXPECT_TRUE(traj.replay_valid());
  for (const auto& e : traj.events()) EXPECT_EQ(std::abs(e.displacement), 1);
}

TEST(Wall, StatesStayValid) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto traj = simulate_wall(5, rv({q1, q2, Rational(2, 3)}, true), sp_zero(5), Rational(2), rng,
                              {.check_invariants = true});
    EXPECT_TRUE(traj.replay_valid());
  }
}

TEST(Wall, BottomRowLawMatchesSymplecticSemigroup) {
  for (std::size_t n : {2u, 3u, 4u}) {
    ExperimentConfig c;
    c.model = Model::wall;
    c.n = n;
    c.q = n <= 2 ? std::vector<std::string>{"1/2"} : std::vector<std::string>{"1/2", "1/3"};
    c.horizon = "1/2";
    c.trials = 30000;
    c.seed = 40 + n;
    c.bound = 16;
    auto r = run_marginal_experiment(c);
    EXPECT_LT(r.tv, 0.04) << n;
    EXPECT_GT(r.chi_square.p_value, 1e-4) << n;
  }
}

TEST(Reference, NoRatesNoEvents) {
  SparseGenerator<Row> g({{0}, {1}}, 2);
  Rng rng(1);
  auto traj = simulate_reference(g, ChamberPoint({0}), Rational(5), rng);
  EXPECT_TRUE(traj.events().empty());
  EXPECT_FALSE(traj.escaped());
  EXPECT_THROW(simulate_reference(g, ChamberPoint({7}), Rational(1), rng), std::invalid_argument);
}

TEST(Reference, OneDimensionalCharlierIsPoisson) {
  auto g = q_charlier(1, rv({q1}), 40);
  std::vector<double> counts;
  for (int i = 0; i < 50000; ++i) {
    Rng rng = make_stream(31, static_cast<std::uint64_t>(i));
    counts.push_back(simulate_reference(g, ChamberPoint({0}), Rational(2), rng).final_point()[0]);
  }
  EXPECT_NEAR(mean(counts), 1.0, 3 * std::sqrt(1.0 / 50000));
}

TEST(Reference, TwoDimensionalCharlierAgainstUniformization) {
  const RateVector q = rv({q1, q2});
  auto g = q_charlier(2, q, 20);
  auto exact = semigroup_row(g, Row{0, 0}, Rational(1), 1e-14);
  Pmf reference = Pmf::with_tail(g.states(), exact);
  auto samples = run_trials<Row>(100000, 77, [&](std::size_t, Rng& rng) {
    auto t = simulate_reference(g, ChamberPoint({0, 0}), Rational(1), rng);
    return t.escaped() ? Row{} : t.final_point();
  });
  EXPECT_LT(tv_distance(Pmf::empirical(samples), reference), 0.02);
}

TEST(Reference, StepsFollowGeometricKernel) {
  const RateVector q = rv({q1, q2}, true);
  auto k = kernel_geometric(2, q, 20);
  auto exact = kernel_power_row(k, Row{0, 0}, 2);
  Pmf reference = Pmf::with_tail(k.states(), exact);
  auto samples = run_trials<Row>(50000, 78, [&](std::size_t, Rng& rng) {
    auto t = simulate_reference_steps(k, ChamberPoint({0, 0}), 2, rng);
    return t.escaped() ? Row{} : t.final_point();
  });
  EXPECT_LT(tv_distance(Pmf::empirical(samples), reference), 0.03);
}

TEST(Reference, EscapeIsFlagged) {
  auto g = q_charlier(1, rv({Rational(5)}), 2);
  Rng rng(3);
  auto t = simulate_reference(g, ChamberPoint({0}), Rational(10), rng);
  EXPECT_TRUE(t.escaped());
  EXPECT_LE(t.final_point()[0], 2);
}

TEST(TrajectoryTest, JsonLines) {
  Trajectory t(std_zero(2), TimeKind::discrete);
  t.record({1, 2, 2, 3, Cause::push});
  EXPECT_EQ(t.to_jsonl(), "{\"t\":1,\"row\":2,\"i\":2,\"d\":3,\"cause\":\"push\"}\n");
  EXPECT_TRUE(t.replay_valid());
  Trajectory bad(std_zero(2), TimeKind::continuous);
  bad.record({0.5, 2, 1, 1, Cause::self});
  EXPECT_FALSE(bad.replay_valid());
}
