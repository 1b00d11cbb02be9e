#include <benchmark/benchmark.h>

#include "gtpush/couplings.hpp"
#include "gtpush/dynamics.hpp"
#include "gtpush/harness.hpp"
#include "gtpush/intertwine.hpp"
#include "gtpush/kernels.hpp"
#include "gtpush/schur.hpp"

using namespace gtpush;

namespace {

RateVector rates(std::initializer_list<Rational> q, bool unit = false) { return RateVector(std::vector<Rational>(q), unit); }

const Rational q1(1, 2), q2(1, 3), q3(1, 5), q4(1, 7);

void BM_SchurRecursion(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const RateVector q = rates({q1, q2, q3, q4}).prefix(n);
  const auto rows = chamber_states(n, 6);
  for (auto _ : state) {
    SchurEvaluator eval(q);  // fresh cache each iteration
    for (const auto& z : rows) benchmark::DoNotOptimize(eval(z));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * rows.size()));
}
BENCHMARK(BM_SchurRecursion)->DenseRange(1, 4);

void BM_SchurByPatterns(benchmark::State& state) {
  const Row z{0, 1, 2, 4};
  const RateVector q = rates({q1, q2, q3, q4});
  for (auto _ : state) benchmark::DoNotOptimize(schur_by_patterns(z, q));
}
BENCHMARK(BM_SchurByPatterns);

void BM_VerifyIntertwining(benchmark::State& state) {
  const auto variant = static_cast<CouplingVariant>(state.range(0));
  const std::size_t n = static_cast<std::size_t>(state.range(1));
  const int bound = static_cast<int>(state.range(2));
  const RateVector q = rates({q1, q2, q3}, variant != CouplingVariant::poisson)
                           .prefix(CouplingWeight::rate_length(variant, n));
  for (auto _ : state) {
    auto c = build_intertwining_case(variant, n, q, bound);
    benchmark::DoNotOptimize(verify_case(c));
  }
  state.SetLabel(to_string(variant));
}
BENCHMARK(BM_VerifyIntertwining)
    ->Args({static_cast<int>(CouplingVariant::poisson), 2, 6})
    ->Args({static_cast<int>(CouplingVariant::geometric), 2, 5})
    ->Args({static_cast<int>(CouplingVariant::wall_odd_even), 2, 6})
    ->Unit(benchmark::kMillisecond);

void BM_SimulatePoisson(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<Rational> q;
  for (std::size_t k = 1; k <= n; ++k) q.emplace_back(1, k + 1);
  const RateVector rv(q);
  const Pattern init = zero_pattern(PatternKind::standard, n);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_poisson(n, rv, init, Rational(4), rng));
}
BENCHMARK(BM_SimulatePoisson)->RangeMultiplier(2)->Range(2, 16);

void BM_SimulateGeometric(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<Rational> q;
  for (std::size_t k = 1; k <= n; ++k) q.emplace_back(1, k + 1);
  const RateVector rv(q, true);
  const Pattern init = zero_pattern(PatternKind::standard, n);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_geometric(n, rv, init, 10, rng));
}
BENCHMARK(BM_SimulateGeometric)->RangeMultiplier(2)->Range(2, 16);

void BM_SimulateWall(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<Rational> q;
  for (std::size_t k = 1; k <= (n + 1) / 2; ++k) q.emplace_back(1, k + 1);
  const RateVector rv(q, true);
  const Pattern init = zero_pattern(PatternKind::symplectic, n);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_wall(n, rv, init, Rational(1), rng));
}
BENCHMARK(BM_SimulateWall)->DenseRange(2, 8, 2);

void BM_SemigroupRow(benchmark::State& state) {
  const auto g = q_charlier(2, rates({q1, q2}), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(semigroup_row(g, Row{0, 0}, Rational(1), 1e-12));
}
BENCHMARK(BM_SemigroupRow)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_LppRecursion(benchmark::State& state) {
  Rng rng(4);
  const auto p = sample_geometric_panel(rates({q1, q2, q3}, true), 1000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(lpp_G(p, 3, 1000));
}
BENCHMARK(BM_LppRecursion);

}  // namespace

BENCHMARK_MAIN();
