#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "gtpush/intertwine.hpp"
#include "gtpush/patterns.hpp"
#include "gtpush/rational.hpp"
#include "gtpush/rng.hpp"
#include "gtpush/sparse.hpp"

namespace gtpush {

// Finite distribution over rows. The empty row stands for "everything else"
// (mass beyond a truncation), and is an ordinary support point otherwise.
class Pmf {
 public:
  Pmf() = default;
  // Throws unless probs >= 0 and they sum to 1 within 1e-12.
  Pmf(std::vector<Row> support, std::vector<double> probs);

  // Truncated law: the missing mass 1 - sum(probs) goes to the tail point.
  // Throws when the probabilities exceed 1 by more than 1e-9.
  static Pmf with_tail(std::vector<Row> support, std::vector<double> probs);
  static Pmf empirical(const std::vector<Row>& samples);

  const std::vector<Row>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob(const Row& state) const;
  bool has_tail() const;

  // Sends every state outside `keep` to the tail point.
  Pmf coarsen(const std::vector<Row>& keep) const;

  std::string to_csv() const;  // "state,prob" with quoted states

 private:
  std::vector<Row> support_;
  std::vector<double> probs_;
};

// ½ Σ |p - r| over the union of supports.
double tv_distance(const Pmf& p, const Pmf& r);

struct ChiSquareResult {
  double statistic = 0;
  std::size_t bins = 0;
  double p_value = 0;
};

// Pearson goodness of fit. Bins with expected count below 5 are merged into a
// single tail bin, together with the tail point of r and the samples outside
// its support; a tail
// still below 5 is folded into the smallest kept bin. Throws when fewer than
// two bins remain.
ChiSquareResult chi_square_gof(const std::vector<Row>& samples, const Pmf& r);

enum class Model { poisson, geometric, wall };
std::string to_string(Model m);
Model parse_model(const std::string& name);

struct ExperimentConfig {
  Model model = Model::poisson;
  std::size_t n = 1;
  std::vector<std::string> q;  // rational strings
  Row z;                       // bottom row of the initial law; zero when empty
  std::string horizon = "1";   // time (rational) or number of steps
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  int bound = 0;  // truncation of the reference chain
  std::string output;

  RateVector rates() const;
  Row start() const;
  void validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
};

// Worker count: hardware concurrency capped by GTPUSH_THREADS when set.
std::size_t worker_count();

// Runs f(trial_index, rng) for every trial with rng = make_stream(seed, i)
// and returns the results ordered by trial index.
template <class R>
std::vector<R> run_trials(std::size_t trials, std::uint64_t seed, const std::function<R(std::size_t, Rng&)>& f) {
  std::vector<R> out(trials);
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(trials, 1));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < trials; i += workers) {
      Rng rng = make_stream(seed, i);
      out[i] = f(i, rng);
    }
  };
  if (workers <= 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
  return out;
}

// Bottom row of the pattern dynamics at the horizon, started from M_z.
std::vector<Row> sample_bottom_rows(const ExperimentConfig& config);

// Exact law of the bottom row at the horizon from the reference chain
// (Charlier semigroup, geometric kernel power, symplectic semigroup),
// truncated at config.bound with the missing mass as tail.
Pmf reference_law(const ExperimentConfig& config, double tol = 1e-13);

struct ExperimentResult {
  Pmf empirical;
  Pmf reference;
  double tv = 0;
  ChiSquareResult chi_square;
  std::string to_json() const;
};

ExperimentResult run_marginal_experiment(const ExperimentConfig& config);

// Samples of the wall supremum functional at time t for rates q (k = |q|).
std::vector<Row> sample_wall_sup(const RateVector& q, double t, std::size_t trials, std::uint64_t seed);

std::string report_to_json(const VerificationReport& r);

// [{"from": .., "to": .., "value": "p/q"}, ...]
template <class S, class T>
std::string kernel_to_json(const SparseMatrix<S, T>& m);

}  // namespace gtpush
