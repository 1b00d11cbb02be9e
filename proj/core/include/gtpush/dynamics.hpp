#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gtpush/patterns.hpp"
#include "gtpush/rational.hpp"
#include "gtpush/rng.hpp"
#include "gtpush/sparse.hpp"

namespace gtpush {

enum class Cause { self, push };

std::string to_string(Cause c);

// One coordinate move. Rows and indices are 1-based. For discrete time
// chains `time` holds the step number.
struct Event {
  double time = 0;
  std::size_t row = 0;
  std::size_t index = 0;
  int displacement = 0;
  Cause cause = Cause::self;

  bool operator==(const Event&) const = default;
};

enum class TimeKind { continuous, discrete };

// Initial state plus the ordered event list. Events that share a time stamp
// form one transition (a jump followed by the pushes it causes, or one step
// of a discrete chain); intermediate states inside a transition need not be
// valid.
class Trajectory {
 public:
  Trajectory(Pattern initial, TimeKind kind);
  Trajectory(ChamberPoint initial, TimeKind kind);

  TimeKind time_kind() const { return kind_; }
  bool is_pattern() const { return std::holds_alternative<Pattern>(initial_); }
  const Pattern& initial_pattern() const;
  const ChamberPoint& initial_point() const;
  const std::vector<Event>& events() const { return events_; }
  void record(const Event& e) { events_.push_back(e); }

  // Set when a reference chain tried to leave its truncated state space;
  // the trajectory stops at that time.
  bool escaped() const { return escaped_; }
  void mark_escaped(double time) {
    escaped_ = true;
    escape_time_ = time;
  }
  double escape_time() const { return escape_time_; }

  // State after all events with time <= t.
  Pattern pattern_at(double t) const;
  Row point_at(double t) const;
  Pattern final_pattern() const;
  Row final_point() const;

  // Replays every transition and checks validity after each one.
  bool replay_valid() const;

  // One JSON object per line: {"t":..,"row":..,"i":..,"d":..,"cause":..}.
  std::string to_jsonl() const;

 private:
  std::variant<Pattern, ChamberPoint> initial_;
  TimeKind kind_;
  std::vector<Event> events_;
  bool escaped_ = false;
  double escape_time_ = 0;
};

struct SimulationOptions {
  // Check the pattern after every transition and throw std::logic_error on
  // the first invalid state.
  bool check_invariants = false;
};

// Exogenous ring times for individual right-jump clocks, keyed by
// (row, index). A clock listed here ignores the random stream.
using ClockOverrides = std::map<std::pair<std::size_t, std::size_t>, std::vector<double>>;

double sample_exponential(Rng& rng, double rate);
// P(ξ = j) = (1 - q) q^j, j >= 0.
int sample_geometric(Rng& rng, double q);

/// Poisson push/block dynamics on standard patterns: particle j of row k
/// attempts right jumps at rate q_k.
Trajectory simulate_poisson(std::size_t n, const RateVector& q, const Pattern& init, const Rational& t_end,
                            Rng& rng, const ClockOverrides& overrides = {}, SimulationOptions options = {});

// Jumps of a geometric pattern step, noise[step][row - 1][index - 1] >= 0.
using GeometricNoise = std::vector<std::vector<Row>>;

GeometricNoise sample_geometric_noise(std::size_t n, const RateVector& q, int steps, Rng& rng);

/// Geometric-jump dynamics: each step updates rows top to bottom by the
/// block/push recursion with geometric(q_k) jumps in row k.
Trajectory simulate_geometric(std::size_t n, const RateVector& q, const Pattern& init, int steps, Rng& rng,
                              SimulationOptions options = {});
Trajectory simulate_geometric_driven(const Pattern& init, const GeometricNoise& noise,
                                     SimulationOptions options = {});

/// PushASEP-type dynamics with a wall on symplectic patterns of depth n.
/// Row 2k-1 jumps right at rate q_k and left at rate 1/q_k, row 2k the
/// other way round.
Trajectory simulate_wall(std::size_t n, const RateVector& q, const Pattern& init, const Rational& t_end, Rng& rng,
                         SimulationOptions options = {});

// Continuous time chain with the given truncated generator.
Trajectory simulate_reference(const SparseGenerator<Row>& q, const ChamberPoint& init, const Rational& horizon,
                              Rng& rng);
// Discrete time chain with the given truncated one-step kernel.
Trajectory simulate_reference_steps(const StepKernel<Row>& p, const ChamberPoint& init, int steps, Rng& rng);

}  // namespace gtpush
