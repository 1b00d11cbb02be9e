#include "gtpush/harness.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gtpush/couplings.hpp"
#include "gtpush/dynamics.hpp"
#include "gtpush/kernels.hpp"
#include "json.hpp"

namespace gtpush {

using nlohmann::json;

Pmf::Pmf(std::vector<Row> support, std::vector<double> probs) : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.size() != probs_.size()) throw std::invalid_argument("pmf: support and probabilities differ in size");
  if (std::set<Row>(support_.begin(), support_.end()).size() != support_.size())
    throw std::invalid_argument("pmf: repeated support point");
  double sum = 0;
  for (double p : probs_) {
    if (!(p >= 0)) throw std::invalid_argument("pmf: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("pmf: probabilities do not sum to 1");
}

Pmf Pmf::with_tail(std::vector<Row> support, std::vector<double> probs) {
  double sum = 0;
  for (double p : probs) sum += p;
  if (sum > 1.0 + 1e-9) throw std::invalid_argument("pmf: truncated probabilities exceed 1");
  Row tail;
  auto it = std::find(support.begin(), support.end(), tail);
  if (it != support.end()) throw std::invalid_argument("pmf: tail point already present");
  support.push_back(tail);
  probs.push_back(std::max(0.0, 1.0 - sum));
  // Renormalize the rounding so that the exact sum invariant holds.
  double total = 0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return Pmf(std::move(support), std::move(probs));
}

Pmf Pmf::empirical(const std::vector<Row>& samples) {
  if (samples.empty()) throw std::invalid_argument("pmf: no samples");
  std::map<Row, std::size_t> counts;
  for (const auto& s : samples) ++counts[s];
  std::vector<Row> support;
  std::vector<double> probs;
  for (const auto& [s, c] : counts) {
    support.push_back(s);
    probs.push_back(static_cast<double>(c) / static_cast<double>(samples.size()));
  }
  double total = 0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return Pmf(std::move(support), std::move(probs));
}

double Pmf::prob(const Row& state) const {
  auto it = std::find(support_.begin(), support_.end(), state);
  return it == support_.end() ? 0.0 : probs_[static_cast<std::size_t>(it - support_.begin())];
}

bool Pmf::has_tail() const { return std::find(support_.begin(), support_.end(), Row{}) != support_.end(); }

Pmf Pmf::coarsen(const std::vector<Row>& keep) const {
  std::set<Row> kept(keep.begin(), keep.end());
  std::map<Row, double> mass;
  for (std::size_t i = 0; i < support_.size(); ++i) mass[kept.count(support_[i]) ? support_[i] : Row{}] += probs_[i];
  std::vector<Row> support;
  std::vector<double> probs;
  for (const auto& [s, p] : mass) {
    support.push_back(s);
    probs.push_back(p);
  }
  return Pmf(std::move(support), std::move(probs));
}

std::string Pmf::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "state,prob\n";
  for (std::size_t i = 0; i < support_.size(); ++i)
    out << '"' << (support_[i].empty() ? std::string("tail") : format_row(support_[i])) << "\"," << probs_[i] << '\n';
  return out.str();
}

double tv_distance(const Pmf& p, const Pmf& r) {
  std::map<Row, double> diff;
  for (std::size_t i = 0; i < p.support().size(); ++i) diff[p.support()[i]] += p.probs()[i];
  for (std::size_t i = 0; i < r.support().size(); ++i) diff[r.support()[i]] -= r.probs()[i];
  double s = 0;
  for (const auto& [state, d] : diff) s += std::fabs(d);
  return 0.5 * s;
}

ChiSquareResult chi_square_gof(const std::vector<Row>& samples, const Pmf& r) {
  const double total = static_cast<double>(samples.size());
  std::map<Row, std::size_t> counts;
  for (const auto& s : samples) ++counts[s];

  std::vector<double> observed, expected;
  double tail_obs = 0, tail_exp = 0;
  const std::set<Row> support(r.support().begin(), r.support().end());
  for (std::size_t i = 0; i < r.support().size(); ++i) {
    const double e = r.probs()[i] * total;
    const Row& s = r.support()[i];
    auto it = counts.find(s);
    const double o = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    if (e >= 5.0 && !s.empty()) {
      observed.push_back(o);
      expected.push_back(e);
    } else {
      tail_obs += o;
      tail_exp += e;
    }
  }
  for (const auto& [s, c] : counts)
    if (!support.count(s)) tail_obs += static_cast<double>(c);
  if (tail_exp >= 5.0) {
    observed.push_back(tail_obs);
    expected.push_back(tail_exp);
  } else if (!expected.empty()) {
    auto smallest = std::min_element(expected.begin(), expected.end()) - expected.begin();
    observed[static_cast<std::size_t>(smallest)] += tail_obs;
    expected[static_cast<std::size_t>(smallest)] += tail_exp;
  }
  if (expected.size() < 2) throw std::invalid_argument("chi-square: fewer than two bins with expected count >= 5");

  ChiSquareResult res;
  res.bins = expected.size();
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    res.statistic += d * d / expected[i];
  }
  boost::math::chi_squared dist(static_cast<double>(res.bins - 1));
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::poisson: return "poisson";
    case Model::geometric: return "geometric";
    case Model::wall: return "wall";
  }
  return "unknown";
}

Model parse_model(const std::string& name) {
  if (name == "poisson") return Model::poisson;
  if (name == "geometric") return Model::geometric;
  if (name == "wall") return Model::wall;
  throw std::invalid_argument("unknown model: " + name);
}

RateVector ExperimentConfig::rates() const {
  std::vector<Rational> v;
  for (const auto& s : q) v.push_back(parse_rational(s));
  return RateVector(std::move(v), model != Model::poisson);
}

static std::size_t bottom_length(Model m, std::size_t n) {
  return m == Model::wall ? row_length(PatternKind::symplectic, n) : n;
}

Row ExperimentConfig::start() const { return z.empty() ? Row(bottom_length(model, n), 0) : z; }

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be at least 1");
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  const std::size_t need = model == Model::wall ? (n + 1) / 2 : n;
  if (q.size() != need) throw std::invalid_argument("config: expected " + std::to_string(need) + " rates");
  (void)rates();
  Row s = start();
  if (s.size() != bottom_length(model, n)) throw std::invalid_argument("config: z has the wrong length");
  if (!is_ordered(s) || (model == Model::wall && !is_nonnegative(s)))
    throw std::invalid_argument("config: z is not in the chamber");
  if (bound < max_coord(s) + 2) throw std::invalid_argument("config: bound must be at least max(z) + 2");
  Rational h = parse_rational(horizon);
  if (h < 0) throw std::invalid_argument("config: horizon must be nonnegative");
  if (model == Model::geometric && h.get_den() != 1) throw std::invalid_argument("config: steps must be an integer");
}

std::string ExperimentConfig::to_json() const {
  return json{{"model", to_string(model)}, {"n", n},         {"q", q},         {"z", z},
              {"horizon", horizon},        {"trials", trials}, {"seed", seed}, {"bound", bound},
              {"output", output}}
      .dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  c.model = parse_model(j.at("model").get<std::string>());
  c.n = j.at("n").get<std::size_t>();
  c.q = j.at("q").get<std::vector<std::string>>();
  c.z = j.value("z", Row{});
  c.horizon = j.value("horizon", std::string("1"));
  c.trials = j.value("trials", std::size_t{1});
  c.seed = j.value("seed", std::uint64_t{0});
  c.bound = j.at("bound").get<int>();
  c.output = j.value("output", std::string());
  c.validate();
  return c;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GTPUSH_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

std::vector<Row> sample_bottom_rows(const ExperimentConfig& config) {
  config.validate();
  const RateVector q = config.rates();
  const Rational h = parse_rational(config.horizon);
  const PatternKind kind = config.model == Model::wall ? PatternKind::symplectic : PatternKind::standard;
  // The sampler caches conditional laws; each worker owns one.
  std::vector<Row> out(config.trials);
  const std::size_t workers = std::min(worker_count(), config.trials);
  auto work = [&](std::size_t w) {
    PatternSampler sampler(config.start(), q, kind, config.n);
    for (std::size_t i = w; i < config.trials; i += workers) {
      Rng rng = make_stream(config.seed, i);
      Pattern init = sampler(rng);
      switch (config.model) {
        case Model::poisson:
          out[i] = simulate_poisson(config.n, q, init, h, rng).final_pattern().bottom();
          break;
        case Model::geometric:
          out[i] = simulate_geometric(config.n, q, init, static_cast<int>(h.get_num().get_si()), rng)
                       .final_pattern()
                       .bottom();
          break;
        case Model::wall:
          out[i] = simulate_wall(config.n, q, init, h, rng).final_pattern().bottom();
          break;
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

Pmf reference_law(const ExperimentConfig& config, double tol) {
  config.validate();
  const RateVector q = config.rates();
  const Rational h = parse_rational(config.horizon);
  const Row z = config.start();
  std::vector<Row> states;
  std::vector<double> probs;
  switch (config.model) {
    case Model::poisson: {
      auto gen = q_charlier(config.n, q, config.bound);
      states = gen.states();
      probs = semigroup_row(gen, z, h, tol);
      break;
    }
    case Model::geometric: {
      auto k = kernel_geometric(config.n, q, config.bound);
      states = k.states();
      probs = kernel_power_row(k, z, static_cast<int>(h.get_num().get_si()));
      break;
    }
    case Model::wall: {
      auto gen = q_symplectic(static_cast<int>(config.n), q, config.bound);
      states = gen.states();
      probs = semigroup_row(gen, z, h, tol);
      break;
    }
  }
  return Pmf::with_tail(std::move(states), std::move(probs));
}

std::string ExperimentResult::to_json() const {
  auto pmf_json = [](const Pmf& p) {
    json a = json::array();
    for (std::size_t i = 0; i < p.support().size(); ++i)
      a.push_back({{"state", p.support()[i].empty() ? std::string("tail") : format_row(p.support()[i])},
                   {"prob", p.probs()[i]}});
    return a;
  };
  return json{{"tv", tv},
              {"chi_square", {{"statistic", chi_square.statistic}, {"bins", chi_square.bins}, {"p_value", chi_square.p_value}}},
              {"empirical", pmf_json(empirical)},
              {"reference", pmf_json(reference)}}
      .dump();
}

ExperimentResult run_marginal_experiment(const ExperimentConfig& config) {
  ExperimentResult r;
  std::vector<Row> samples = sample_bottom_rows(config);
  r.reference = reference_law(config);
  std::vector<Row> keep;
  for (const auto& s : r.reference.support())
    if (!s.empty()) keep.push_back(s);
  r.empirical = Pmf::empirical(samples).coarsen(keep);
  r.tv = tv_distance(r.empirical, r.reference);
  r.chi_square = chi_square_gof(samples, r.reference);
  return r;
}

std::vector<Row> sample_wall_sup(const RateVector& q, double t, std::size_t trials, std::uint64_t seed) {
  return run_trials<Row>(trials, seed, [&](std::size_t, Rng& rng) {
    WallPanel panel = sample_wall_panel(q, t, rng);
    return Row{static_cast<int>(wall_sup_functional(panel, t))};
  });
}

std::string report_to_json(const VerificationReport& r) {
  json violations = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 20; ++i) {
    const auto& v = r.violations[i];
    violations.push_back({{"left", v.left}, {"right", v.right}, {"lhs", to_string(v.lhs)}, {"rhs", to_string(v.rhs)}});
  }
  return json{{"case", r.case_id},
              {"status", to_string(r.status)},
              {"states_checked", r.states_checked},
              {"entries_compared", r.entries_compared},
              {"violations", r.violations.size()},
              {"first_violations", violations},
              {"max_discrepancy", to_string(r.max_discrepancy)},
              {"note", r.note}}
      .dump();
}

template <class S, class T>
std::string kernel_to_json(const SparseMatrix<S, T>& m) {
  json a = json::array();
  for (const auto& from : m.states())
    for (const auto& [to, v] : m.row(from))
      a.push_back({{"from", format_state(from)}, {"to", format_state(to)}, {"value", to_string(v)}});
  return a.dump();
}

template std::string kernel_to_json<Row, Row>(const SparseMatrix<Row, Row>&);
template std::string kernel_to_json<PairState, PairState>(const SparseMatrix<PairState, PairState>&);
template std::string kernel_to_json<Row, PairState>(const SparseMatrix<Row, PairState>&);

}  // namespace gtpush
