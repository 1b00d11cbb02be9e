#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "gtpush/couplings.hpp"
#include "gtpush/dynamics.hpp"
#include "gtpush/harness.hpp"
#include "gtpush/intertwine.hpp"
#include "gtpush/kernels.hpp"
#include "gtpush/schur.hpp"
#include "json.hpp"

namespace gtpush::cli {
namespace {

using json = nlohmann::ordered_json;

RateVector rates(const std::string& text, bool unit) { return RateVector(parse_rational_list(text), unit); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  f << body;
}

int status_code(bool ok) { return ok ? kPass : kFail; }

json check_summary(const std::string& name, std::size_t checked, std::size_t failures) {
  return json{{"check", name},
              {"status", failures == 0 ? "pass" : "fail"},
              {"checked", checked},
              {"failures", failures}};
}

// Options shared by several subcommands.
struct Common {
  std::size_t n = 1;
  std::string q;
  int bound = 6;
  std::string horizon = "1";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string z;
  std::string out;
};

// Uses the leading rates the variant needs, so one q list serves several n.
IntertwiningCase build_case(const std::string& variant_name, const Common& c) {
  const CouplingVariant v = parse_coupling_variant(variant_name);
  const RateVector q = rates(c.q, v != CouplingVariant::poisson);
  const std::size_t need = CouplingWeight::rate_length(v, c.n);
  if (q.size() < need)
    throw std::invalid_argument(to_string(v) + " with n=" + std::to_string(c.n) + " needs " + std::to_string(need) +
                                " rates");
  return build_intertwining_case(v, c.n, q.prefix(need), c.bound);
}

int schur_eval(const std::string& row, const std::string& q, std::ostream& out) {
  out << to_string(schur(parse_row(row), rates(q, false))) << '\n';
  return kPass;
}

int sp_schur_eval(int n, const std::string& row, const std::string& q, std::ostream& out) {
  out << to_string(sp_schur(n, parse_row(row), rates(q, false))) << '\n';
  return kPass;
}

int verify_intertwine(const std::string& variant_name, const Common& c, std::ostream& out) {
  const IntertwiningCase ic = build_case(variant_name, c);
  const VerificationReport r = verify_case(ic);
  out << report_to_json(r) << '\n';
  return status_code(r.passed());
}

int verify_conservative_cmd(const std::string& generator, const Common& c, std::ostream& out) {
  VerificationReport r;
  if (generator == "charlier") {
    r = verify_conservative(q_charlier(c.n, rates(c.q, false), c.bound), "charlier n=" + std::to_string(c.n));
  } else if (generator == "symplectic") {
    r = verify_conservative(q_symplectic(static_cast<int>(c.n), rates(c.q, true), c.bound),
                            "symplectic n=" + std::to_string(c.n));
  } else {
    if (parse_coupling_variant(generator) == CouplingVariant::geometric)
      throw std::invalid_argument("the geometric coupling is a step kernel");
    const IntertwiningCase ic = build_case(generator, c);
    r = verify_conservative(ic.right, ic.id());
  }
  out << report_to_json(r) << '\n';
  return status_code(r.passed());
}

int verify_semigroup(const std::string& variant_name, const Common& c, const std::string& t, double tol,
                     double threshold, std::ostream& out) {
  const IntertwiningCase ic = build_case(variant_name, c);
  const double d = semigroup_intertwining_discrepancy(ic, parse_rational(t), tol);
  const bool ok = d < threshold;
  emit(out, json{{"case", ic.id()},
                 {"t", t},
                 {"tol", tol},
                 {"max_discrepancy", d},
                 {"threshold", threshold},
                 {"status", ok ? "pass" : "fail"}});
  return status_code(ok);
}

int verify_schur(std::size_t n_max, int max_entry, const std::string& q_text, std::ostream& out) {
  const RateVector q = rates(q_text, false);
  if (q.size() < n_max) throw std::invalid_argument("need at least n-max rates");
  std::size_t checked = 0, failures = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const RateVector qn = q.prefix(n);
    SchurEvaluator eval(qn);
    for (const auto& z : chamber_states(n, max_entry)) {
      const Rational s = eval(z);
      const auto oracle = schur_oracle(z, qn);
      if (!oracle || *oracle != s || schur_by_patterns(z, qn) != s) ++failures;
      ++checked;
    }
  }
  emit(out, check_summary("schur", checked, failures));
  return status_code(failures == 0);
}

int verify_sp_schur(std::size_t k_max, int max_entry, const std::string& q_text, std::ostream& out) {
  const RateVector q = rates(q_text, false);
  if (q.size() < k_max) throw std::invalid_argument("need at least k-max rates");
  std::size_t checked = 0, failures = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const RateVector qk = q.prefix(k);
    for (int n : {static_cast<int>(2 * k - 1), static_cast<int>(2 * k)})
      for (const auto& z : chamber_states(k, max_entry)) {
        if (sp_schur(n, z, qk) != sp_schur_by_patterns(n, z, qk)) ++failures;
        ++checked;
      }
  }
  emit(out, check_summary("sp-schur", checked, failures));
  return status_code(failures == 0);
}

int verify_harmonic(std::size_t n_max, int max_entry, const std::string& q_text, std::ostream& out) {
  const RateVector q = rates(q_text, false);
  if (q.size() < n_max) throw std::invalid_argument("need at least n-max rates");
  std::size_t checked = 0, failures = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const RateVector qn = q.prefix(n);
    SchurEvaluator eval(qn);
    Rational total = 0;
    for (const auto& v : qn.values()) total += v;
    for (const auto& x : chamber_states(n, max_entry)) {
      Rational lhs = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Row y = x;
        ++y[i];
        lhs += eval(y);  // zero off the chamber
      }
      if (lhs != total * eval(x)) ++failures;
      ++checked;
    }
  }
  emit(out, check_summary("harmonic", checked, failures));
  return status_code(failures == 0);
}

int verify_lemma(const std::string& q_text, int max_entry, std::ostream& out) {
  const Rational q = parse_rational(q_text);
  if (q <= 0 || q >= 1) throw std::invalid_argument("q must lie in (0,1)");
  BlockPushFactors f(q);
  std::size_t checked = 0, failures = 0;
  for (int v1p = 0; v1p <= max_entry; ++v1p)
    for (int v2 = v1p; v2 <= max_entry; ++v2)
      for (int up = v1p; up <= max_entry; ++up) {
        if (block_push_sum(f, v1p, v2, up) != ipow(q, -up - v2)) ++failures;
        ++checked;
      }
  emit(out, check_summary("lemma", checked, failures));
  return status_code(failures == 0);
}

ExperimentConfig config_from(const Common& c, const std::string& model) {
  ExperimentConfig cfg;
  cfg.model = parse_model(model);
  cfg.n = c.n;
  cfg.q = split_list(c.q);
  cfg.z = c.z.empty() ? Row{} : parse_row(c.z);
  cfg.horizon = c.horizon;
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.bound = c.bound;
  cfg.output = c.out;
  return cfg;
}

int simulate_cmd(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const RateVector q = cfg.rates();
  const Rational h = parse_rational(cfg.horizon);
  const PatternKind kind = cfg.model == Model::wall ? PatternKind::symplectic : PatternKind::standard;
  Rng rng = make_stream(cfg.seed, 0);
  const Pattern init = sample_pattern(cfg.start(), q, kind, rng, cfg.n);
  Trajectory traj = [&] {
    switch (cfg.model) {
      case Model::poisson: return simulate_poisson(cfg.n, q, init, h, rng);
      case Model::geometric: return simulate_geometric(cfg.n, q, init, static_cast<int>(h.get_num().get_si()), rng);
      case Model::wall: break;
    }
    return simulate_wall(cfg.n, q, init, h, rng);
  }();
  const std::string body = traj.to_jsonl();
  if (cfg.output.empty())
    out << body;
  else
    write_file(cfg.output, body);
  return kPass;
}

int stats_compare(const ExperimentConfig& cfg, double max_tv, double min_p, const std::string& csv,
                  const std::string& reference_csv, std::ostream& out) {
  const ExperimentResult r = run_marginal_experiment(cfg);
  const bool ok = r.tv <= max_tv && r.chi_square.p_value > min_p;
  json j{{"config", json::parse(cfg.to_json())},
         {"streams", "trial i uses derive_stream_seed(seed, i)"},
         {"max_tv", max_tv},
         {"min_p", min_p},
         {"status", ok ? "pass" : "fail"}};
  const json body = json::parse(r.to_json());
  for (const auto& [k, v] : body.items()) j[k] = v;
  if (!csv.empty()) write_file(csv, r.empirical.to_csv());
  if (!reference_csv.empty()) write_file(reference_csv, r.reference.to_csv());
  if (cfg.output.empty())
    emit(out, j);
  else
    write_file(cfg.output, j.dump() + "\n");
  return status_code(ok);
}

int coupling_check(const std::string& identity, const Common& c, int bound, double min_p, std::ostream& out) {
  if (c.trials == 0) throw std::invalid_argument("trials must be at least 1");
  const Rational h = parse_rational(c.horizon);
  if (h < 0) throw std::invalid_argument("horizon must be nonnegative");
  // Independent second family of streams for the clocks not fixed by a panel.
  const std::uint64_t bulk_master = derive_stream_seed(c.seed, std::numeric_limits<std::uint64_t>::max());
  json j{{"identity", identity}, {"trials", c.trials}, {"seed", c.seed}, {"horizon", c.horizon}};
  bool ok = false;
  if (identity == "left-edge" || identity == "lpp") {
    const bool lpp = identity == "lpp";
    const RateVector q = rates(c.q, lpp);
    if (q.size() < c.n) throw std::invalid_argument("need n rates");
    if (lpp && h.get_den() != 1) throw std::invalid_argument("lpp horizon must be an integer number of steps");
    const RateVector qn = q.prefix(c.n);
    const double t = to_double(h);
    const int steps = static_cast<int>(h.get_num().get_si());
    auto results = run_trials<char>(c.trials, c.seed, [&](std::size_t i, Rng& rng) -> char {
      const std::uint64_t bulk = derive_stream_seed(bulk_master, i);
      if (lpp) {
        const GeometricPanel p = sample_geometric_panel(qn, steps, rng);
        return right_edge_equals_lpp(p, qn, c.n, static_cast<std::size_t>(steps), bulk);
      }
      return left_edge_equals_walk(sample_poisson_panel(qn, t, rng), qn, bulk);
    });
    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < results.size(); ++i)
      if (!results[i]) failed.push_back(i);
    ok = failed.empty();
    j["n"] = c.n;
    j["mismatches"] = failed.size();
    j["first_mismatched_trials"] = std::vector<std::size_t>(failed.begin(), failed.begin() + std::min<std::size_t>(failed.size(), 20));
  } else if (identity == "wall-sup") {
    const RateVector q = rates(c.q, true);
    const int n = static_cast<int>(2 * q.size());
    auto samples = sample_wall_sup(q, to_double(h), c.trials, c.seed);
    auto g = q_symplectic(n, q, bound);
    const Pmf reference = Pmf::with_tail(g.states(), semigroup_row(g, Row(q.size(), 0), h, 1e-14));
    const ChiSquareResult chi = chi_square_gof(samples, reference);
    ok = chi.p_value > min_p;
    j["k"] = q.size();
    j["bound"] = bound;
    j["chi_square"] = {{"statistic", chi.statistic}, {"bins", chi.bins}, {"p_value", chi.p_value}};
    j["min_p"] = min_p;
  } else {
    throw std::invalid_argument("unknown identity " + identity);
  }
  j["status"] = ok ? "pass" : "fail";
  emit(out, j);
  return status_code(ok);
}

void add_rates(CLI::App* app, Common& c) { app->add_option("--q", c.q, "rates as p/q list, e.g. 1/2,1/3")->required(); }

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gelfand-Tsetlin push/block dynamics toolkit", "gtpush"};
  app.require_subcommand(1);
  std::function<int()> action;
  Common c;

  auto* schur_cmd = app.add_subcommand("schur", "Schur functions")->require_subcommand(1);
  std::string row;
  auto* schur_ev = schur_cmd->add_subcommand("eval", "evaluate S_z(q)");
  schur_ev->add_option("--row", row)->required();
  add_rates(schur_ev, c);
  schur_ev->callback([&] { action = [&] { return schur_eval(row, c.q, out); }; });

  auto* sp_cmd = app.add_subcommand("sp-schur", "symplectic Schur functions")->require_subcommand(1);
  int sp_n = 1;
  auto* sp_ev = sp_cmd->add_subcommand("eval", "evaluate Sp^n_z(q)");
  sp_ev->add_option("--n", sp_n)->required();
  sp_ev->add_option("--row", row)->required();
  add_rates(sp_ev, c);
  sp_ev->callback([&] { action = [&] { return sp_schur_eval(sp_n, row, c.q, out); }; });

  auto* verify = app.add_subcommand("verify", "exact and numerical verification")->require_subcommand(1);
  std::string variant = "poisson";
  std::string generator;
  std::string t = "1/2";
  double tol = 1e-10, threshold = 1e-8;
  std::size_t n_max = 4;
  int max_entry = 4;

  auto* vi = verify->add_subcommand("intertwine", "check the intertwining on a truncated box");
  vi->add_option("--case", variant)->required();
  vi->add_option("--n", c.n)->required();
  add_rates(vi, c);
  vi->add_option("--bound", c.bound)->capture_default_str();
  vi->callback([&] { action = [&] { return verify_intertwine(variant, c, out); }; });

  auto* vc = verify->add_subcommand("conservative", "check generator row sums");
  vc->add_option("--generator", generator, "charlier|symplectic|poisson|wall-odd-even|wall-even-odd")->required();
  vc->add_option("--n", c.n)->required();
  add_rates(vc, c);
  vc->add_option("--bound", c.bound)->capture_default_str();
  vc->callback([&] { action = [&] { return verify_conservative_cmd(generator, c, out); }; });

  auto* vs = verify->add_subcommand("semigroup", "intertwining of the truncated semigroups");
  vs->add_option("--case", variant)->capture_default_str();
  vs->add_option("--n", c.n)->required();
  add_rates(vs, c);
  vs->add_option("--bound", c.bound)->capture_default_str();
  vs->add_option("--t", t)->capture_default_str();
  vs->add_option("--tol", tol)->capture_default_str();
  vs->add_option("--threshold", threshold)->capture_default_str();
  vs->callback([&] { action = [&] { return verify_semigroup(variant, c, t, tol, threshold, out); }; });

  auto* vsch = verify->add_subcommand("schur", "recursion vs bialternant vs pattern sum");
  vsch->add_option("--n-max", n_max)->capture_default_str();
  vsch->add_option("--max-entry", max_entry)->capture_default_str();
  add_rates(vsch, c);
  vsch->callback([&] { action = [&] { return verify_schur(n_max, max_entry, c.q, out); }; });

  auto* vsp = verify->add_subcommand("sp-schur", "symplectic recursion vs pattern sum, both parities");
  vsp->add_option("--k-max", n_max)->capture_default_str();
  vsp->add_option("--max-entry", max_entry)->capture_default_str();
  add_rates(vsp, c);
  vsp->callback([&] { action = [&] { return verify_sp_schur(n_max, max_entry, c.q, out); }; });

  auto* vh = verify->add_subcommand("harmonic", "Pieri-type harmonicity of S");
  vh->add_option("--n-max", n_max)->capture_default_str();
  vh->add_option("--max-entry", max_entry)->capture_default_str();
  add_rates(vh, c);
  vh->callback([&] { action = [&] { return verify_harmonic(n_max, max_entry, c.q, out); }; });

  auto* vl = verify->add_subcommand("lemma", "integrating out the blocking and pushing factors");
  std::string lemma_q = "1/2";
  vl->add_option("--q", lemma_q)->capture_default_str();
  int lemma_max = 5;
  vl->add_option("--max-entry", lemma_max)->capture_default_str();
  vl->callback([&] { action = [&] { return verify_lemma(lemma_q, lemma_max, out); }; });

  std::string model = "poisson";
  auto add_experiment = [&](CLI::App* a) {
    a->add_option("--model", model, "poisson|geometric|wall")->capture_default_str();
    a->add_option("--n", c.n);
    a->add_option("--q", c.q, "rates as p/q list");
    a->add_option("--horizon", c.horizon, "time, or number of steps for geometric")->capture_default_str();
    a->add_option("--seed", c.seed)->capture_default_str();
    a->add_option("--z", c.z, "bottom row of the initial law (default zeros)");
    a->add_option("--out", c.out, "output path (default stdout)");
  };

  auto* sim = app.add_subcommand("simulate", "one trajectory as JSON lines");
  add_experiment(sim);
  sim->callback([&] {
    action = [&] {
      c.bound = std::numeric_limits<int>::max();  // unused by a single trajectory
      return simulate_cmd(config_from(c, model), out);
    };
  });

  auto* stats = app.add_subcommand("stats", "statistical comparisons")->require_subcommand(1);
  auto* cmp = stats->add_subcommand("compare", "bottom-row law vs the reference chain");
  add_experiment(cmp);
  double max_tv = 0.02, min_p = -1;
  std::string csv, reference_csv, config_path;
  int stats_bound = 12;
  cmp->add_option("--trials", c.trials)->capture_default_str();
  cmp->add_option("--bound", stats_bound, "truncation of the reference chain")->capture_default_str();
  cmp->add_option("--max-tv", max_tv)->capture_default_str();
  cmp->add_option("--min-p", min_p, "also require the chi-square p-value to exceed this");
  cmp->add_option("--csv", csv, "write the empirical law as CSV");
  cmp->add_option("--reference-csv", reference_csv, "write the reference law as CSV");
  cmp->add_option("--config", config_path, "JSON experiment config; explicit flags override it");
  cmp->callback([&] {
    action = [&] {
      c.bound = stats_bound;
      ExperimentConfig cfg = config_from(c, model);
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw std::invalid_argument("cannot open " + config_path);
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        ExperimentConfig base = ExperimentConfig::from_json(text);
        auto given = [&](const char* flag) { return cmp->count(flag) > 0; };
        if (given("--model")) base.model = cfg.model;
        if (given("--n")) base.n = cfg.n;
        if (given("--q")) base.q = cfg.q;
        if (given("--z")) base.z = cfg.z;
        if (given("--horizon")) base.horizon = cfg.horizon;
        if (given("--trials")) base.trials = cfg.trials;
        if (given("--seed")) base.seed = cfg.seed;
        if (given("--bound")) base.bound = cfg.bound;
        if (given("--out")) base.output = cfg.output;
        cfg = base;
      }
      return stats_compare(cfg, max_tv, min_p, csv, reference_csv, out);
    };
  });

  auto* coupling = app.add_subcommand("coupling", "coupling identities")->require_subcommand(1);
  auto* cc = coupling->add_subcommand("check", "pathwise or distributional coupling check");
  std::string identity;
  int sup_bound = 30;
  double sup_min_p = 0.01;
  cc->add_option("--identity", identity, "left-edge|lpp|wall-sup")->required();
  cc->add_option("--n", c.n)->capture_default_str();
  add_rates(cc, c);
  cc->add_option("--horizon", c.horizon)->capture_default_str();
  cc->add_option("--trials", c.trials)->capture_default_str();
  cc->add_option("--seed", c.seed)->capture_default_str();
  cc->add_option("--bound", sup_bound, "truncation of the wall-sup reference")->capture_default_str();
  cc->add_option("--min-p", sup_min_p, "wall-sup chi-square threshold")->capture_default_str();
  cc->callback([&] { action = [&] { return coupling_check(identity, c, sup_bound, sup_min_p, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  try {
    return action();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
}

}  // namespace gtpush::cli
