// Runs every acceptance criterion through the command line front end and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gtpush/couplings.hpp"
#include "gtpush/schur.hpp"
#include "json.hpp"
#include "oracles.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

// Runs one CLI invocation; returns its parsed JSON lines and records failure
// when the exit code is not 0.
std::vector<json> cli(Outcome& o, const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = gtpush::cli::cli_dispatch(args, out, err);
  std::string line_desc = args[0] + (args.size() > 1 ? " " + args[1] : "");
  o.require(code == 0, line_desc + " exit " + std::to_string(code) + " " + err.str());
  std::vector<json> lines;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] == '{') lines.push_back(json::parse(line));
  return lines;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

const std::vector<oracle::Q> kQ{oracle::Q(1, 2), oracle::Q(1, 3), oracle::Q(1, 5), oracle::Q(1, 7)};

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  criteria.push_back({1, "exact Poisson intertwining, n=1 and n=2, B=6", 60, [] {
                        Outcome o;
                        for (const char* n : {"1", "2"}) {
                          auto r = cli(o, {"verify", "intertwine", "--case", "poisson", "--n", n, "--q",
                                           "1/2,1/3,1/5", "--bound", "6"});
                          if (!r.empty()) {
                            o.require(r[0]["violations"] == 0 && r[0]["entries_compared"].get<int>() > 0,
                                      "violations in n=" + std::string(n));
                            o.detail += std::string(o.detail.empty() ? "" : ", ") + "n=" + n + ": " +
                                        std::to_string(r[0]["entries_compared"].get<int>()) + " entries";
                          }
                        }
                        return o;
                      }});

  criteria.push_back({2, "exact geometric kernel intertwining, n=1 (B=8) and n=2 (B=5)", 120, [] {
                        Outcome o;
                        for (auto [n, b] : {std::pair{"1", "8"}, std::pair{"2", "5"}}) {
                          auto r = cli(o, {"verify", "intertwine", "--case", "geometric", "--n", n, "--q",
                                           "1/2,1/3,1/5", "--bound", b});
                          if (!r.empty()) o.require(r[0]["violations"] == 0, "violations in n=" + std::string(n));
                        }
                        return o;
                      }});

  criteria.push_back({3, "exact wall intertwinings and conservative Q_n for n=1..4", 0, [] {
                        Outcome o;
                        for (const char* n : {"1", "2"}) {
                          auto r = cli(o, {"verify", "intertwine", "--case", "wall-odd-even", "--n", n, "--q",
                                           "1/2,1/3", "--bound", "6"});
                          if (!r.empty()) o.require(r[0]["violations"] == 0, "odd-even n=" + std::string(n));
                        }
                        auto r = cli(o, {"verify", "intertwine", "--case", "wall-even-odd", "--n", "1", "--q",
                                         "1/2,1/3", "--bound", "6"});
                        if (!r.empty()) o.require(r[0]["violations"] == 0, "even-odd n=1");
                        for (int n = 1; n <= 4; ++n) {
                          const std::string q = n <= 2 ? "1/2" : "1/2,1/3";
                          auto c = cli(o, {"verify", "conservative", "--generator", "symplectic", "--n",
                                           std::to_string(n), "--q", q, "--bound", "6"});
                          if (!c.empty()) o.require(c[0]["violations"] == 0, "Q_" + std::to_string(n));
                        }
                        return o;
                      }});

  criteria.push_back({4, "Schur and symplectic Schur evaluation agree with raw pattern sums", 0, [] {
                        Outcome o;
                        cli(o, {"verify", "schur", "--n-max", "4", "--max-entry", "4", "--q", "1/2,1/3,1/5,1/7"});
                        cli(o, {"verify", "sp-schur", "--k-max", "3", "--max-entry", "3", "--q", "1/2,1/3,1/5"});
                        // Independent brute force for the smaller sizes.
                        for (std::size_t n = 1; n <= 3; ++n) {
                          std::vector<oracle::Q> q(kQ.begin(), kQ.begin() + static_cast<long>(n));
                          gtpush::RateVector rv(q);
                          for (const auto& z : oracle::ordered_rows(n, 0, 4))
                            o.require(gtpush::schur(z, rv) == oracle::schur_sum(z, q), "schur vs oracle");
                        }
                        for (std::size_t k = 1; k <= 2; ++k) {
                          std::vector<oracle::Q> q(kQ.begin(), kQ.begin() + static_cast<long>(k));
                          gtpush::RateVector rv(q);
                          for (int n : {static_cast<int>(2 * k - 1), static_cast<int>(2 * k)})
                            for (const auto& z : oracle::ordered_rows(k, 0, 3))
                              o.require(gtpush::sp_schur(n, z, rv) == oracle::sp_sum(n, z, q), "sp vs oracle");
                        }
                        return o;
                      }});

  criteria.push_back({5, "Pieri-type harmonicity of S for n<=3, entries<=4", 0, [] {
                        Outcome o;
                        cli(o, {"verify", "harmonic", "--n-max", "3", "--max-entry", "4", "--q", "1/2,1/3,1/5"});
                        for (std::size_t n = 1; n <= 3; ++n) {
                          std::vector<oracle::Q> q(kQ.begin(), kQ.begin() + static_cast<long>(n));
                          oracle::Q total = 0;
                          for (const auto& v : q) total += v;
                          for (const auto& x : oracle::ordered_rows(n, 0, 4)) {
                            oracle::Q lhs = 0;
                            for (std::size_t i = 0; i < n; ++i) {
                              oracle::Row y = x;
                              ++y[i];
                              if (i + 1 == n || y[i] <= y[i + 1]) lhs += oracle::schur_sum(y, q);
                            }
                            o.require(lhs == total * oracle::schur_sum(x, q), "oracle harmonicity");
                          }
                        }
                        return o;
                      }});

  criteria.push_back({6, "integrating-out identity for the blocking and pushing factors, q=1/2", 0, [] {
                        Outcome o;
                        auto r = cli(o, {"verify", "lemma", "--q", "1/2", "--max-entry", "5"});
                        if (!r.empty()) o.detail = std::to_string(r[0]["checked"].get<int>()) + " triples";
                        return o;
                      }});

  criteria.push_back({7, "right edge equals last passage times; LPP recursion equals path enumeration", 0, [] {
                        Outcome o;
                        auto r = cli(o, {"coupling", "check", "--identity", "lpp", "--n", "3", "--q", "1/2,1/3,1/5",
                                         "--horizon", "10", "--trials", "1000", "--seed", "7"});
                        gtpush::Rng rng(77);
                        gtpush::RateVector q({gtpush::Rational(1, 2), gtpush::Rational(1, 3), gtpush::Rational(1, 5),
                                              gtpush::Rational(2, 3)},
                                             true);
                        for (int trial = 0; trial < 100; ++trial) {
                          auto p = gtpush::sample_geometric_panel(q, 4, rng);
                          for (std::size_t n = 1; n <= 4; ++n)
                            for (std::size_t t = 1; t <= 4; ++t)
                              o.require(gtpush::lpp_G(p, n, t)[n - 1][t] == oracle::brute_lpp(p.eta, n, t),
                                        "lpp_G vs path enumeration");
                        }
                        return o;
                      }});

  criteria.push_back({8, "left edge equals the recursively reflected walks, 1000 panels", 0, [] {
                        Outcome o;
                        cli(o, {"coupling", "check", "--identity", "left-edge", "--n", "3", "--q", "1/2,1/3,1/5",
                                "--horizon", "2", "--trials", "1000", "--seed", "8"});
                        return o;
                      }});

  auto marginal = [](std::vector<std::string> args, const std::string& max_tv) {
    Outcome o;
    args.insert(args.begin(), {"stats", "compare"});
    args.insert(args.end(), {"--trials", "100000", "--max-tv", max_tv});
    auto r = cli(o, args);
    if (!r.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "TV %.4f", r[0]["tv"].get<double>());
      o.detail += std::string(o.detail.empty() ? "" : ", ") + buf;
    }
    return o;
  };

  criteria.push_back({9, "Poisson dynamics bottom-row law at t=1, 1e5 trials", 300, [&] {
                        return marginal({"--model", "poisson", "--n", "2", "--q", "1/2,1/3", "--z", "0,0",
                                         "--horizon", "1", "--seed", "9", "--bound", "12"},
                                        "0.02");
                      }});

  criteria.push_back({10, "geometric dynamics bottom-row law after 4 steps, 1e5 trials", 300, [&] {
                        return marginal({"--model", "geometric", "--n", "2", "--q", "1/2,1/3", "--horizon", "4",
                                         "--seed", "10", "--bound", "25"},
                                        "0.02");
                      }});

  criteria.push_back({11, "wall dynamics bottom-row law at t=1, n=2 and n=3, 1e5 trials", 0, [&] {
                        Outcome a = marginal({"--model", "wall", "--n", "2", "--q", "1/2", "--horizon", "1",
                                              "--seed", "11", "--bound", "20"},
                                             "0.02");
                        Outcome b = marginal({"--model", "wall", "--n", "3", "--q", "1/2,1/3", "--horizon", "1",
                                              "--seed", "12", "--bound", "16"},
                                             "0.03");
                        a.ok = a.ok && b.ok;
                        a.detail = "n=2 " + a.detail + "; n=3 " + b.detail;
                        return a;
                      }});

  criteria.push_back({12, "wall supremum functional vs symplectic reference, three seeds", 0, [] {
                        Outcome o;
                        for (const char* seed : {"101", "202", "303"}) {
                          auto r = cli(o, {"coupling", "check", "--identity", "wall-sup", "--q", "1/2", "--horizon",
                                           "1", "--trials", "100000", "--seed", seed, "--min-p", "0.01"});
                          if (!r.empty()) {
                            char buf[64];
                            std::snprintf(buf, sizeof buf, "p=%.3f", r[0]["chi_square"]["p_value"].get<double>());
                            o.detail += std::string(o.detail.empty() ? "" : ", ") + buf;
                          }
                        }
                        return o;
                      }});

  criteria.push_back({13, "semigroup intertwining discrepancy, Poisson n=1, B=12, t=1/2", 0, [] {
                        Outcome o;
                        auto r = cli(o, {"verify", "semigroup", "--case", "poisson", "--n", "1", "--q", "1/2,1/3",
                                         "--bound", "12", "--t", "1/2", "--tol", "1e-10", "--threshold", "1e-8"});
                        if (!r.empty()) {
                          char buf[64];
                          std::snprintf(buf, sizeof buf, "max discrepancy %.3g", r[0]["max_discrepancy"].get<double>());
                          o.detail = buf;
                        }
                        return o;
                      }});

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (c.time_limit > 0 && elapsed > c.time_limit) {
      o.ok = false;
      o.detail += " (exceeded time limit)";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", elapsed);
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " [" << o.detail
              << (o.detail.empty() ? "" : ", ") << timing << "]" << std::endl;
    if (!o.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
