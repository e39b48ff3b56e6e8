// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "kqsat/codes.hpp"
#include "kqsat/fliptree.hpp"
#include "kqsat/formula.hpp"
#include "kqsat/fpsearch.hpp"
#include "kqsat/oracle.hpp"
#include "kqsat/orchestrator.hpp"

namespace fs = std::filesystem;
using namespace kqsat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << x;
  return out.str();
}

// Exhaustive coverage check over {base..base+alphabet-1}^len, independent of verify_cover.
bool covers(std::size_t alphabet, std::size_t len, std::size_t radius, const std::vector<Word>& code,
            std::uint8_t base) {
  Word w(len, base);
  while (true) {
    bool hit = false;
    for (const auto& c : code) {
      std::size_t d = 0;
      for (std::size_t i = 0; i < len && d <= radius; ++i) d += c[i] != w[i];
      if (d <= radius) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
    std::size_t i = len;
    while (i > 0 && w[i - 1] == base + alphabet - 1) w[--i] = base;
    if (i == 0) return true;
    ++w[i - 1];
  }
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / ("kqsat_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + KQSAT_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  const auto f = testing::example_formula();
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::size_t> got{m_metric(f, 1), m_metric(f, 2), m_metric(f, 3), m_metric(f, 4)};
  const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = got == std::vector<std::size_t>{2, 3, 1, 3} && us < 1000;
  return {ok, "M = (" + std::to_string(got[0]) + "," + std::to_string(got[1]) + "," + std::to_string(got[2]) + "," +
                  std::to_string(got[3]) + "), " + fmt(us, 3) + " us"};
}

Outcome ac2() {
  double worst = 1;
  std::size_t points = 0;
  for (double eps : {0.05, 0.1, 0.3})
    for (int m : {3, 9, 27, 81}) {
      const double lm = 1.0 / m;
      const auto sched = make_schedule(eps, lm);
      for (int j = 1; j <= m; ++j) {
        const double p = success_probability_exact(j * lm, sched);
        worst = std::min(worst, p - (1 - eps * eps));
        ++points;
      }
    }
  return {worst >= -1e-12, std::to_string(points) + " grid points, worst margin " + fmt(worst)};
}

Outcome ac3() {
  std::mt19937_64 rng(2024);
  double worst = 0;
  std::size_t mixed = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 4 + rng() % 8;
    auto f = testing::random_ksat(rng, n, static_cast<std::size_t>(n * (2.0 + (rng() % 300) / 100.0)), 3);
    auto center = testing::random_assignment(rng, n);
    const std::size_t r = 1 + rng() % 4;
    const double eps = std::array{0.05, 0.1, 0.3}[rng() % 3];
    const auto mf = marked_fraction(f, center, r, 3);
    const auto sched = make_schedule(eps, 1.0 / static_cast<double>(mf.total));
    const auto out = apply_schedule(prepare(f, center, r, 3), sched);
    worst = std::max(worst, std::abs(out.success_probability() - success_probability_exact(mf.lambda, sched)));
    mixed += mf.lambda > 0 && mf.lambda < 1;
  }
  return {worst <= 1e-9, "100 instances (" + std::to_string(mixed) + " with 0 < lambda < 1), max |diff| " + fmt(worst)};
}

Outcome ac4() {
  double worst_sym = 0;
  std::size_t schedules = 0;
  for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5, 0.9})
    for (int m : {1, 3, 9, 27, 81, 243}) {
      const auto s = make_schedule(eps, 1.0 / m);
      for (std::size_t j = 1; j <= s.l; ++j)
        worst_sym = std::max(worst_sym, std::abs(s.angles[j - 1].alpha + s.angles[s.l - j].beta));
      ++schedules;
    }
  const auto g = make_schedule(1 - 1e-14, 1.0);
  const double grover = g.angles.empty() ? 1.0 : std::abs(g.angles[0].alpha - std::numbers::pi);
  return {worst_sym == 0.0 && grover <= 1e-6, std::to_string(schedules) + " schedules, max |alpha_j + beta_(l-j+1)| " +
                                                  fmt(worst_sym) + ", |alpha_1 - pi| at eps=1-1e-14 " + fmt(grover)};
}

struct Corpus {
  std::size_t runs = 0;
  std::size_t sat_instances = 0;
  std::size_t unsat_instances = 0;
  std::size_t bad_models = 0;
  std::size_t false_on_sat = 0;
  std::size_t sat_on_unsat = 0;
  std::uint64_t quantum_calls = 0;
  double bound = 0;

  void record(const Formula& f, const SolveResult& res, bool sat) {
    ++runs;
    quantum_calls += res.stats.quantum_calls;
    bound += res.stats.failure_bound;
    if (res.status == SolveStatus::Sat) {
      if (!evaluate(f, res.model)) ++bad_models;
      if (!sat) ++sat_on_unsat;
    } else if (sat) {
      ++false_on_sat;
    }
  }

  std::string summary() const {
    return std::to_string(runs) + " runs (" + std::to_string(sat_instances) + " SAT / " +
           std::to_string(unsat_instances) + " UNSAT instances), bad models " + std::to_string(bad_models) +
           ", FALSE-on-SAT " + std::to_string(false_on_sat) + ", quantum calls " + std::to_string(quantum_calls) +
           ", summed bound " + fmt(bound, 3);
  }
};

Outcome ac5() {
  std::mt19937_64 rng(5);
  Corpus corpus;
  auto run = [&](const Formula& f, std::uint64_t seed) {
    const bool sat = oracle::brute_sat(f).has_value();
    (sat ? corpus.sat_instances : corpus.unsat_instances)++;
    for (std::size_t k : {0, 1, 2}) {
      SolveConfig cfg;
      cfg.k = k;
      cfg.epsilon = 0.1;
      cfg.retries = 3;
      cfg.seed = seed * 3 + k;
      corpus.record(f, solve(f, cfg, fixed_resource(2)), sat);
    }
  };
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 6 + rng() % 7;
    const double ratio = 3.0 + (rng() % 201) / 100.0;
    run(testing::random_ksat(rng, n, static_cast<std::size_t>(std::round(ratio * n)), 3), i);
  }
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 6 + rng() % 7;
    const double ratio = 3.0 + (rng() % 201) / 100.0;
    auto hidden = testing::random_assignment(rng, n);
    run(testing::planted_ksat(rng, hidden, static_cast<std::size_t>(std::round(ratio * n)), 3), 1000 + i);
  }
  const bool ok = corpus.bad_models == 0 && corpus.sat_on_unsat == 0 && corpus.false_on_sat <= 1;
  return {ok, corpus.summary()};
}

Outcome ac6() {
  std::mt19937_64 rng(6);
  Corpus corpus;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 6 + rng() % 5;
    const double ratio = 6.0 + (rng() % 501) / 100.0;
    auto f = testing::random_ksat(rng, n, static_cast<std::size_t>(std::round(ratio * n)), 4);
    const bool sat = oracle::brute_sat(f).has_value();
    (sat ? corpus.sat_instances : corpus.unsat_instances)++;
    SolveConfig cfg;
    cfg.k = i % 3;
    cfg.epsilon = 0.1;
    cfg.retries = 3;
    cfg.seed = i;
    corpus.record(f, solve(f, cfg, fixed_resource(1)), sat);
  }
  const bool ok = corpus.bad_models == 0 && corpus.sat_on_unsat == 0 && corpus.false_on_sat <= 1 &&
                  corpus.quantum_calls > 0;
  return {ok, "K=4, " + corpus.summary()};
}

Outcome ac7() {
  std::size_t binary = 0, binary_bad = 0;
  for (std::size_t len = 1; len <= 14; ++len)
    for (std::size_t r = 0; r <= 3 && r <= len; ++r) {
      auto code = greedy_binary_cover(len, r);
      ++binary;
      if (!verify_cover(code).covered || !covers(2, len, r, code.codewords, 0)) ++binary_bad;
    }
  for (std::size_t len : {6, 8, 10, 12, 14})
    for (std::size_t d : {1, 2}) {
      auto code = build_binary_cover(len, 1.0 / 3, d);
      ++binary;
      if (!verify_cover(code).covered || !covers(2, len, code.radius, code.codewords, 0)) ++binary_bad;
    }

  struct Grid {
    std::size_t K, t, s;
  };
  std::string detail = std::to_string(binary) + " binary covers (" + std::to_string(binary_bad) + " bad); K-ary";
  bool ok = binary_bad == 0;
  for (auto g : {Grid{3, 3, 1}, Grid{3, 6, 2}, Grid{4, 4, 1}, Grid{5, 5, 1}, Grid{3, 8, 2}}) {
    std::size_t flagged = 0, bad = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto code = build_kary_cover(g.K, g.t, g.s, seed);
      if (!verify_cover(code).covered || !covers(g.K, g.t, g.s, code.codewords, 1)) ++bad;
      if (code.repaired) ++flagged;
      else if (code.codewords.size() > code.size_bound) ++bad;
    }
    const double rate = flagged / 50.0;
    ok = ok && bad == 0 && rate < 0.2;
    detail += " (" + std::to_string(g.K) + "," + std::to_string(g.t) + "," + std::to_string(g.s) + ") flag " +
              fmt(rate, 2) + (bad ? " BAD" : "");
  }
  return {ok, detail};
}

Outcome ac8() {
  const double e = exponent(3, 0);
  bool mono = true;
  for (std::size_t K : {3, 4, 5})
    for (int i = 0; i < 100; ++i) mono = mono && exponent(K, i / 100.0) > exponent(K, (i + 1) / 100.0);
  return {std::abs(e - 0.41504) <= 1e-4 && mono,
          "exponent(3,0) = " + fmt(e, 8) + ", strictly decreasing for K=3,4,5: " + (mono ? "yes" : "no")};
}

Outcome ac9() {
  const auto rm = solve_resource(1, 1, 0.3);
  const double res = std::abs(rm.gamma * (std::log2(1 / rm.gamma) + 1) - 0.3);
  bool ok = res <= 1e-9;
  std::string detail = "gamma " + fmt(rm.gamma, 8) + ", residual " + fmt(res, 3);

  std::mt19937_64 rng(9);
  for (double c : {0.3, 0.5}) {
    const auto model = solve_resource(1, 1, c);
    std::size_t records = 0, out_of_range = 0, wrong_rmax = 0, sat = 0;
    for (int i = 0; i < 6; ++i) {
      auto hidden = testing::random_assignment(rng, 18);
      auto f = testing::planted_ksat(rng, hidden, 76, 3);
      SolveConfig cfg;
      cfg.k = 0;
      cfg.seed = i;
      cfg.rho = 1.0 / 3;
      auto result = solve(f, cfg, model);
      const auto& st = result.stats;
      sat += result.status == SolveStatus::Sat;
      if (st.r_max != static_cast<std::size_t>(std::floor(model.gamma * 18))) ++wrong_rmax;
      for (const auto& r : result.records) {
        ++records;
        if (r.radius > st.r_max || r.radius + st.delta < st.r_max) ++out_of_range;
      }
    }
    ok = ok && wrong_rmax == 0 && out_of_range == 0 && records > 0 && sat == 6;
    detail += "; c=" + fmt(c, 2) + " r_max " + std::to_string(model.r_max(18)) + ": " + std::to_string(records) +
              " quantum calls, " + std::to_string(out_of_range) + " outside [r_max - delta, r_max], SAT " +
              std::to_string(sat) + "/6";
  }
  return {ok, detail};
}

Outcome ac10() {
  const auto dir = scratch_dir();
  std::mt19937_64 rng(10);
  const std::size_t bound = static_cast<std::size_t>(std::ceil(std::log2(2 / 0.3) * std::sqrt(81.0))) + 2;
  std::size_t records = 0, violations = 0, runs = 0, sat = 0;
  std::uint64_t classical_branches = 0;
  for (int i = 0; i < 8; ++i) {
    auto hidden = testing::random_assignment(rng, 12);
    auto f = testing::planted_ksat(rng, hidden, 50, 3);
    const auto cnf = dir / ("ac10_" + std::to_string(i) + ".cnf");
    std::ofstream(cnf) << to_dimacs(f);
    const auto stats = dir / ("ac10_" + std::to_string(i) + ".jsonl");
    const std::string args = "solve --input \"" + cnf.string() + "\" --k 0 --rho 0.3334 --r-max 4 --epsilon 0.3 --seed " +
                             std::to_string(i) + " --workers 1 --stats \"" + stats.string() + "\"";
    ++runs;
    if (run_cli(args, dir / "ac10.out") == 10) ++sat;
    std::ifstream in(stats);
    for (std::string line; std::getline(in, line);) {
      auto j = nlohmann::json::parse(line);
      ++records;
      const auto q = j["queries"].get<std::size_t>();
      const auto b = j["branches"].get<std::uint64_t>();
      if (j["radius"].get<std::size_t>() != 4 || q != 24 || b != 81 || q >= b || q > bound) ++violations;
    }
    SolveConfig cfg;
    cfg.rho = 0.3334;
    cfg.seed = i;
    cfg.mode = SolveMode::Classical;
    classical_branches += solve(f, cfg, fixed_resource(4)).stats.branches;
  }
  const bool ok = records > 0 && violations == 0 && sat == runs;
  return {ok, std::to_string(records) + " quantum leaves, each 24 queries vs 81 branches (bound " +
                  std::to_string(bound) + "), violations " + std::to_string(violations) + ", SAT " +
                  std::to_string(sat) + "/" + std::to_string(runs) + "; classical mode explored " +
                  std::to_string(classical_branches) + " branches"};
}

Outcome ac11() {
  const auto dir = scratch_dir();
  std::mt19937_64 rng(11);
  auto hidden = testing::random_assignment(rng, 14);
  auto f = testing::planted_ksat(rng, hidden, 60, 3);
  const auto cnf = dir / "ac11.cnf";
  std::ofstream(cnf) << to_dimacs(f);
  std::vector<std::string> outs, stats;
  int code = 0;
  for (int run = 0; run < 2; ++run) {
    const auto so = dir / ("ac11_" + std::to_string(run) + ".out");
    const auto st = dir / ("ac11_" + std::to_string(run) + ".jsonl");
    code = run_cli("solve --input \"" + cnf.string() + "\" --k 2 --r-max 2 --epsilon 0.1 --seed 7 --workers 1 --stats \"" +
                       st.string() + "\"",
                   so);
    outs.push_back(slurp(so));
    stats.push_back(slurp(st));
  }
  const bool ok = code == 10 && outs[0] == outs[1] && stats[0] == stats[1] && !outs[0].empty();
  return {ok, "exit " + std::to_string(code) + ", stdout " + std::to_string(outs[0].size()) + " bytes " +
                  (outs[0] == outs[1] ? "identical" : "DIFFER") + ", stats " + std::to_string(stats[0].size()) +
                  " bytes " + (stats[0] == stats[1] ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "M-metric exactness", 1.0, ac1},
      {"AC2", "fixed-point guarantee", 1.0, ac2},
      {"AC3", "simulator/oracle agreement", 30.0, ac3},
      {"AC4", "angle schedule symmetry", 1.0, ac4},
      {"AC5", "3-SAT solver vs brute force", 300.0, ac5},
      {"AC6", "4-SAT generality", 300.0, ac6},
      {"AC7", "covering guarantees", 300.0, ac7},
      {"AC8", "exponent anchor", 1.0, ac8},
      {"AC9", "resource model", 300.0, ac9},
      {"AC10", "hybrid vs classical leaf cost", 300.0, ac10},
      {"AC11", "determinism", 300.0, ac11},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && s < c.time_limit_s;
    failures += !pass;
    std::cout << c.id << ' ' << (pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << " [" << fmt(s, 3)
              << " s]" << std::endl;
  }
  fs::remove_all(scratch_dir());
  std::cout << (failures ? "acceptance: FAILED " + std::to_string(failures) : std::string("acceptance: all passed"))
            << std::endl;
  return failures ? 1 : 0;
}
