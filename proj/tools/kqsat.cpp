// kqsat: DIMACS front end for the distributed hybrid K-SAT solver.
//
//   kqsat solve --input f.cnf [--k 2] [--epsilon 0.1] [--c 0.3 | --r-max 3] ...
//
// Output follows SAT-competition conventions: "s SATISFIABLE" with a "v" model
// line (exit 10), "s UNSATISFIABLE" (exit 20), "s UNKNOWN" (exit 0).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "kqsat/formula.hpp"
#include "kqsat/oracle.hpp"
#include "kqsat/orchestrator.hpp"

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 0;
constexpr int kExitError = 1;

void print_model(std::ostream& out, const kqsat::Assignment& model) {
  out << 'v';
  for (kqsat::Var v = 1; v <= model.size(); ++v) out << ' ' << (model.get(v) ? "" : "-") << v;
  out << " 0\n";
}

void write_stats(const std::string& path, const std::vector<kqsat::QuantumCallRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open stats file " + path);
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["prefix"] = r.prefix;
    j["codeword"] = r.codeword;
    j["radius"] = r.radius;
    j["L"] = r.L;
    j["queries"] = r.queries;
    j["branches"] = r.branches;
    j["marked"] = r.marked;
    j["attempt"] = r.attempt;
    j["outcome"] = r.success ? "sat" : "false";
    out << j.dump() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed quantum-classical hybrid K-SAT solver (simulated quantum search)"};
  app.require_subcommand(1);
  auto* solve_cmd = app.add_subcommand("solve", "Solve a DIMACS CNF instance");

  std::string input;
  std::size_t k = 0;
  double epsilon = 0.1;
  std::optional<double> c;
  std::optional<std::size_t> r_max;
  std::optional<double> rho;
  double A = 1.0;
  double B = 1.0;
  std::optional<std::size_t> workers;
  std::size_t retries = 3;
  std::uint64_t seed = 0;
  std::string mode = "hybrid";
  std::string stats_path;
  std::string cover_cache;
  std::size_t K = 0;

  solve_cmd->add_option("--input", input, "DIMACS file (default: standard input)");
  solve_cmd->add_option("--k", k, "Number of decomposition variables");
  solve_cmd->add_option("--epsilon", epsilon, "Search failure amplitude, success >= 1 - eps^2")
      ->check(CLI::Range(0.0, 1.0));
  auto* c_opt = solve_cmd->add_option("--c", c, "Qubit fraction c in (0, 1); default 0.3");
  auto* r_opt = solve_cmd->add_option("--r-max", r_max, "Largest radius given to the quantum search");
  c_opt->excludes(r_opt);
  r_opt->excludes(c_opt);
  solve_cmd->add_option("--rho", rho, "Binary cover radius fraction (default 1/K)");
  solve_cmd->add_option("--A", A, "Qubit model constant A");
  solve_cmd->add_option("--B", B, "Qubit model constant B");
  solve_cmd->add_option("--K", K, "Clause width K (default: max(3, widest clause))");
  solve_cmd->add_option("--workers", workers, "Parallel workers (default 2^k)");
  solve_cmd->add_option("--retries", retries, "Quantum retries per PBS call");
  solve_cmd->add_option("--seed", seed, "Random seed");
  solve_cmd->add_option("--mode", mode, "hybrid | classical | brute")
      ->check(CLI::IsMember({"hybrid", "classical", "brute"}));
  solve_cmd->add_option("--stats", stats_path, "Write one JSON object per quantum call");
  solve_cmd->add_option("--cover-cache", cover_cache, "Directory for cached covering codes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  kqsat::Formula formula;
  try {
    std::vector<std::string> warnings;
    if (input.empty() || input == "-") {
      formula = kqsat::parse_dimacs(std::cin, &warnings);
    } else {
      std::ifstream in(input);
      if (!in) {
        std::cerr << "c error: cannot open " << input << '\n';
        return kExitError;
      }
      formula = kqsat::parse_dimacs(in, &warnings);
    }
    for (const auto& w : warnings) std::cout << "c warning: " << w << '\n';
  } catch (const kqsat::ParseError& e) {
    std::cerr << "c parse error: " << e.what() << '\n';
    return kExitError;
  } catch (const kqsat::FormulaError& e) {
    std::cerr << "c parse error: " << e.what() << '\n';
    return kExitError;
  }

  std::cout << "c kqsat: " << formula.num_vars() << " variables, " << formula.num_clauses() << " clauses\n";

  if (mode == "brute") {
    try {
      auto model = kqsat::oracle::brute_sat(formula);
      if (!stats_path.empty()) write_stats(stats_path, {});
      if (!model) {
        std::cout << "s UNSATISFIABLE\n";
        return kExitUnsat;
      }
      std::cout << "s SATISFIABLE\n";
      print_model(std::cout, *model);
      return kExitSat;
    } catch (const std::length_error& e) {
      std::cout << "c error: " << e.what() << "\ns UNKNOWN\n";
      return kExitUnknown;
    }
  }

  kqsat::SolveConfig cfg;
  cfg.k = k;
  cfg.K = K;
  cfg.epsilon = epsilon;
  cfg.rho = rho.value_or(0.0);
  cfg.workers = workers.value_or(0);
  cfg.retries = retries;
  cfg.seed = seed;
  cfg.mode = mode == "classical" ? kqsat::SolveMode::Classical : kqsat::SolveMode::Hybrid;
  if (!cover_cache.empty()) cfg.cover_cache = cover_cache;

  kqsat::SolveResult result;
  try {
    const auto rm = r_max ? kqsat::fixed_resource(*r_max) : kqsat::solve_resource(A, B, c.value_or(0.3));
    result = kqsat::solve(formula, cfg, rm);
  } catch (const kqsat::ConfigError& e) {
    std::cout << "c configuration error: " << e.what() << "\ns UNKNOWN\n";
    return kExitUnknown;
  }

  if (!stats_path.empty()) {
    try {
      write_stats(stats_path, result.records);
    } catch (const std::exception& e) {
      std::cerr << "c error: " << e.what() << '\n';
      return kExitError;
    }
  }

  const auto& st = result.stats;
  std::cout << "c K " << st.K << " word-length " << st.word_length << " cover " << st.cover_size << " radius "
            << st.radius << " r-max " << st.r_max << '\n';
  std::cout << "c prefixes " << st.prefixes_tried << " dispatches " << st.dispatches << " branches " << st.branches
            << '\n';
  std::cout << "c quantum-calls " << st.quantum_calls << " queries " << st.total_queries << '\n';

  if (result.status == kqsat::SolveStatus::Sat) {
    if (!kqsat::evaluate(formula, result.model)) {
      std::cerr << "c internal error: model does not satisfy the input\n";
      return kExitError;
    }
    std::cout << "s SATISFIABLE\n";
    print_model(std::cout, result.model);
    return kExitSat;
  }
  std::ostringstream bound;
  bound << std::setprecision(6) << st.failure_bound;
  std::cout << "c one-sided: failure-prob <= " << bound.str() << '\n';
  std::cout << "s UNSATISFIABLE\n";
  return kExitUnsat;
}
