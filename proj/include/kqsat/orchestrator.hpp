#pragma once

// Distributed top level: decompose on the k most frequent variables, sweep a
// binary covering code per subformula, and dispatch the best-ranked centers
// to a pool of share-nothing workers. First verified model wins.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kqsat/codes.hpp"
#include "kqsat/formula.hpp"
#include "kqsat/pbs.hpp"

namespace kqsat {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Qubit budget A r log((n-k)/r) + B r = c n solved for the radius fraction gamma.
struct ResourceModel {
  double A = 1.0;
  double B = 1.0;
  double c = 0.0;
  double gamma = 0.0;
  /// Set when the radius is given directly instead of through c.
  std::optional<std::size_t> fixed_r_max;

  /// floor(gamma * word_length), or the fixed radius.
  std::size_t r_max(std::size_t word_length) const;
};

/// Smallest positive root of A g log2(1/g) + B g = c, by bisection on the
/// increasing branch.
ResourceModel solve_resource(double A, double B, double c);
ResourceModel fixed_resource(std::size_t r_max);

/// Runtime exponent 1 + log2((K-1)/K) - gamma log2((K-1)/sqrt(K)).
double exponent(std::size_t K, double gamma);

enum class SolveMode { Hybrid, Classical };

struct SolveConfig {
  std::size_t k = 0;
  std::size_t K = 0;         // 0: max(3, widest clause)
  double epsilon = 0.1;
  double rho = 0.0;          // 0: 1/K
  std::size_t workers = 0;   // 0: 2^k
  std::size_t retries = 3;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::Hybrid;
  std::optional<std::filesystem::path> cover_cache;
  std::size_t max_block_length = 14;  // single greedy block limit for the binary cover
};

enum class SolveStatus { Sat, False };

struct SolveStats {
  std::uint64_t quantum_calls = 0;
  std::uint64_t quantum_invocations = 0;
  std::uint64_t total_queries = 0;
  std::uint64_t branches = 0;
  std::uint64_t dispatches = 0;
  std::size_t prefixes_tried = 0;
  std::size_t K = 0;
  std::size_t word_length = 0;
  std::size_t radius = 0;  // binary cover radius
  std::size_t cover_size = 0;
  std::size_t r_max = 0;
  std::size_t t = 0;
  std::size_t delta = 0;
  std::size_t max_residual_unsat_width = 0;
  /// Upper bound on the chance that FALSE is wrong: invocations * eps^(2R).
  double failure_bound = 0.0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::False;
  Assignment model;
  SolveStats stats;
  std::vector<QuantumCallRecord> records;
};

/// Worker input. Only classical data crosses the worker boundary.
struct TaskMessage {
  std::size_t prefix_id = 0;
  std::string prefix;
  std::size_t rank = 0;  // position in the sorted codeword list
  Formula formula;
  Assignment center;
  std::size_t radius = 0;
  std::uint64_t seed = 0;
};

/// Worker output.
struct ResultMessage {
  std::size_t rank = 0;
  bool ran = false;
  std::optional<Assignment> model;
  PbsStats stats;
  std::vector<QuantumCallRecord> records;
};

/// Resolved cover for a word length: d blocks of at most `max_block_length`.
BinaryCoveringCode cover_for(std::size_t word_length, double rho, std::size_t max_block_length,
                             const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

SolveResult solve(const Formula& f, const SolveConfig& cfg, const ResourceModel& rm);

}  // namespace kqsat
