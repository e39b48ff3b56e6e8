#pragma once

// Promise-Ball-SAT solvers: find a satisfying assignment within Hamming
// distance r of a center.
//
//   quantum_kpbs  one fixed-point search over {1..K}^r, verified classically
//   kqcpbs        branch on the literals of an unsatisfied clause until the
//                 radius fits the quantum device, then search
//   kpbs_hybrid   maximal disjoint unsatisfied clause set G; enumerate vbl(G)
//                 when |G| <= t, otherwise descend with a K-ary covering code

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "kqsat/codes.hpp"
#include "kqsat/formula.hpp"

namespace kqsat {

struct PbsInstance {
  Formula formula;
  Assignment center;
  std::size_t radius = 0;
  std::size_t r_max = 0;
  double epsilon = 0.1;
};

struct DescentParams {
  std::size_t t = 0;
  KaryCoveringCode code;  // radius t / K
  std::size_t delta = 0;  // t - 2t/K

  /// Radius decrease per codeword step, t / K.
  std::size_t step() const { return code.radius; }
};

/// max(K, smallest multiple of K >= floor(log2 log2 max(r, 4))).
std::size_t descent_word_length(std::size_t K, std::size_t radius);
DescentParams make_descent_params(std::size_t K, std::size_t radius, std::uint64_t seed);

/// One record per simulated quantum search.
struct QuantumCallRecord {
  std::string prefix;
  std::size_t codeword = 0;
  std::size_t radius = 0;
  std::size_t L = 0;
  std::size_t queries = 0;
  std::uint64_t branches = 0;  // K^radius: leaves of the equivalent classical enumeration
  std::uint64_t marked = 0;
  std::size_t attempt = 0;
  bool success = false;
};

struct PbsStats {
  std::uint64_t quantum_calls = 0;        // individual searches, retries included
  std::uint64_t quantum_invocations = 0;  // quantum_kpbs calls
  std::uint64_t total_queries = 0;
  std::uint64_t branches = 0;  // classical recursion children explored
  std::size_t max_depth = 0;
  /// Widest clause, unsatisfied by the branch center, handed to kqcpbs from the
  /// |G| <= t enumeration.
  std::size_t max_residual_unsat_width = 0;

  PbsStats& operator+=(const PbsStats& o);
};

/// Per-worker state: seed stream, cancellation, counters and call records.
class PbsContext {
 public:
  PbsContext(std::size_t K, std::uint64_t seed, std::size_t retries = 3, std::stop_token stop = {})
      : K_(K), retries_(retries), rng_(seed), stop_(std::move(stop)) {}

  std::size_t K() const { return K_; }
  std::size_t retries() const { return retries_; }
  bool stop_requested() const { return stop_.stop_requested(); }
  std::uint64_t next_seed() { return rng_(); }

  /// Labels attached to subsequent call records.
  void set_origin(std::string prefix, std::size_t codeword) {
    prefix_ = std::move(prefix);
    codeword_ = codeword;
  }

  const std::string& prefix() const { return prefix_; }
  std::size_t codeword() const { return codeword_; }

  PbsStats stats;
  std::vector<QuantumCallRecord> records;

 private:
  std::size_t K_;
  std::size_t retries_;
  std::mt19937_64 rng_;
  std::stop_token stop_;
  std::string prefix_;
  std::size_t codeword_ = 0;
};

/// Satisfying assignment or nothing (FALSE).
using PbsResult = std::optional<Assignment>;

PbsResult quantum_kpbs(const PbsInstance& inst, PbsContext& ctx);
PbsResult kqcpbs(const PbsInstance& inst, PbsContext& ctx);
PbsResult kpbs_hybrid(const PbsInstance& inst, const DescentParams& dp, PbsContext& ctx);

/// x[H, w]: in clause H_j flip the variable of literal w_j (wrapping modulo
/// the clause width). Throws if the clauses of H share a variable.
Assignment modify_assignment(const Formula& f, const Assignment& x, std::span<const std::size_t> H,
                             std::span<const std::uint8_t> w);

}  // namespace kqsat
