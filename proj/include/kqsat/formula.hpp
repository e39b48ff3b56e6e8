#pragma once

// CNF data model: clauses, assignments, restriction and decomposition.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kqsat {

/// 1-based variable index, as in DIMACS.
using Var = std::uint32_t;

struct Literal {
  Var var = 0;
  bool negated = false;

  /// Signed DIMACS form (x3 -> 3, not x3 -> -3).
  int dimacs() const { return negated ? -static_cast<int>(var) : static_cast<int>(var); }
  static Literal from_dimacs(int lit) {
    return {static_cast<Var>(lit < 0 ? -lit : lit), lit < 0};
  }
  bool satisfied_by(bool value) const { return value != negated; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Literal order is fixed at construction; flip sequences index into it.
using Clause = std::vector<Literal>;

/// Total assignment over variables 1..n.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars) : bits_(num_vars, 0) {}
  explicit Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  /// Parse "0100" style strings; character i is variable i+1.
  static Assignment from_string(std::string_view bits);

  std::size_t size() const { return bits_.size(); }
  bool get(Var v) const { return bits_[v - 1] != 0; }
  void set(Var v, bool value) { bits_[v - 1] = value ? 1 : 0; }
  void flip(Var v) { bits_[v - 1] ^= 1; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct Binding {
  Var var = 0;
  bool value = false;
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Partial assignment; construction rejects duplicate variables.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::vector<Binding> bindings);

  std::span<const Binding> bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  /// Copy of `a` with every bound variable overwritten.
  Assignment apply_to(Assignment a) const;

 private:
  std::vector<Binding> bindings_;
};

/// Bits i' bound onto the k decomposition variables, in selection order.
struct Prefix {
  std::vector<Var> vars;
  std::vector<std::uint8_t> bits;

  PartialAssignment as_binding() const;
  std::string to_string() const;
};

class FormulaError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Formula {
 public:
  Formula() = default;
  /// Validates indices and removes exact duplicate literals within a clause.
  /// Tautological clauses are kept. Empty clauses are rejected.
  Formula(std::size_t num_vars, std::vector<Clause> clauses);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  std::size_t max_width() const { return max_width_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_[i]; }
  bool empty() const { return clauses_.empty(); }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  std::size_t num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::size_t max_width_ = 0;
};

/// Result of restricting a formula. nullopt means some clause emptied.
using Restriction = std::optional<Formula>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses DIMACS CNF. Non-fatal oddities (clause count mismatch) go to
/// `warnings` when provided.
Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr);
Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Canonical DIMACS: header, then one 0-terminated clause per line.
std::string to_dimacs(const Formula& f);

bool clause_satisfied(const Clause& c, const Assignment& a);
bool evaluate(const Formula& f, const Assignment& a);
std::size_t unsat_count(const Formula& f, const Assignment& a);
/// Index of the first clause not satisfied by `a`, if any.
std::optional<std::size_t> first_unsat(const Formula& f, const Assignment& a);

Restriction restrict_formula(const Formula& f, const PartialAssignment& p);

/// Occurrences of `v` over all clauses, either polarity.
std::size_t m_metric(const Formula& f, Var v);
/// k variables with the largest M value, descending, ties by lower index.
std::vector<Var> top_k_vars(const Formula& f, std::size_t k);

struct Subformula {
  Prefix prefix;
  Restriction formula;
};

/// All 2^k restrictions over top_k_vars(f, k). The first selected variable is
/// the most significant prefix bit, so entries come in lexicographic order.
std::vector<Subformula> decompose(const Formula& f, std::size_t k);

/// Greedy maximal set of pairwise variable-disjoint clauses unsatisfied by `a`,
/// scanned in clause-index order.
std::vector<std::size_t> max_disjoint_unsat(const Formula& f, const Assignment& a);

/// Sorted distinct variables of the given clauses.
std::vector<Var> clause_vars(const Formula& f, std::span<const std::size_t> clause_indices);

}  // namespace kqsat
