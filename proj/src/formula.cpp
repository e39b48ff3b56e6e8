#include "kqsat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <numeric>
#include <sstream>

namespace kqsat {

Assignment Assignment::from_string(std::string_view bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw FormulaError("assignment string must be 0/1");
    out.push_back(c == '1' ? 1 : 0);
  }
  return Assignment(std::move(out));
}

std::string Assignment::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

PartialAssignment::PartialAssignment(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {
  std::vector<Var> seen;
  seen.reserve(bindings_.size());
  for (const auto& b : bindings_) {
    if (b.var == 0) throw FormulaError("binding on variable 0");
    seen.push_back(b.var);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw FormulaError("duplicate binding in partial assignment");
}

Assignment PartialAssignment::apply_to(Assignment a) const {
  for (const auto& b : bindings_) a.set(b.var, b.value);
  return a;
}

PartialAssignment Prefix::as_binding() const {
  std::vector<Binding> out;
  out.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) out.push_back({vars[i], bits[i] != 0});
  return PartialAssignment(std::move(out));
}

std::string Prefix::to_string() const {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Formula::Formula(std::size_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  for (auto& c : clauses_) {
    if (c.empty()) throw FormulaError("empty clause");
    Clause dedup;
    dedup.reserve(c.size());
    for (const auto& lit : c) {
      if (lit.var == 0 || lit.var > num_vars_)
        throw FormulaError("variable " + std::to_string(lit.var) + " out of range [1, " +
                           std::to_string(num_vars_) + "]");
      if (std::find(dedup.begin(), dedup.end(), lit) == dedup.end()) dedup.push_back(lit);
    }
    c = std::move(dedup);
    max_width_ = std::max(max_width_, c.size());
  }
}

namespace {

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause pending;
  std::size_t pending_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c" || toks[0].front() == 'c') continue;
    if (toks[0] == "%") break;  // SATLIB end marker
    if (toks[0] == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf" || !parse_int(toks[2], declared_vars) ||
          !parse_int(toks[3], declared_clauses) || declared_vars < 0 || declared_clauses < 0)
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause data before 'p cnf' header");
    for (auto tok : toks) {
      long long v = 0;
      if (!parse_int(tok, v)) throw ParseError(lineno, "invalid token '" + std::string(tok) + "'");
      if (v == 0) {
        if (pending.empty()) throw ParseError(lineno, "empty clause");
        clauses.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      long long mag = v < 0 ? -v : v;
      if (mag > declared_vars)
        throw ParseError(lineno, "variable " + std::to_string(mag) + " exceeds declared " +
                                     std::to_string(declared_vars));
      if (pending.empty()) pending_line = lineno;
      pending.push_back(Literal::from_dimacs(static_cast<int>(v)));
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "unterminated clause (missing 0)");
  if (warnings && static_cast<long long>(clauses.size()) != declared_clauses) {
    warnings->push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                        std::to_string(clauses.size()));
  }
  return Formula(static_cast<std::size_t>(declared_vars), std::move(clauses));
}

Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, warnings);
}

std::string to_dimacs(const Formula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const auto& c : f.clauses()) {
    for (const auto& lit : c) out << lit.dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

bool clause_satisfied(const Clause& c, const Assignment& a) {
  return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return l.satisfied_by(a.get(l.var)); });
}

namespace {
void check_length(const Formula& f, const Assignment& a) {
  if (a.size() != f.num_vars())
    throw FormulaError("assignment length " + std::to_string(a.size()) + " != num_vars " +
                       std::to_string(f.num_vars()));
}
}  // namespace

bool evaluate(const Formula& f, const Assignment& a) {
  check_length(f, a);
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [&](const Clause& c) { return clause_satisfied(c, a); });
}

std::size_t unsat_count(const Formula& f, const Assignment& a) {
  check_length(f, a);
  return static_cast<std::size_t>(std::count_if(f.clauses().begin(), f.clauses().end(),
                                                [&](const Clause& c) { return !clause_satisfied(c, a); }));
}

std::optional<std::size_t> first_unsat(const Formula& f, const Assignment& a) {
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    if (!clause_satisfied(f.clause(i), a)) return i;
  return std::nullopt;
}

Restriction restrict_formula(const Formula& f, const PartialAssignment& p) {
  // value per variable: -1 unbound
  std::vector<std::int8_t> bound(f.num_vars() + 1, -1);
  for (const auto& b : p.bindings()) {
    if (b.var > f.num_vars()) throw FormulaError("binding variable out of range");
    bound[b.var] = b.value ? 1 : 0;
  }
  std::vector<Clause> out;
  out.reserve(f.num_clauses());
  for (const auto& c : f.clauses()) {
    Clause kept;
    bool satisfied = false;
    for (const auto& lit : c) {
      auto val = bound[lit.var];
      if (val < 0) {
        kept.push_back(lit);
      } else if (lit.satisfied_by(val == 1)) {
        satisfied = true;
        break;
      }
    }
    if (satisfied) continue;
    if (kept.empty()) return std::nullopt;
    out.push_back(std::move(kept));
  }
  return Formula(f.num_vars(), std::move(out));
}

std::size_t m_metric(const Formula& f, Var v) {
  if (v == 0 || v > f.num_vars()) throw FormulaError("variable out of range");
  std::size_t m = 0;
  for (const auto& c : f.clauses())
    for (const auto& lit : c)
      if (lit.var == v) ++m;
  return m;
}

std::vector<Var> top_k_vars(const Formula& f, std::size_t k) {
  if (k > f.num_vars()) throw FormulaError("k exceeds number of variables");
  std::vector<std::size_t> m(f.num_vars() + 1, 0);
  for (const auto& c : f.clauses())
    for (const auto& lit : c) ++m[lit.var];
  std::vector<Var> vars(f.num_vars());
  std::iota(vars.begin(), vars.end(), Var{1});
  std::stable_sort(vars.begin(), vars.end(), [&](Var a, Var b) { return m[a] > m[b]; });
  vars.resize(k);
  return vars;
}

std::vector<Subformula> decompose(const Formula& f, std::size_t k) {
  auto vars = top_k_vars(f, k);
  if (k >= 63) throw FormulaError("decomposition width too large");
  const std::uint64_t count = std::uint64_t{1} << k;
  std::vector<Subformula> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Prefix prefix{vars, std::vector<std::uint8_t>(k)};
    for (std::size_t j = 0; j < k; ++j) prefix.bits[j] = (idx >> (k - 1 - j)) & 1U;
    auto sub = restrict_formula(f, prefix.as_binding());
    out.push_back({std::move(prefix), std::move(sub)});
  }
  return out;
}

std::vector<std::size_t> max_disjoint_unsat(const Formula& f, const Assignment& a) {
  check_length(f, a);
  std::vector<std::uint8_t> used(f.num_vars() + 1, 0);
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < f.num_clauses(); ++i) {
    const auto& c = f.clause(i);
    if (clause_satisfied(c, a)) continue;
    bool clash = std::any_of(c.begin(), c.end(), [&](const Literal& l) { return used[l.var] != 0; });
    if (clash) continue;
    for (const auto& l : c) used[l.var] = 1;
    picked.push_back(i);
  }
  return picked;
}

std::vector<Var> clause_vars(const Formula& f, std::span<const std::size_t> clause_indices) {
  std::vector<Var> vars;
  for (auto i : clause_indices)
    for (const auto& l : f.clause(i)) vars.push_back(l.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

}  // namespace kqsat
