#include "kqsat/oracle.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kqsat::oracle {

std::optional<Assignment> brute_sat(const Formula& f) {
  const std::size_t n = f.num_vars();
  if (n > 24) throw std::length_error("brute_sat: more than 24 variables");
  // variable v lives at bit (n - v), so counting up walks assignments in lex order
  struct Masks {
    std::uint32_t pos = 0, neg = 0;
  };
  std::vector<Masks> clauses;
  for (const auto& c : f.clauses()) {
    Masks m;
    for (const auto& lit : c) (lit.negated ? m.neg : m.pos) |= std::uint32_t{1} << (n - lit.var);
    clauses.push_back(m);
  }
  const std::uint32_t full = n == 0 ? 0 : (n == 32 ? ~0U : (std::uint32_t{1} << n) - 1);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    const auto x = static_cast<std::uint32_t>(a);
    bool ok = true;
    for (const auto& m : clauses) {
      if (((x & m.pos) | (~x & full & m.neg)) == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Assignment out(n);
    for (Var v = 1; v <= n; ++v) out.set(v, (x >> (n - v)) & 1U);
    return out;
  }
  return std::nullopt;
}

std::optional<Assignment> ball_promise(const Formula& f, const Assignment& center, std::size_t r) {
  const std::size_t n = f.num_vars();
  if (center.size() != n) throw std::invalid_argument("ball_promise: center length mismatch");
  if (r > n) r = n;
  Assignment x = center;
  std::optional<Assignment> found;
  // flip sets of exactly `left` more variables chosen from [from, n]
  auto rec = [&](auto&& self, Var from, std::size_t left) -> bool {
    if (left == 0) {
      if (evaluate(f, x)) {
        found = x;
        return true;
      }
      return false;
    }
    for (Var v = from; v + left <= n + 1; ++v) {
      x.flip(v);
      const bool hit = self(self, v + 1, left - 1);
      x.flip(v);
      if (hit) return true;
    }
    return false;
  };
  for (std::size_t d = 0; d <= r; ++d)
    if (rec(rec, 1, d)) return found;
  return std::nullopt;
}

}  // namespace kqsat::oracle
