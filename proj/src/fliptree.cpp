#include "kqsat/fliptree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kqsat {

FlipOutcome walk(const Formula& f, const Assignment& center, std::span<const std::uint8_t> s) {
  if (center.size() != f.num_vars()) throw FormulaError("walk: center length mismatch");
  Assignment x = center;
  std::vector<std::uint8_t> in_v(f.num_vars() + 1, 0);
  for (auto choice : s) {
    auto idx = first_unsat(f, x);
    if (!idx) break;  // satisfied: remaining choices are no-ops
    const auto& c = f.clause(*idx);
    const Var v = c[literal_slot(choice, c.size())].var;
    x.flip(v);
    in_v[v] ^= 1;
  }
  FlipOutcome out;
  for (Var v = 1; v <= f.num_vars(); ++v)
    if (in_v[v]) out.flipped.push_back(v);
  out.value = evaluate(f, x);
  out.candidate = std::move(x);
  return out;
}

std::uint64_t sequence_count(std::size_t K, std::size_t r, std::uint64_t limit) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < r; ++i) {
    n *= K;
    if (n > limit)
      throw std::length_error("flip register K^r exceeds " + std::to_string(limit) + " states");
  }
  return n;
}

std::uint64_t sequence_index(std::span<const std::uint8_t> s, std::size_t K) {
  std::uint64_t idx = 0;
  for (auto c : s) idx = idx * K + (c - 1U);
  return idx;
}

FlipSequence sequence_at(std::uint64_t index, std::size_t K, std::size_t r) {
  FlipSequence s(r);
  for (std::size_t i = 0; i < r; ++i) {
    s[r - 1 - i] = static_cast<std::uint8_t>(index % K + 1);
    index /= K;
  }
  return s;
}

std::vector<std::uint8_t> marked_mask(const Formula& f, const Assignment& center, std::size_t r, std::size_t K) {
  if (center.size() != f.num_vars()) throw FormulaError("marked_mask: center length mismatch");
  const std::uint64_t total = sequence_count(K, r);
  std::vector<std::uint8_t> mask(total, 0);
  Assignment x = center;
  // subtree of depth d rooted at `base` spans K^d consecutive indices
  auto rec = [&](auto&& self, std::size_t depth, std::uint64_t base, std::uint64_t span) -> void {
    auto idx = first_unsat(f, x);
    if (!idx) {
      std::fill(mask.begin() + static_cast<std::ptrdiff_t>(base),
                mask.begin() + static_cast<std::ptrdiff_t>(base + span), 1);
      return;
    }
    if (depth == r) return;
    const auto& c = f.clause(*idx);
    const std::uint64_t child = span / K;
    for (std::size_t choice = 1; choice <= K; ++choice) {
      const Var v = c[literal_slot(choice, c.size())].var;
      x.flip(v);
      self(self, depth + 1, base + (choice - 1) * child, child);
      x.flip(v);
    }
  };
  rec(rec, 0, 0, total);
  return mask;
}

MarkedFraction marked_fraction(const Formula& f, const Assignment& center, std::size_t r, std::size_t K) {
  auto mask = marked_mask(f, center, r, K);
  const auto marked = static_cast<std::uint64_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
  return {static_cast<double>(marked) / static_cast<double>(mask.size()), marked, mask.size()};
}

}  // namespace kqsat
