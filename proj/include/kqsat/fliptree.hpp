#pragma once

// Semantics of the flip-sequence register: s in {1..K}^r drives a walk from
// the center, each step flipping one literal of the first unsatisfied clause.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kqsat/formula.hpp"

namespace kqsat {

/// Entries in [1, K].
using FlipSequence = std::vector<std::uint8_t>;

struct FlipOutcome {
  std::vector<Var> flipped;  // V(s), sorted
  Assignment candidate;
  bool value = false;
};

/// Literal chosen by `choice` in a clause of width `width`: wraps modulo the width.
inline std::size_t literal_slot(std::size_t choice, std::size_t width) { return (choice - 1) % width; }

FlipOutcome walk(const Formula& f, const Assignment& center, std::span<const std::uint8_t> s);

/// K^r, throwing if it exceeds `limit`.
std::uint64_t sequence_count(std::size_t K, std::size_t r, std::uint64_t limit = 10'000'000);

/// Index of s in lexicographic order (s_1 most significant).
std::uint64_t sequence_index(std::span<const std::uint8_t> s, std::size_t K);
FlipSequence sequence_at(std::uint64_t index, std::size_t K, std::size_t r);

/// marked[i] = F(x_{V(s_i)}) for every sequence in lexicographic order. Walks
/// the K-ary tree once instead of replaying each sequence.
std::vector<std::uint8_t> marked_mask(const Formula& f, const Assignment& center, std::size_t r, std::size_t K);

struct MarkedFraction {
  double lambda = 0.0;
  std::uint64_t marked = 0;
  std::uint64_t total = 0;
};

MarkedFraction marked_fraction(const Formula& f, const Assignment& center, std::size_t r, std::size_t K);

}  // namespace kqsat
