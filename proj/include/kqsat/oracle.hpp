#pragma once

// Exhaustive reference answers. Not used by the solver itself.

#include <cstddef>
#include <optional>

#include "kqsat/formula.hpp"

namespace kqsat::oracle {

/// Lexicographically first model (x1 is the leading bit), or nothing when UNSAT.
/// Requires n <= 24.
std::optional<Assignment> brute_sat(const Formula& f);

/// First model within distance r of `center`, scanning distance 0, 1, ..., r
/// and flip sets in lexicographic order at each distance.
std::optional<Assignment> ball_promise(const Formula& f, const Assignment& center, std::size_t r);

}  // namespace kqsat::oracle
