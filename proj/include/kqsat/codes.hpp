#pragma once

// Covering codes over {0,1}^n (centers of Hamming balls) and over
// {1..K}^t (flip patterns for the disjoint-clause descent).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace kqsat {

/// Binary words hold 0/1, K-ary words hold 1..K.
using Word = std::vector<std::uint8_t>;

class CodeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BinaryCoveringCode {
  std::size_t word_length = 0;
  std::size_t radius = 0;
  std::vector<Word> codewords;
};

struct KaryCoveringCode {
  std::size_t alphabet = 0;
  std::size_t word_length = 0;
  std::size_t radius = 0;
  std::vector<Word> codewords;
  /// ceil(t ln K K^t / (C(t,s) (K-1)^s))
  std::size_t size_bound = 0;
  /// Random draw left words uncovered and the code was completed greedily.
  bool repaired = false;
};

struct CoverCheck {
  bool covered = false;
  std::optional<Word> witness;  // first uncovered word, lexicographic
};

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Base-2 entropy h(rho).
double binary_entropy(double rho);

/// Blockwise greedy cover: d blocks of equal length, each with radius
/// floor(rho * block_len), combined as a direct product.
BinaryCoveringCode build_binary_cover(std::size_t word_length, double rho, std::size_t block_divisor = 1);

/// Single-block greedy cover with an explicit radius.
BinaryCoveringCode greedy_binary_cover(std::size_t word_length, std::size_t radius);

/// Every pair (a, b) concatenated; radius adds.
BinaryCoveringCode direct_product(const BinaryCoveringCode& a, const BinaryCoveringCode& b);

std::size_t kary_size_bound(std::size_t alphabet, std::size_t word_length, std::size_t radius);

/// Random subset of kary_size_bound() words, completed greedily if it does
/// not cover {1..K}^t.
KaryCoveringCode build_kary_cover(std::size_t alphabet, std::size_t word_length, std::size_t radius,
                                  std::uint64_t seed);

CoverCheck verify_cover(const BinaryCoveringCode& code);
CoverCheck verify_cover(const KaryCoveringCode& code);

// Text format: "cover <alphabet> <word_length> <radius> <count>" followed by
// one whitespace-separated codeword per line.
void write_cover(std::ostream& out, std::size_t alphabet, std::size_t radius, std::span<const Word> words,
                 std::size_t word_length);
void write_cover(std::ostream& out, const BinaryCoveringCode& code);
void write_cover(std::ostream& out, const KaryCoveringCode& code);
BinaryCoveringCode read_binary_cover(std::istream& in);
KaryCoveringCode read_kary_cover(std::istream& in);

}  // namespace kqsat
