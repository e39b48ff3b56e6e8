#include "kqsat/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>

namespace kqsat {

namespace {

constexpr std::size_t kMaxBinaryLength = 24;
constexpr std::uint64_t kMaxKarySpace = 1'000'000;

std::uint32_t pack_bits(std::span<const std::uint8_t> w) {
  std::uint32_t v = 0;
  for (auto b : w) v = (v << 1) | (b & 1U);
  return v;
}

Word unpack_bits(std::uint32_t v, std::size_t len) {
  Word w(len);
  for (std::size_t i = 0; i < len; ++i) w[len - 1 - i] = (v >> i) & 1U;
  return w;
}

/// All masks over `len` bits with popcount <= radius.
std::vector<std::uint32_t> ball_masks(std::size_t len, std::size_t radius) {
  std::vector<std::uint32_t> masks;
  const std::uint32_t space = std::uint32_t{1} << len;
  for (std::uint32_t m = 0; m < space; ++m)
    if (static_cast<std::size_t>(std::popcount(m)) <= radius) masks.push_back(m);
  return masks;
}

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > (std::uint64_t{1} << 40)) return r;  // saturating enough for range checks
  }
  return r;
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// K-ary words are packed base-K, first coordinate most significant, digit = symbol - 1.
std::uint64_t pack_kary(std::span<const std::uint8_t> w, std::size_t K) {
  std::uint64_t v = 0;
  for (auto s : w) v = v * K + (s - 1U);
  return v;
}

Word unpack_kary(std::uint64_t v, std::size_t K, std::size_t t) {
  Word w(t);
  for (std::size_t i = 0; i < t; ++i) {
    w[t - 1 - i] = static_cast<std::uint8_t>(v % K + 1);
    v /= K;
  }
  return w;
}

void mark_kary_ball(std::vector<std::uint8_t>& covered, std::uint64_t center, std::size_t K, std::size_t t,
                    std::size_t radius) {
  // place values: weight of coordinate i is K^(t-1-i)
  std::vector<std::uint64_t> weight(t);
  for (std::size_t i = 0; i < t; ++i) weight[i] = ipow(K, t - 1 - i);
  auto digits = unpack_kary(center, K, t);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t budget, std::uint64_t word) -> void {
    covered[word] = 1;
    if (budget == 0) return;
    for (std::size_t i = pos; i < t; ++i) {
      const std::uint64_t d = digits[i] - 1U;
      for (std::uint64_t alt = 0; alt < K; ++alt) {
        if (alt == d) continue;
        std::uint64_t next = word - d * weight[i] + alt * weight[i];
        self(self, i + 1, budget - 1, next);
      }
    }
  };
  rec(rec, 0, radius, center);
}

}  // namespace

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw CodeError("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

double binary_entropy(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw CodeError("binary_entropy: rho must lie in (0, 1)");
  return -rho * std::log2(rho) - (1.0 - rho) * std::log2(1.0 - rho);
}

BinaryCoveringCode greedy_binary_cover(std::size_t word_length, std::size_t radius) {
  if (word_length > kMaxBinaryLength) throw CodeError("binary cover: word length too large for enumeration");
  radius = std::min(radius, word_length);
  const std::uint32_t space = std::uint32_t{1} << word_length;
  const auto masks = ball_masks(word_length, radius);

  std::vector<std::uint8_t> covered(space, 0);
  std::size_t remaining = space;
  // (gain, -word): max gain first, smallest word on ties
  using Entry = std::pair<std::size_t, std::int64_t>;
  std::priority_queue<Entry> heap;
  for (std::uint32_t w = 0; w < space; ++w) heap.emplace(masks.size(), -static_cast<std::int64_t>(w));

  BinaryCoveringCode code{word_length, radius, {}};
  while (remaining > 0 && !heap.empty()) {
    auto [stored, neg] = heap.top();
    heap.pop();
    const auto w = static_cast<std::uint32_t>(-neg);
    std::size_t gain = 0;
    for (auto m : masks) gain += covered[w ^ m] == 0;
    if (gain == 0) continue;
    if (gain < stored) {
      heap.emplace(gain, neg);
      continue;
    }
    for (auto m : masks) {
      if (!covered[w ^ m]) {
        covered[w ^ m] = 1;
        --remaining;
      }
    }
    code.codewords.push_back(unpack_bits(w, word_length));
  }
  return code;
}

BinaryCoveringCode direct_product(const BinaryCoveringCode& a, const BinaryCoveringCode& b) {
  BinaryCoveringCode out{a.word_length + b.word_length, a.radius + b.radius, {}};
  out.codewords.reserve(a.codewords.size() * b.codewords.size());
  for (const auto& x : a.codewords) {
    for (const auto& y : b.codewords) {
      Word w = x;
      w.insert(w.end(), y.begin(), y.end());
      out.codewords.push_back(std::move(w));
    }
  }
  return out;
}

BinaryCoveringCode build_binary_cover(std::size_t word_length, double rho, std::size_t block_divisor) {
  if (!(rho > 0.0 && rho < 0.5)) throw CodeError("binary cover: rho must lie in (0, 1/2)");
  if (block_divisor == 0 || (word_length > 0 && word_length % block_divisor != 0))
    throw CodeError("binary cover: block divisor must divide the word length");
  if (word_length == 0) return {0, 0, {Word{}}};
  const std::size_t block_len = word_length / block_divisor;
  const auto block_radius = static_cast<std::size_t>(std::floor(rho * static_cast<double>(block_len)));
  const auto block = greedy_binary_cover(block_len, block_radius);
  auto code = block;
  for (std::size_t i = 1; i < block_divisor; ++i) code = direct_product(code, block);
  if (word_length <= 20 && !verify_cover(code).covered) throw CodeError("binary cover: construction left words uncovered");
  return code;
}

std::size_t kary_size_bound(std::size_t alphabet, std::size_t word_length, std::size_t radius) {
  const double K = static_cast<double>(alphabet);
  const double t = static_cast<double>(word_length);
  const double num = t * std::log(K) * std::pow(K, t);
  const double den = binomial(word_length, radius) * std::pow(K - 1.0, static_cast<double>(radius));
  return static_cast<std::size_t>(std::ceil(num / den - 1e-9));
}

KaryCoveringCode build_kary_cover(std::size_t alphabet, std::size_t word_length, std::size_t radius,
                                  std::uint64_t seed) {
  if (alphabet < 2) throw CodeError("K-ary cover: alphabet must be at least 2");
  if (radius > word_length) throw CodeError("K-ary cover: radius exceeds word length");
  const std::uint64_t space = ipow(alphabet, word_length);
  if (space > kMaxKarySpace) throw CodeError("K-ary cover: K^t too large to enumerate");

  KaryCoveringCode code{alphabet, word_length, radius, {}, kary_size_bound(alphabet, word_length, radius), false};
  const std::uint64_t draws = std::min<std::uint64_t>(std::max<std::size_t>(code.size_bound, 1), space);

  // uniform random subset of the word space (partial Fisher-Yates)
  std::vector<std::uint64_t> pool(space);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < draws; ++i) {
    const std::uint64_t j = i + rng() % (space - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::uint64_t> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(draws));
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::uint8_t> covered(space, 0);
  for (auto w : chosen) mark_kary_ball(covered, w, alphabet, word_length, radius);
  for (std::uint64_t w = 0; w < space; ++w) {
    if (covered[w]) continue;
    code.repaired = true;
    chosen.push_back(w);
    mark_kary_ball(covered, w, alphabet, word_length, radius);
  }
  std::sort(chosen.begin(), chosen.end());
  for (auto w : chosen) code.codewords.push_back(unpack_kary(w, alphabet, word_length));
  return code;
}

CoverCheck verify_cover(const BinaryCoveringCode& code) {
  if (code.word_length > kMaxBinaryLength) throw CodeError("verify_cover: space too large");
  const std::uint32_t space = std::uint32_t{1} << code.word_length;
  const auto masks = ball_masks(code.word_length, std::min(code.radius, code.word_length));
  std::vector<std::uint8_t> covered(space, 0);
  for (const auto& c : code.codewords) {
    if (c.size() != code.word_length) throw CodeError("verify_cover: codeword length mismatch");
    const auto w = pack_bits(c);
    for (auto m : masks) covered[w ^ m] = 1;
  }
  for (std::uint32_t w = 0; w < space; ++w)
    if (!covered[w]) return {false, unpack_bits(w, code.word_length)};
  return {true, std::nullopt};
}

CoverCheck verify_cover(const KaryCoveringCode& code) {
  const std::uint64_t space = ipow(code.alphabet, code.word_length);
  if (space > kMaxKarySpace) throw CodeError("verify_cover: space too large");
  std::vector<std::uint8_t> covered(space, 0);
  for (const auto& c : code.codewords) {
    if (c.size() != code.word_length) throw CodeError("verify_cover: codeword length mismatch");
    mark_kary_ball(covered, pack_kary(c, code.alphabet), code.alphabet, code.word_length,
                   std::min(code.radius, code.word_length));
  }
  for (std::uint64_t w = 0; w < space; ++w)
    if (!covered[w]) return {false, unpack_kary(w, code.alphabet, code.word_length)};
  return {true, std::nullopt};
}

void write_cover(std::ostream& out, std::size_t alphabet, std::size_t radius, std::span<const Word> words,
                 std::size_t word_length) {
  out << "cover " << alphabet << ' ' << word_length << ' ' << radius << ' ' << words.size() << '\n';
  for (const auto& w : words) {
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << static_cast<unsigned>(w[i]);
    out << '\n';
  }
}

void write_cover(std::ostream& out, const BinaryCoveringCode& code) {
  write_cover(out, 2, code.radius, code.codewords, code.word_length);
}

void write_cover(std::ostream& out, const KaryCoveringCode& code) {
  write_cover(out, code.alphabet, code.radius, code.codewords, code.word_length);
}

namespace {

struct RawCover {
  std::size_t alphabet = 0, word_length = 0, radius = 0;
  std::vector<Word> words;
};

RawCover read_raw(std::istream& in) {
  RawCover raw;
  std::string line;
  if (!std::getline(in, line)) throw CodeError("cover file: missing header");
  std::istringstream hdr(line);
  std::string tag;
  std::size_t count = 0;
  if (!(hdr >> tag >> raw.alphabet >> raw.word_length >> raw.radius >> count) || tag != "cover")
    throw CodeError("cover file: malformed header");
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw CodeError("cover file: truncated");
    std::istringstream ls(line);
    Word w;
    unsigned sym = 0;
    while (ls >> sym) w.push_back(static_cast<std::uint8_t>(sym));
    if (w.size() != raw.word_length) throw CodeError("cover file: codeword length mismatch");
    raw.words.push_back(std::move(w));
  }
  return raw;
}

}  // namespace

BinaryCoveringCode read_binary_cover(std::istream& in) {
  auto raw = read_raw(in);
  if (raw.alphabet != 2) throw CodeError("cover file: expected a binary code");
  for (const auto& w : raw.words)
    for (auto b : w)
      if (b > 1) throw CodeError("cover file: non-binary symbol");
  return {raw.word_length, raw.radius, std::move(raw.words)};
}

KaryCoveringCode read_kary_cover(std::istream& in) {
  auto raw = read_raw(in);
  for (const auto& w : raw.words)
    for (auto s : w)
      if (s < 1 || s > raw.alphabet) throw CodeError("cover file: symbol outside 1..K");
  KaryCoveringCode code{raw.alphabet, raw.word_length, raw.radius, std::move(raw.words), 0, false};
  code.size_bound = kary_size_bound(code.alphabet, code.word_length, code.radius);
  return code;
}

}  // namespace kqsat
