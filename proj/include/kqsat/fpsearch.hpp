#pragma once

// Exact state-vector simulation of fixed-point amplitude amplification over
// the flip-sequence register.
//
// The register holds K^r amplitudes, one per flip sequence. V(s) and the
// formula value are classical functions of s, so the marked mask carries
// everything the oracle U_F needs. One iterate is
//
//   G(alpha, beta) = -(I - (1 - e^{-i alpha}) |S><S|) U_F(beta),
//   U_F(beta)|s>   = e^{i beta F(s)} |s>,
//
// with |S> the uniform superposition. With the Chebyshev angles below this
// reaches a marked sequence with probability >= 1 - eps^2 whenever the
// marked fraction is at least lambda_min.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "kqsat/fliptree.hpp"
#include "kqsat/formula.hpp"

namespace kqsat {

struct AnglePair {
  double alpha = 0.0;
  double beta = 0.0;
};

struct SearchSchedule {
  double epsilon = 0.0;
  double lambda_min = 0.0;
  std::size_t L = 1;  // odd
  std::size_t l = 0;  // (L - 1) / 2
  std::vector<AnglePair> angles;
  double gamma_inv = 1.0;  // T_{1/L}(1/epsilon)

  /// Calls to the state-preparation operator.
  std::size_t queries() const { return L - 1; }
};

/// Chebyshev polynomial of the first kind at real order, valid for x >= -1.
double chebyshev_t(double order, double x);

SearchSchedule make_schedule(double epsilon, double lambda_min);

template <typename Scalar = double>
struct FlipState {
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  Vector amplitudes;
  std::vector<std::uint8_t> marked;

  std::size_t size() const { return static_cast<std::size_t>(amplitudes.size()); }
  Scalar norm() const { return amplitudes.norm(); }
  Scalar success_probability() const {
    Scalar p = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (marked[i]) p += std::norm(amplitudes[static_cast<Eigen::Index>(i)]);
    return p;
  }
};

template <typename Scalar = double>
FlipState<Scalar> uniform_state(std::vector<std::uint8_t> marked) {
  FlipState<Scalar> st;
  const auto n = static_cast<Eigen::Index>(marked.size());
  st.amplitudes = FlipState<Scalar>::Vector::Constant(n, typename FlipState<Scalar>::Complex(1 / std::sqrt(Scalar(n)), 0));
  st.marked = std::move(marked);
  return st;
}

/// Uniform superposition over {1..K}^r with the marked mask from the flip tree.
template <typename Scalar = double>
FlipState<Scalar> prepare(const Formula& f, const Assignment& center, std::size_t r, std::size_t K) {
  return uniform_state<Scalar>(marked_mask(f, center, r, K));
}

template <typename Scalar>
FlipState<Scalar> apply_g(FlipState<Scalar> state, double alpha, double beta) {
  using Complex = typename FlipState<Scalar>::Complex;
  auto& v = state.amplitudes;
  const Complex phase_f = std::polar(Scalar(1), Scalar(beta));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (state.marked[static_cast<std::size_t>(i)]) v[i] *= phase_f;
  // (I - (1 - e^{-i alpha}) |S><S|) v, with |S> = 1/sqrt(N) (1, ..., 1)
  const Scalar n = Scalar(v.size());
  const Complex overlap = v.sum() / std::sqrt(n);
  const Complex coeff = (Complex(1) - std::polar(Scalar(1), Scalar(-alpha))) * overlap / std::sqrt(n);
  v.array() -= coeff;
  v = -v;
  return state;
}

/// S_L = G(alpha_l, beta_l) ... G(alpha_1, beta_1) applied to `state`.
template <typename Scalar>
FlipState<Scalar> apply_schedule(FlipState<Scalar> state, const SearchSchedule& sched) {
  for (const auto& a : sched.angles) state = apply_g(std::move(state), a.alpha, a.beta);
  return state;
}

/// Overlap |<T|psi>|^2 before the first iterate and after each one.
template <typename Scalar>
std::vector<double> overlap_trace(FlipState<Scalar> state, const SearchSchedule& sched) {
  std::vector<double> trace{static_cast<double>(state.success_probability())};
  for (const auto& a : sched.angles) {
    state = apply_g(std::move(state), a.alpha, a.beta);
    trace.push_back(static_cast<double>(state.success_probability()));
  }
  return trace;
}

void write_trace_csv(std::ostream& out, std::span<const double> trace);

/// Index drawn with probability |amplitude|^2.
template <typename Scalar>
std::uint64_t measure(const FlipState<Scalar>& state, std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double total = static_cast<double>(state.amplitudes.squaredNorm());
  double acc = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    acc += static_cast<double>(std::norm(state.amplitudes[static_cast<Eigen::Index>(i)])) / total;
    if (u < acc) return i;
  }
  return state.size() - 1;
}

struct SearchOutcome {
  Assignment candidate;
  bool success = false;
  std::size_t queries = 0;
  std::size_t L = 0;
  std::uint64_t marked = 0;
  std::uint64_t total = 0;
};

/// Prepare, amplify with lambda_min = 1/K^r, measure once, and check the
/// candidate classically.
SearchOutcome run_search(const Formula& f, const Assignment& center, std::size_t r, std::size_t K, double epsilon,
                         std::uint64_t seed);

/// Success probability computed in the two-dimensional span of |T>, |T-bar>.
double success_probability_exact(double lambda, const SearchSchedule& sched);
double success_probability_exact(double lambda, double epsilon, double lambda_min);

}  // namespace kqsat
