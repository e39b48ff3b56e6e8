#include "kqsat/fpsearch.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>

namespace kqsat {

double chebyshev_t(double order, double x) {
  if (x < -1.0) throw std::domain_error("chebyshev_t: x < -1");
  if (x <= 1.0) return std::cos(order * std::acos(x));
  return std::cosh(order * std::acosh(x));
}

SearchSchedule make_schedule(double epsilon, double lambda_min) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("make_schedule: epsilon must lie in (0, 1)");
  if (!(lambda_min > 0.0 && lambda_min <= 1.0))
    throw std::invalid_argument("make_schedule: lambda_min must lie in (0, 1]");

  SearchSchedule s;
  s.epsilon = epsilon;
  s.lambda_min = lambda_min;
  const double bound = std::log2(2.0 / epsilon) / std::sqrt(lambda_min);
  auto L = static_cast<std::size_t>(std::ceil(bound));
  if (L % 2 == 0) ++L;
  s.L = L;
  s.l = (L - 1) / 2;
  s.gamma_inv = chebyshev_t(1.0 / static_cast<double>(L), 1.0 / epsilon);
  const double gamma = 1.0 / s.gamma_inv;
  const double root = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));

  std::vector<double> alpha(s.l);
  for (std::size_t j = 1; j <= s.l; ++j) {
    const double x = std::tan(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(L)) * root;
    alpha[j - 1] = 2.0 * (std::numbers::pi / 2.0 - std::atan(x));  // 2 arccot(x), in (0, 2 pi)
  }
  s.angles.resize(s.l);
  for (std::size_t j = 0; j < s.l; ++j) {
    s.angles[j].alpha = alpha[j];
    s.angles[j].beta = -alpha[s.l - 1 - j];
  }
  return s;
}

void write_trace_csv(std::ostream& out, std::span<const double> trace) {
  out << "step,overlap\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << trace[i] << '\n';
}

SearchOutcome run_search(const Formula& f, const Assignment& center, std::size_t r, std::size_t K, double epsilon,
                         std::uint64_t seed) {
  auto state = prepare<double>(f, center, r, K);
  const auto sched = make_schedule(epsilon, 1.0 / static_cast<double>(state.size()));
  SearchOutcome out;
  out.total = state.size();
  out.marked = static_cast<std::uint64_t>(std::count(state.marked.begin(), state.marked.end(), std::uint8_t{1}));
  state = apply_schedule(std::move(state), sched);
  std::mt19937_64 rng(seed);
  const auto idx = measure(state, rng);
  auto walked = walk(f, center, sequence_at(idx, K, r));
  out.success = evaluate(f, walked.candidate);
  out.candidate = std::move(walked.candidate);
  out.queries = sched.queries();
  out.L = sched.L;
  return out;
}

double success_probability_exact(double lambda, const SearchSchedule& sched) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("success_probability_exact: lambda outside [0, 1]");
  using C = std::complex<double>;
  // basis: (|t>, |t-bar>) normalized target / non-target components of |S>
  const Eigen::Vector2cd s(C(std::sqrt(lambda), 0), C(std::sqrt(1.0 - lambda), 0));
  Eigen::Vector2cd v = s;
  for (const auto& a : sched.angles) {
    Eigen::Matrix2cd uf = Eigen::Matrix2cd::Identity();
    uf(0, 0) = std::polar(1.0, a.beta);
    const Eigen::Matrix2cd refl =
        Eigen::Matrix2cd::Identity() - (C(1) - std::polar(1.0, -a.alpha)) * (s * s.adjoint());
    v = -(refl * uf) * v;
  }
  return std::norm(v(0));
}

double success_probability_exact(double lambda, double epsilon, double lambda_min) {
  return success_probability_exact(lambda, make_schedule(epsilon, lambda_min));
}

}  // namespace kqsat
