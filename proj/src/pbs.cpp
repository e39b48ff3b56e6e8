#include "kqsat/pbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kqsat/fliptree.hpp"
#include "kqsat/fpsearch.hpp"

namespace kqsat {

PbsStats& PbsStats::operator+=(const PbsStats& o) {
  quantum_calls += o.quantum_calls;
  quantum_invocations += o.quantum_invocations;
  total_queries += o.total_queries;
  branches += o.branches;
  max_depth = std::max(max_depth, o.max_depth);
  max_residual_unsat_width = std::max(max_residual_unsat_width, o.max_residual_unsat_width);
  return *this;
}

std::size_t descent_word_length(std::size_t K, std::size_t radius) {
  const double r = static_cast<double>(std::max<std::size_t>(radius, 4));
  const auto target = static_cast<std::size_t>(std::floor(std::log2(std::log2(r))));
  const std::size_t multiple = (target + K - 1) / K * K;
  return std::max(K, multiple);
}

DescentParams make_descent_params(std::size_t K, std::size_t radius, std::uint64_t seed) {
  if (K < 3) throw std::invalid_argument("descent needs K >= 3");
  DescentParams dp;
  dp.t = descent_word_length(K, radius);
  dp.code = build_kary_cover(K, dp.t, dp.t / K, seed);
  dp.delta = dp.t - 2 * (dp.t / K);
  return dp;
}

Assignment modify_assignment(const Formula& f, const Assignment& x, std::span<const std::size_t> H,
                             std::span<const std::uint8_t> w) {
  if (H.size() != w.size()) throw std::invalid_argument("modify_assignment: |H| != |w|");
  std::vector<std::uint8_t> used(f.num_vars() + 1, 0);
  for (auto ci : H) {
    for (const auto& lit : f.clause(ci)) {
      if (used[lit.var]) throw std::invalid_argument("modify_assignment: clauses of H share a variable");
      used[lit.var] = 1;
    }
  }
  Assignment out = x;
  for (std::size_t j = 0; j < H.size(); ++j) {
    const auto& c = f.clause(H[j]);
    out.flip(c[literal_slot(w[j], c.size())].var);
  }
  return out;
}

PbsResult quantum_kpbs(const PbsInstance& inst, PbsContext& ctx) {
  ++ctx.stats.quantum_invocations;
  const std::uint64_t leaves = sequence_count(ctx.K(), inst.radius);
  for (std::size_t attempt = 1; attempt <= std::max<std::size_t>(ctx.retries(), 1); ++attempt) {
    if (ctx.stop_requested()) return std::nullopt;
    auto out = run_search(inst.formula, inst.center, inst.radius, ctx.K(), inst.epsilon, ctx.next_seed());
    ++ctx.stats.quantum_calls;
    ctx.stats.total_queries += out.queries;
    ctx.records.push_back({ctx.prefix(), ctx.codeword(), inst.radius, out.L, out.queries, leaves, out.marked,
                           attempt, out.success});
    if (out.success) return std::move(out.candidate);
  }
  return std::nullopt;
}

namespace {

struct Ranked {
  std::size_t score;
  std::size_t order;
};

void sort_by_score(std::vector<Ranked>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Ranked& a, const Ranked& b) { return a.score < b.score; });
}

void enter(PbsContext& ctx, std::size_t depth, std::size_t limit) {
  if (depth > limit) throw std::logic_error("PBS recursion exceeded its radius budget");
  ctx.stats.max_depth = std::max(ctx.stats.max_depth, depth);
}

PbsResult kqcpbs_rec(const PbsInstance& inst, PbsContext& ctx, std::size_t depth, std::size_t limit) {
  enter(ctx, depth, limit);
  const auto& f = inst.formula;
  auto idx = first_unsat(f, inst.center);
  if (!idx) return inst.center;
  if (inst.radius == 0) return std::nullopt;
  if (inst.radius <= inst.r_max) {
    PbsInstance q = inst;
    q.radius = inst.r_max;
    return quantum_kpbs(q, ctx);
  }

  const Clause& clause = f.clause(*idx);
  struct Branch {
    Formula formula;
    Assignment center;
  };
  std::vector<Branch> branches;
  std::vector<Ranked> order;
  for (const auto& lit : clause) {
    auto restricted = restrict_formula(f, PartialAssignment({{lit.var, !lit.negated}}));
    if (!restricted) continue;
    Assignment c = inst.center;
    c.set(lit.var, !lit.negated);
    order.push_back({unsat_count(*restricted, c), branches.size()});
    branches.push_back({std::move(*restricted), std::move(c)});
  }
  sort_by_score(order);
  for (const auto& o : order) {
    if (ctx.stop_requested()) return std::nullopt;
    ++ctx.stats.branches;
    auto& b = branches[o.order];
    PbsInstance next{std::move(b.formula), std::move(b.center), inst.radius - 1, inst.r_max, inst.epsilon};
    if (auto res = kqcpbs_rec(next, ctx, depth + 1, limit)) return res;
  }
  return std::nullopt;
}

PbsResult hybrid_rec(const PbsInstance& inst, const DescentParams& dp, PbsContext& ctx, std::size_t depth,
                     std::size_t limit) {
  enter(ctx, depth, limit);
  const auto& f = inst.formula;
  if (evaluate(f, inst.center)) return inst.center;
  if (inst.radius == 0) return std::nullopt;
  if (inst.radius <= inst.r_max) return quantum_kpbs(inst, ctx);

  const auto G = max_disjoint_unsat(f, inst.center);
  if (G.size() <= dp.t) {
    const auto vars = clause_vars(f, G);
    const std::size_t nv = vars.size();
    if (nv >= 31) throw std::length_error("kpbs_hybrid: vbl(G) too large to enumerate");
    auto binding = [&](std::uint32_t phi) {
      std::vector<Binding> b(nv);
      for (std::size_t i = 0; i < nv; ++i) b[i] = {vars[i], ((phi >> (nv - 1 - i)) & 1U) != 0};
      return PartialAssignment(std::move(b));
    };
    std::vector<Ranked> order;
    for (std::uint32_t phi = 0; phi < (std::uint32_t{1} << nv); ++phi) {
      const auto p = binding(phi);
      auto restricted = restrict_formula(f, p);
      if (!restricted) continue;
      const auto c = p.apply_to(inst.center);
      for (const auto& cl : restricted->clauses())
        if (!clause_satisfied(cl, c))
          ctx.stats.max_residual_unsat_width = std::max(ctx.stats.max_residual_unsat_width, cl.size());
      order.push_back({unsat_count(*restricted, c), phi});
    }
    sort_by_score(order);
    for (const auto& o : order) {
      if (ctx.stop_requested()) return std::nullopt;
      ++ctx.stats.branches;
      const auto p = binding(static_cast<std::uint32_t>(o.order));
      PbsInstance next{*restrict_formula(f, p), p.apply_to(inst.center), inst.radius, inst.r_max, inst.epsilon};
      if (auto res = kqcpbs_rec(next, ctx, depth + 1, limit)) return res;
    }
    return std::nullopt;
  }

  const std::span<const std::size_t> H(G.data(), dp.t);
  std::vector<Assignment> moved;
  std::vector<Ranked> order;
  moved.reserve(dp.code.codewords.size());
  for (const auto& w : dp.code.codewords) {
    moved.push_back(modify_assignment(f, inst.center, H, w));
    order.push_back({unsat_count(f, moved.back()), order.size()});
  }
  sort_by_score(order);
  const std::size_t next_radius = inst.radius > dp.step() ? inst.radius - dp.step() : 0;
  for (const auto& o : order) {
    if (ctx.stop_requested()) return std::nullopt;
    ++ctx.stats.branches;
    PbsInstance next{f, moved[o.order], next_radius, inst.r_max, inst.epsilon};
    if (auto res = hybrid_rec(next, dp, ctx, depth + 1, limit)) return res;
  }
  return std::nullopt;
}

}  // namespace

PbsResult kqcpbs(const PbsInstance& inst, PbsContext& ctx) { return kqcpbs_rec(inst, ctx, 0, inst.radius); }

PbsResult kpbs_hybrid(const PbsInstance& inst, const DescentParams& dp, PbsContext& ctx) {
  if (dp.code.alphabet != ctx.K()) throw std::invalid_argument("kpbs_hybrid: code alphabet differs from K");
  // one extra level for the hand-off from the |G| <= t enumeration into kqcpbs
  return hybrid_rec(inst, dp, ctx, 0, inst.radius + 1);
}

}  // namespace kqsat
