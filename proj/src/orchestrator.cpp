#include "kqsat/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "kqsat/fliptree.hpp"

namespace kqsat {

std::size_t ResourceModel::r_max(std::size_t word_length) const {
  if (fixed_r_max) return *fixed_r_max;
  return static_cast<std::size_t>(std::floor(gamma * static_cast<double>(word_length)));
}

ResourceModel solve_resource(double A, double B, double c) {
  if (!(A > 0.0 && B > 0.0)) throw ConfigError("resource model: A and B must be positive");
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("resource model: c must lie in (0, 1)");
  auto qubits = [&](double g) { return A * g * std::log2(1.0 / g) + B * g; };
  // derivative A (log2(1/g) - 1/ln 2) + B vanishes at the peak
  const double peak = std::min(1.0, std::exp2(B / A - 1.0 / std::numbers::ln2));
  if (qubits(peak) < c) throw ConfigError("resource model: c is above the reachable maximum for these A, B");
  double lo = 0.0;
  double hi = peak;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (qubits(mid) < c ? lo : hi) = mid;
  }
  ResourceModel rm;
  rm.A = A;
  rm.B = B;
  rm.c = c;
  rm.gamma = std::abs(qubits(lo) - c) < std::abs(qubits(hi) - c) ? lo : hi;
  return rm;
}

ResourceModel fixed_resource(std::size_t r_max) {
  ResourceModel rm;
  rm.fixed_r_max = r_max;
  return rm;
}

double exponent(std::size_t K, double gamma) {
  if (K < 3) throw std::invalid_argument("exponent: K must be at least 3");
  const double k = static_cast<double>(K);
  return 1.0 + std::log2((k - 1.0) / k) - gamma * std::log2((k - 1.0) / std::sqrt(k));
}

BinaryCoveringCode cover_for(std::size_t word_length, double rho, std::size_t max_block_length,
                             const std::optional<std::filesystem::path>& cache_dir) {
  std::size_t d = 1;
  if (word_length > max_block_length) {
    d = 0;
    // blocks must keep a nonzero radius, otherwise the product is the whole space
    for (std::size_t cand = 2; cand <= word_length; ++cand) {
      const std::size_t block = word_length / cand;
      if (word_length % cand == 0 && block <= max_block_length && rho * static_cast<double>(block) >= 1.0) {
        d = cand;
        break;
      }
    }
    if (d == 0)
      throw ConfigError("no block split of length " + std::to_string(word_length) + " into blocks of at most " +
                        std::to_string(max_block_length));
  }
  const auto target = static_cast<std::size_t>(std::floor(rho * static_cast<double>(word_length)));
  std::filesystem::path file;
  if (cache_dir) {
    file = *cache_dir / ("cover-" + std::to_string(word_length) + "-" + std::to_string(target) + ".txt");
    std::ifstream in(file);
    if (in) {
      try {
        auto code = read_binary_cover(in);
        if (code.word_length == word_length && code.radius <= target &&
            (word_length > 20 || verify_cover(code).covered))
          return code;
      } catch (const CodeError&) {
        // unreadable cache entry: rebuild below
      }
    }
  }
  BinaryCoveringCode code;
  try {
    code = build_binary_cover(word_length, rho, d);
  } catch (const CodeError& e) {
    throw ConfigError(e.what());
  }
  if (cache_dir) {
    std::filesystem::create_directories(*cache_dir);
    std::ofstream out(file);
    write_cover(out, code);
  }
  return code;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t task_seed(std::uint64_t seed, std::size_t prefix_id, std::size_t rank) {
  return splitmix64(splitmix64(seed ^ splitmix64(prefix_id + 1)) ^ (rank + 1));
}

struct WorkerSetup {
  std::size_t K;
  std::size_t r_max;
  double epsilon;
  std::size_t retries;
  SolveMode mode;
  const DescentParams* descent;
};

ResultMessage run_task(const TaskMessage& task, const WorkerSetup& ws, std::stop_token stop) {
  PbsContext ctx(ws.K, task.seed, ws.retries, std::move(stop));
  ctx.set_origin(task.prefix, task.rank);
  PbsInstance inst{task.formula, task.center, task.radius, ws.r_max, ws.epsilon};
  PbsResult res;
  if (ws.mode == SolveMode::Classical) {
    inst.r_max = 0;
    res = kqcpbs(inst, ctx);
  } else if (task.radius > ws.r_max) {
    res = kpbs_hybrid(inst, *ws.descent, ctx);
  } else if (task.radius > 0) {
    inst.radius = std::min(task.radius, ws.r_max);
    res = quantum_kpbs(inst, ctx);
  }
  if (res && !evaluate(task.formula, *res)) throw std::logic_error("worker returned an unverified model");
  return {task.rank, true, std::move(res), ctx.stats, std::move(ctx.records)};
}

/// Runs a batch; the first success stops the rest. Results come back in task order.
std::vector<ResultMessage> run_batch(const std::vector<TaskMessage>& tasks, std::size_t workers,
                                     const WorkerSetup& ws) {
  std::vector<ResultMessage> results(tasks.size());
  const std::size_t hw = std::max<unsigned>(1, std::thread::hardware_concurrency());
  const std::size_t threads = std::min({workers, tasks.size(), hw});
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      results[i] = run_task(tasks[i], ws, {});
      if (results[i].model) break;
    }
    return results;
  }

  std::stop_source stop;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        while (!stop.stop_requested()) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          try {
            auto r = run_task(tasks[i], ws, stop.get_token());
            const bool won = r.model.has_value();
            results[i] = std::move(r);
            if (won) stop.request_stop();
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            stop.request_stop();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

SolveResult solve(const Formula& f, const SolveConfig& cfg, const ResourceModel& rm) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = f.num_vars();
  const std::size_t K = cfg.K ? cfg.K : std::max<std::size_t>(3, f.max_width());
  if (K < 3) throw ConfigError("K must be at least 3");
  if (f.max_width() > K) throw ConfigError("formula has clauses wider than K");
  if (cfg.k > n) throw ConfigError("decomposition width k exceeds the number of variables");
  if (cfg.k > 20) throw ConfigError("decomposition width k too large");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  const double rho = cfg.rho > 0.0 ? cfg.rho : 1.0 / static_cast<double>(K);
  if (!(rho > 0.0 && rho < 0.5)) throw ConfigError("rho must lie in (0, 1/2)");
  const std::size_t workers = cfg.workers ? cfg.workers : (std::size_t{1} << cfg.k);

  SolveResult result;
  auto& st = result.stats;
  st.K = K;
  st.word_length = n - cfg.k;
  const auto cover = cover_for(st.word_length, rho, cfg.max_block_length, cfg.cover_cache);
  st.radius = cover.radius;
  st.cover_size = cover.codewords.size();
  st.r_max = cfg.mode == SolveMode::Classical ? 0 : rm.r_max(st.word_length);

  const std::size_t quantum_radius = std::min(st.radius, st.r_max);
  try {
    sequence_count(K, quantum_radius);
  } catch (const std::length_error&) {
    throw ConfigError("quantum register K^" + std::to_string(quantum_radius) + " is too large to simulate");
  }

  std::optional<DescentParams> descent;
  if (cfg.mode == SolveMode::Hybrid && st.radius > st.r_max) {
    descent = make_descent_params(K, st.radius, splitmix64(cfg.seed ^ 0x6b617279ULL));
    st.t = descent->t;
    st.delta = descent->delta;
  }
  const WorkerSetup ws{K, st.r_max, cfg.epsilon, cfg.retries, cfg.mode, descent ? &*descent : nullptr};

  auto subs = decompose(f, cfg.k);
  std::vector<std::size_t> prefix_order(subs.size());
  std::iota(prefix_order.begin(), prefix_order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t i = prefix_order.size(); i > 1; --i) std::swap(prefix_order[i - 1], prefix_order[rng() % i]);

  std::vector<Var> free_vars;
  {
    std::vector<std::uint8_t> in_prefix(n + 1, 0);
    if (!subs.empty())
      for (auto v : subs.front().prefix.vars) in_prefix[v] = 1;
    for (Var v = 1; v <= n; ++v)
      if (!in_prefix[v]) free_vars.push_back(v);
  }

  auto finish = [&](SolveStatus status) {
    result.status = status;
    st.failure_bound =
        std::min(1.0, static_cast<double>(st.quantum_invocations) *
                          std::pow(cfg.epsilon, 2.0 * static_cast<double>(std::max<std::size_t>(cfg.retries, 1))));
    st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return std::move(result);
  };
  auto accept = [&](Assignment model, const Prefix& prefix) {
    model = prefix.as_binding().apply_to(std::move(model));
    if (!evaluate(f, model)) throw std::logic_error("model failed verification against the input formula");
    result.model = std::move(model);
    return finish(SolveStatus::Sat);
  };

  for (auto pid : prefix_order) {
    const auto& sub = subs[pid];
    if (!sub.formula) continue;
    ++st.prefixes_tried;
    const Formula& fp = *sub.formula;
    const Assignment base = sub.prefix.as_binding().apply_to(Assignment(n));
    const std::string prefix_label = sub.prefix.to_string();

    std::vector<Assignment> centers;
    centers.reserve(cover.codewords.size());
    for (const auto& w : cover.codewords) {
      Assignment c = base;
      for (std::size_t i = 0; i < free_vars.size(); ++i) c.set(free_vars[i], w[i] != 0);
      if (evaluate(fp, c)) return accept(std::move(c), sub.prefix);
      centers.push_back(std::move(c));
    }
    std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (unsat, codeword index)
    for (std::size_t i = 0; i < centers.size(); ++i) ranked.emplace_back(unsat_count(fp, centers[i]), i);
    std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first < b.first; });

    for (std::size_t start = 0; start < ranked.size(); start += workers) {
      const std::size_t end = std::min(ranked.size(), start + workers);
      std::vector<TaskMessage> tasks;
      for (std::size_t rank = start; rank < end; ++rank) {
        tasks.push_back({pid, prefix_label, rank, fp, centers[ranked[rank].second], st.radius,
                         task_seed(cfg.seed, pid, rank)});
      }
      auto results = run_batch(tasks, workers, ws);
      std::optional<Assignment> winner;
      for (auto& r : results) {
        if (!r.ran) continue;
        ++st.dispatches;
        st.quantum_calls += r.stats.quantum_calls;
        st.quantum_invocations += r.stats.quantum_invocations;
        st.total_queries += r.stats.total_queries;
        st.branches += r.stats.branches;
        st.max_residual_unsat_width = std::max(st.max_residual_unsat_width, r.stats.max_residual_unsat_width);
        result.records.insert(result.records.end(), std::make_move_iterator(r.records.begin()),
                              std::make_move_iterator(r.records.end()));
        if (r.model && !winner) winner = std::move(r.model);
      }
      if (winner) return accept(std::move(*winner), sub.prefix);
    }
  }
  return finish(SolveStatus::False);
}

}  // namespace kqsat
