#pragma once

// Gradient descent on the smoothed objective with reassignment and
// empty-cluster deletion, driven through a decreasing schedule of
// smoothing parameters (continuation). Each stage warm-starts from the
// previous one and all stages draw from one shared iteration pool.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmwp/envelope.hpp"

namespace gmwp {

struct SolveParams {
  std::vector<double> mu_schedule{1.0, 0.5, 0.2, 0.1, 0.01};
  double step_factor = 1.8;  // alpha = step_factor * mu / m
  double epsilon = 1e-6;
  std::size_t max_total_iters = 10000;
  std::uint64_t seed = 2026;
  // Step factors >= 2 leave the descent window; only experiments that
  // probe that window should set this.
  bool allow_unsafe_step = false;
  // Record the smoothed objective after every iterate (tests, diagnostics).
  bool record_objective = false;

  void validate() const {
    if (mu_schedule.empty()) throw ParameterError("mu schedule is empty");
    for (std::size_t s = 0; s < mu_schedule.size(); ++s) {
      if (!(mu_schedule[s] > 0.0)) throw ParameterError("mu schedule entries must be positive");
      if (s > 0 && !(mu_schedule[s] < mu_schedule[s - 1]))
        throw ParameterError("mu schedule must be strictly decreasing");
    }
    if (!(step_factor > 0.0)) throw ParameterError("step factor must be positive");
    if (step_factor >= 2.0 && !allow_unsafe_step) throw ParameterError("step factor must lie in (0, 2)");
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
    if (max_total_iters == 0) throw ParameterError("iteration budget must be positive");
  }
};

struct StageTrace {
  double mu = 0.0;
  std::size_t iters = 0;
  std::size_t deletions = 0;
  std::size_t merges = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  // Filled only when SolveParams::record_objective is set. objective_path[0]
  // is the smoothed objective at the stage's starting point;
  // assignment_stable[t] tells whether iterate t+1 kept iterate t's
  // clustering (same k, same owners).
  std::vector<double> objective_path;
  std::vector<bool> assignment_stable;

  bool operator==(const StageTrace&) const = default;
};

/// One accepted merge, with the penalized objective f_F + lambda_k * k
/// before and after.
struct MergeEvent {
  std::size_t iteration = 0;
  std::size_t k_before = 0;
  double penalized_before = 0.0;
  double penalized_after = 0.0;

  bool operator==(const MergeEvent&) const = default;
};

inline constexpr const char* kRngTag = "xoshiro256**+splitmix64/v1";

struct SolveReport {
  CenterConfig centers;
  Assignment assignment;
  double objective_raw = 0.0;
  std::size_t k_init = 0;
  std::size_t k_final = 0;
  double wall_time_s = 0.0;
  std::vector<StageTrace> stages;
  std::vector<MergeEvent> merges;
  bool converged = false;
  std::uint64_t seed = 0;
  std::string rng = kRngTag;
  // Purity against ground-truth labels; filled by callers that have them.
  std::optional<double> acc;

  [[nodiscard]] std::size_t total_iters() const {
    std::size_t t = 0;
    for (const auto& s : stages) t += s.iters;
    return t;
  }

  // Wall time is excluded: two runs of the same solve compare equal.
  bool operator==(const SolveReport& o) const {
    return centers == o.centers && assignment == o.assignment && objective_raw == o.objective_raw &&
           k_init == o.k_init && k_final == o.k_final && stages == o.stages && merges == o.merges &&
           converged == o.converged && seed == o.seed && rng == o.rng && acc == o.acc;
  }
};

inline CenterConfig gradient_step(GaugeKind kind, const CenterConfig& centers, const Dataset& data, double mu,
                                  double alpha) {
  if (alpha < 0.0) throw ParameterError("step size must be nonnegative");
  const CenterConfig grad = envelope_gradient(kind, centers, data, mu);
  CenterConfig out = centers;
  auto& x = out.blocks().flat();
  const auto& g = grad.blocks().flat();
  for (std::size_t j = 0; j < x.size(); ++j) x[j] -= alpha * g[j];
  return out;
}

/// Removes blocks that own no point, keeping the survivors in order and
/// remapping owners. Returns the number of removed blocks.
inline std::size_t delete_empty_clusters(CenterConfig& centers, Assignment& assignment) {
  const std::size_t k = centers.k();
  std::vector<std::size_t> remap(k);
  std::size_t kept = 0;
  for (std::size_t l = 0; l < k; ++l) {
    remap[l] = kept;
    if (assignment.cluster_sizes[l] > 0) ++kept;
  }
  if (kept == k) return 0;
  if (kept == 0) throw InvalidInput("every cluster is empty");

  PointSet blocks;
  std::vector<std::size_t> sizes;
  sizes.reserve(kept);
  for (std::size_t l = 0; l < k; ++l) {
    if (assignment.cluster_sizes[l] == 0) continue;
    blocks.push_back(centers[l]);
    sizes.push_back(assignment.cluster_sizes[l]);
  }
  for (auto& o : assignment.owner) o = remap[o];
  assignment.cluster_sizes = std::move(sizes);
  centers = CenterConfig(std::move(blocks));
  return k - kept;
}

namespace detail {

/// Mutable state threaded through the iteration loop.
struct IterState {
  CenterConfig centers;
  Assignment assignment;
  std::size_t global_iter = 0;  // iterations completed across all stages
};

/// Called after the gradient step, reassignment and deletion of each
/// iteration. Returns the number of accepted merges so the loop knows the
/// clustering changed.
using PostIterationHook = std::function<std::size_t(IterState&)>;

inline StageTrace run_stage(GaugeKind kind, const Dataset& data, IterState& st, double mu, const SolveParams& params,
                            std::size_t budget, const PostIterationHook& hook) {
  StageTrace trace;
  trace.mu = mu;
  const double alpha = params.step_factor * mu / static_cast<double>(data.m());

  if (params.record_objective) trace.objective_path.push_back(envelope_objective(kind, st.centers, data, mu));

  while (true) {
    const CenterConfig grad = envelope_gradient(kind, st.centers, data, mu, st.assignment);
    const double gnorm = grad.flat_norm();
    trace.final_grad_norm = gnorm;
    if (gnorm <= params.epsilon * (st.centers.flat_norm() + 1.0)) {
      trace.converged = true;
      break;
    }
    if (trace.iters >= budget) break;

    auto& x = st.centers.blocks().flat();
    const auto& g = grad.blocks().flat();
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= alpha * g[j];

    Assignment next = assign_all(kind, st.centers, data);
    bool stable = next.owner == st.assignment.owner;
    st.assignment = std::move(next);
    const std::size_t removed = delete_empty_clusters(st.centers, st.assignment);
    trace.deletions += removed;
    stable = stable && removed == 0;

    ++trace.iters;
    ++st.global_iter;
    if (hook) {
      const std::size_t merged = hook(st);
      trace.merges += merged;
      stable = stable && merged == 0;
    }

    if (params.record_objective) {
      trace.objective_path.push_back(envelope_objective(kind, st.centers, data, mu));
      trace.assignment_stable.push_back(stable);
    }
  }
  return trace;
}

inline IterState initial_state(GaugeKind kind, const Dataset& data, const CenterConfig& init) {
  if (init.k() == 0) throw ParameterError("initial configuration has no centers");
  if (init.n() != data.n()) throw InvalidInput("center dimension does not match the dataset");
  IterState st{init, assign_all(kind, init, data), 0};
  return st;
}

inline SolveReport run_continuation(GaugeKind kind, const Dataset& data, const CenterConfig& init,
                                    const SolveParams& params, const PostIterationHook& hook) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();

  IterState st = initial_state(kind, data, init);
  SolveReport report;
  report.k_init = init.k();
  report.seed = params.seed;
  // Points sharing a center position leave duplicate blocks empty from the
  // start; they are dropped like any other empty cluster.
  const std::size_t initial_removed = delete_empty_clusters(st.centers, st.assignment);

  for (double mu : params.mu_schedule) {
    const std::size_t remaining = params.max_total_iters - st.global_iter;
    report.stages.push_back(run_stage(kind, data, st, mu, params, remaining, hook));
  }
  if (!report.stages.empty()) report.stages.front().deletions += initial_removed;

  report.converged = report.stages.back().converged;
  report.objective_raw = objective_raw(kind, st.centers, data);
  report.k_final = st.centers.k();
  report.centers = std::move(st.centers);
  report.assignment = std::move(st.assignment);
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_time_s = std::round(std::chrono::duration<double>(t1 - t0).count() * 1000.0) / 1000.0;
  return report;
}

}  // namespace detail

/// A single fixed-mu stage: gradient step, reassign, delete empty clusters,
/// until ||grad|| <= epsilon (||x|| + 1) or `budget` iterations.
inline std::pair<CenterConfig, StageTrace> solve_fixed_stage(GaugeKind kind, const Dataset& data,
                                                             const CenterConfig& centers, double mu,
                                                             const SolveParams& params, std::size_t budget) {
  detail::require_positive_mu(mu);
  detail::IterState st = detail::initial_state(kind, data, centers);
  const std::size_t removed = delete_empty_clusters(st.centers, st.assignment);
  StageTrace trace = detail::run_stage(kind, data, st, mu, params, budget, {});
  trace.deletions += removed;
  return {std::move(st.centers), std::move(trace)};
}

inline std::pair<CenterConfig, StageTrace> solve_fixed_stage(GaugeKind kind, const Dataset& data,
                                                             const CenterConfig& centers, double mu,
                                                             const SolveParams& params) {
  return solve_fixed_stage(kind, data, centers, mu, params, params.max_total_iters);
}

inline SolveReport solve_fixed(GaugeKind kind, const Dataset& data, const CenterConfig& init,
                               const SolveParams& params) {
  return detail::run_continuation(kind, data, init, params, {});
}

}  // namespace gmwp
