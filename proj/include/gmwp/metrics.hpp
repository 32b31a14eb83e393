#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gmwp/types.hpp"

namespace gmwp {

struct RunSummary {
  std::size_t run_id = 0;
  double acc = 0.0;
  double objective_raw = 0.0;
  std::size_t k_final = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const RunSummary&) const = default;
};

namespace detail {

// counts[c][l] = number of points in predicted cluster c with true label l.
inline std::vector<std::vector<std::size_t>> contingency(const std::vector<std::size_t>& predicted,
                                                         std::span<const std::size_t> truth) {
  if (predicted.size() != truth.size()) throw InvalidInput("prediction and label lengths differ");
  if (predicted.empty()) throw InvalidInput("accuracy of an empty labeling");
  std::size_t k = 0;
  std::size_t classes = 0;
  for (auto c : predicted) k = std::max(k, c + 1);
  for (auto l : truth) classes = std::max(classes, l + 1);
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) ++counts[predicted[i]][truth[i]];
  return counts;
}

}  // namespace detail

/// Purity: every predicted cluster votes for its most frequent true label
/// (smaller label on ties); the score is the fraction of points whose vote
/// matches their label. Several clusters may map to the same label.
inline double accuracy(const Assignment& predicted, std::span<const std::size_t> truth) {
  const auto counts = detail::contingency(predicted.owner, truth);
  std::size_t correct = 0;
  for (const auto& row : counts) {
    std::size_t best = 0;
    for (std::size_t l = 0; l < row.size(); ++l)
      if (row[l] > row[best]) best = l;
    if (!row.empty()) correct += row[best];
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

/// One-to-one matching accuracy (Hungarian assignment of clusters to
/// labels). Diagnostic only; clusters beyond the label count score zero.
inline double accuracy_one_to_one(const Assignment& predicted, std::span<const std::size_t> truth) {
  const auto counts = detail::contingency(predicted.owner, truth);
  const std::size_t rows = counts.size();
  const std::size_t cols = counts.empty() ? 0 : counts.front().size();
  const std::size_t n = std::max(rows, cols);

  // Minimization form on a square matrix, 1-based potentials.
  auto cost = [&](std::size_t r, std::size_t c) -> double {
    if (r >= rows || c >= cols) return 0.0;
    return -static_cast<double>(counts[r][c]);
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t r = 1; r <= n; ++r) {
    match[0] = r;
    std::size_t col = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col] = true;
      const std::size_t row = match[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(row - 1, c - 1) - u[row] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          next = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col = next;
    } while (match[col] != 0);
    do {
      const std::size_t prev = way[col];
      match[col] = match[prev];
      col = prev;
    } while (col != 0);
  }
  double correct = 0.0;
  for (std::size_t c = 1; c <= n; ++c)
    if (match[c] != 0) correct -= cost(match[c] - 1, c - 1);
  return correct / static_cast<double>(truth.size());
}

/// Run with the smallest raw objective; ties go to the smaller run_id.
inline RunSummary best_of(std::span<const RunSummary> runs) {
  if (runs.empty()) throw InvalidInput("best_of over no runs");
  const RunSummary* best = &runs.front();
  for (const auto& r : runs)
    if (r.objective_raw < best->objective_raw ||
        (r.objective_raw == best->objective_raw && r.run_id < best->run_id))
      best = &r;
  return *best;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

struct RunAggregate {
  MeanStd acc, objective_raw, k_final, wall_time_s;
};

inline RunAggregate aggregate(std::span<const RunSummary> runs) {
  if (runs.empty()) throw InvalidInput("aggregate over no runs");
  auto stat = [&](auto field) {
    double s = 0.0;
    for (const auto& r : runs) s += field(r);
    const double mean = s / static_cast<double>(runs.size());
    double v = 0.0;
    for (const auto& r : runs) v += (field(r) - mean) * (field(r) - mean);
    return MeanStd{mean, std::sqrt(v / static_cast<double>(runs.size()))};
  };
  RunAggregate a;
  a.acc = stat([](const RunSummary& r) { return r.acc; });
  a.objective_raw = stat([](const RunSummary& r) { return r.objective_raw; });
  a.k_final = stat([](const RunSummary& r) { return static_cast<double>(r.k_final); });
  a.wall_time_s = stat([](const RunSummary& r) { return r.wall_time_s; });
  return a;
}

}  // namespace gmwp
