#pragma once

// Adaptive cluster count: the fixed-k dynamics plus a periodic merge step.
// Every t_merge iterations, pairs of centers closer than a lower quantile
// of all pairwise center distances are merged when the penalized objective
// f_F(x) + lambda_k * k does not increase.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gmwp/solver_fixed.hpp"

namespace gmwp {

struct MergeParams {
  std::size_t t_merge = 1;
  double q = 0.10;
  double lambda_k = 10.0;

  void validate() const {
    if (t_merge == 0) throw ParameterError("merge period must be positive");
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("merge quantile must lie in (0, 1)");
    if (!(lambda_k >= 0.0)) throw ParameterError("merge penalty must be nonnegative");
  }
};

/// Penalty presets by dataset complexity.
namespace lambda_presets {
inline constexpr double kLowDim = 10.0;       // synthetic, 2 features
inline constexpr double kModerateDim = 25.0;  // Iris, Glass
inline constexpr double kHighDim = 50.0;      // Wine
}  // namespace lambda_presets

/// Euclidean distances between centers, pairs (i, j) with i < j in
/// lexicographic order.
inline std::vector<double> pairwise_center_distances(const CenterConfig& centers) {
  std::vector<double> out;
  const std::size_t k = centers.k();
  if (k < 2) return out;
  out.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) out.push_back(detail::euclidean_distance(centers[i], centers[j]));
  return out;
}

/// Nearest-rank lower quantile: the element at index ceil(q P) - 1 of the
/// sorted distances.
inline double merge_threshold(std::vector<double> distances, double q) {
  if (distances.empty()) throw InvalidInput("merge threshold of an empty distance list");
  std::sort(distances.begin(), distances.end());
  const double count = static_cast<double>(distances.size());
  // q * P is rounded away from spurious ulps (0.1 * 30 = 3.0000000000000004).
  const double rank = std::ceil(q * count - 1e-9);
  const double clamped = std::clamp(rank - 1.0, 0.0, count - 1.0);
  return distances[static_cast<std::size_t>(clamped)];
}

inline Vector merged_center(GaugeKind kind, const PointSet& points_union) {
  return center_representative(kind, points_union);
}

/// Memoizes merged centers by the member indices of the union, so repeated
/// merge attempts on an unchanged clustering cost no Weiszfeld solves.
class MergedCenterCache {
 public:
  const Vector& get(GaugeKind kind, const Dataset& data, const std::vector<std::size_t>& members) {
    auto it = cache_.find(members);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= kMaxEntries) cache_.clear();
    PointSet pts;
    for (std::size_t i : members) pts.push_back(data[i]);
    return cache_.emplace(members, merged_center(kind, pts)).first->second;
  }

 private:
  static constexpr std::size_t kMaxEntries = 4096;
  std::map<std::vector<std::size_t>, Vector> cache_;
};

struct MergeOutcome {
  std::size_t accepted = 0;
  std::vector<MergeEvent> events;
};

/// Merge cascade against a fixed threshold `delta`. Pairs are scanned in
/// lexicographic order; after an acceptance the points are reassigned,
/// clusters left empty are dropped, and the scan restarts on the updated
/// centers. Stops once a full scan accepts nothing.
inline MergeOutcome attempt_merges(GaugeKind kind, CenterConfig& centers, Assignment& assignment, const Dataset& data,
                                   const MergeParams& mp, double delta, MergedCenterCache& cache,
                                   std::size_t iteration = 0) {
  if (delta < 0.0) throw ParameterError("merge threshold must be nonnegative");
  MergeOutcome out;
  double f = objective_raw(kind, centers, data);

  bool accepted = true;
  while (accepted && centers.k() > 1) {
    accepted = false;
    const std::size_t k = centers.k();
    for (std::size_t i = 0; i < k && !accepted; ++i) {
      for (std::size_t j = i + 1; j < k && !accepted; ++j) {
        if (detail::euclidean_distance(centers[i], centers[j]) > delta) continue;

        std::vector<std::size_t> members;
        for (std::size_t p = 0; p < data.m(); ++p)
          if (assignment.owner[p] == i || assignment.owner[p] == j) members.push_back(p);
        if (members.empty()) continue;

        const Vector& merged = cache.get(kind, data, members);
        CenterConfig candidate = centers;
        std::copy(merged.begin(), merged.end(), candidate[i].begin());
        candidate.blocks().erase(j);

        const double f_candidate = objective_raw(kind, candidate, data);
        const double kd = static_cast<double>(k);
        const double before = f + mp.lambda_k * kd;
        const double after = f_candidate + mp.lambda_k * (kd - 1.0);
        if (!(after <= before)) continue;

        centers = std::move(candidate);
        assignment = assign_all(kind, centers, data);
        delete_empty_clusters(centers, assignment);
        f = objective_raw(kind, centers, data);
        const double penalized = f + mp.lambda_k * static_cast<double>(centers.k());
        out.events.push_back({iteration, k, before, penalized});
        ++out.accepted;
        accepted = true;
      }
    }
  }
  return out;
}

inline MergeOutcome attempt_merges(GaugeKind kind, CenterConfig& centers, Assignment& assignment, const Dataset& data,
                                   const MergeParams& mp, double delta) {
  MergedCenterCache cache;
  return attempt_merges(kind, centers, assignment, data, mp, delta, cache);
}

inline SolveReport solve_adaptive(GaugeKind kind, const Dataset& data, const CenterConfig& init,
                                  const SolveParams& params, const MergeParams& mp) {
  mp.validate();
  MergedCenterCache cache;
  std::vector<MergeEvent> events;
  const detail::PostIterationHook hook = [&](detail::IterState& st) -> std::size_t {
    // Iterations are counted from 1 here, so a period longer than the
    // budget never triggers a merge.
    if (st.global_iter % mp.t_merge != 0 || st.centers.k() < 2) return 0;
    const double delta = merge_threshold(pairwise_center_distances(st.centers), mp.q);
    MergeOutcome res = attempt_merges(kind, st.centers, st.assignment, data, mp, delta, cache, st.global_iter);
    events.insert(events.end(), res.events.begin(), res.events.end());
    return res.accepted;
  };
  SolveReport report = detail::run_continuation(kind, data, init, params, hook);
  report.merges = std::move(events);
  return report;
}

}  // namespace gmwp
