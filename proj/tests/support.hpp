#pragma once

// Instance generators shared by the unit and acceptance suites.

#include <algorithm>
#include <limits>

#include "gmwp/data.hpp"
#include "gmwp/envelope.hpp"

namespace gmwp::testing {

inline constexpr GaugeKind kAllKinds[] = {GaugeKind::L1, GaugeKind::L2, GaugeKind::LInf};

inline Vector random_vector(Rng& rng, std::size_t n, double scale = 3.0) {
  Vector v(n);
  for (double& c : v) c = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

inline PointSet random_points(Rng& rng, std::size_t count, std::size_t n, double scale = 3.0) {
  PointSet p(count, n);
  for (double& c : p.flat()) c = scale * (2.0 * rng.uniform() - 1.0);
  return p;
}

/// Gap between the smallest and second-smallest gauge distance from a to
/// the centers (infinity when k = 1).
inline double assignment_margin(GaugeKind kind, const CenterConfig& centers, ConstView a) {
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  for (std::size_t l = 0; l < centers.k(); ++l) {
    const double d = gauge_distance(kind, centers[l], a);
    if (d < best) {
      second = best;
      best = d;
    } else if (d < second) {
      second = d;
    }
  }
  return second - best;
}

/// No assignment tie within `tie_margin`, and every active gauge distance
/// outside [mu/2, 2 mu] so finite differences stay clear of prox breakpoints.
inline bool nondegenerate(GaugeKind kind, const CenterConfig& centers, const Dataset& data, double mu,
                          double tie_margin = 1e-3) {
  for (std::size_t i = 0; i < data.m(); ++i) {
    if (assignment_margin(kind, centers, data[i]) < tie_margin) return false;
    const double d = nearest_center(kind, centers, data[i]).distance;
    if (d >= 0.5 * mu && d <= 2.0 * mu) return false;
  }
  return true;
}

struct GradientInstance {
  GaugeKind kind;
  CenterConfig centers;
  Dataset data;
  double mu;
};

/// Random 2-D instance with m <= 20 points and k <= 4 centers that passes
/// the non-degeneracy filter.
inline GradientInstance random_gradient_instance(Rng& rng, GaugeKind kind) {
  while (true) {
    const std::size_t m = 2 + rng.below(19);
    const std::size_t k = 1 + rng.below(4);
    const double mu = 0.1 + 0.9 * rng.uniform();
    Dataset data(random_points(rng, m, 2));
    CenterConfig centers(random_points(rng, k, 2));
    if (nondegenerate(kind, centers, data, mu)) return {kind, std::move(centers), std::move(data), mu};
  }
}

inline double relative_error(const CenterConfig& got, const CenterConfig& want) {
  double diff = 0.0;
  double norm = 0.0;
  const auto& g = got.blocks().flat();
  const auto& w = want.blocks().flat();
  for (std::size_t j = 0; j < g.size(); ++j) {
    diff += (g[j] - w[j]) * (g[j] - w[j]);
    norm += w[j] * w[j];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1.0);
}

/// Gaussian blobs around well-separated means; returns points in blob order.
inline Dataset blobs(Rng& rng, const std::vector<Vector>& means, std::size_t per_blob, double std_dev) {
  PointSet pts;
  for (const auto& mu : means)
    for (std::size_t p = 0; p < per_blob; ++p) {
      Vector x(mu);
      for (double& c : x) c += std_dev * rng.normal();
      pts.push_back(x);
    }
  return Dataset(std::move(pts));
}

}  // namespace gmwp::testing
