#pragma once

// Minkowski gauges of the l1, l2 and l-infinity unit balls, their duals,
// the proximal operators of the gauge distance y -> rho_F(y - a), and the
// norm-specific center representatives used when clusters are merged.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmwp/types.hpp"

namespace gmwp {

enum class GaugeKind { L1, L2, LInf };

inline std::string_view to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::L1: return "l1";
    case GaugeKind::L2: return "l2";
    case GaugeKind::LInf: return "linf";
  }
  return "?";
}

inline std::optional<GaugeKind> parse_gauge(std::string_view s) {
  if (s == "l1") return GaugeKind::L1;
  if (s == "l2") return GaugeKind::L2;
  if (s == "linf") return GaugeKind::LInf;
  return std::nullopt;
}

namespace detail {

inline double l1(ConstView v) {
  double s = 0.0;
  for (double c : v) s += std::abs(c);
  return s;
}

inline double l2(ConstView v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  if (s > 1e-280 && s < 1e280) return std::sqrt(s);
  // Rescale when the plain sum of squares under- or overflows.
  double scale = 0.0;
  for (double c : v) scale = std::max(scale, std::abs(c));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  s = 0.0;
  for (double c : v) s += (c / scale) * (c / scale);
  return scale * std::sqrt(s);
}

inline double linf(ConstView v) {
  double s = 0.0;
  for (double c : v) s = std::max(s, std::abs(c));
  return s;
}

inline double norm(GaugeKind kind, ConstView v) {
  switch (kind) {
    case GaugeKind::L1: return l1(v);
    case GaugeKind::L2: return l2(v);
    case GaugeKind::LInf: return linf(v);
  }
  return 0.0;
}

inline void require_nonempty(ConstView v) {
  if (v.empty()) throw InvalidInput("gauge of a zero-dimensional vector");
}

inline void require_positive_mu(double mu) {
  if (!(mu > 0.0)) throw ParameterError("smoothing parameter mu must be positive, got " + std::to_string(mu));
}

}  // namespace detail

/// rho_F(v) for the unit ball F selected by `kind`.
inline double gauge_value(GaugeKind kind, ConstView v) {
  detail::require_nonempty(v);
  return detail::norm(kind, v);
}

/// Support function of F, i.e. the gauge of the polar set F°.
inline double dual_gauge_value(GaugeKind kind, ConstView v) {
  detail::require_nonempty(v);
  switch (kind) {
    case GaugeKind::L1: return detail::linf(v);
    case GaugeKind::L2: return detail::l2(v);
    case GaugeKind::LInf: return detail::l1(v);
  }
  return 0.0;
}

/// rho_F(x - a) without materializing the difference.
inline double gauge_distance(GaugeKind kind, ConstView x, ConstView a) {
  double acc = 0.0;
  switch (kind) {
    case GaugeKind::L1:
      for (std::size_t j = 0; j < x.size(); ++j) acc += std::abs(x[j] - a[j]);
      return acc;
    case GaugeKind::L2:
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - a[j];
        acc += d * d;
      }
      return std::sqrt(acc);
    case GaugeKind::LInf:
      for (std::size_t j = 0; j < x.size(); ++j) acc = std::max(acc, std::abs(x[j] - a[j]));
      return acc;
  }
  return acc;
}

/// Largest Euclidean norm of a point of F (||F||).
inline double ball_radius(GaugeKind kind, std::size_t n) {
  return kind == GaugeKind::LInf ? std::sqrt(static_cast<double>(n)) : 1.0;
}

/// Largest Euclidean norm of a point of the polar set (||F°||), which is
/// also the Lipschitz constant of rho_F.
inline double polar_radius(GaugeKind kind, std::size_t n) {
  return kind == GaugeKind::L1 ? std::sqrt(static_cast<double>(n)) : 1.0;
}

inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

/// Euclidean projection onto {u : ||u||_1 <= radius} by sorting the
/// magnitudes and locating the exact threshold.
inline Vector project_l1_ball(ConstView v, double radius) {
  if (!(radius > 0.0)) throw ParameterError("l1-ball radius must be positive");
  Vector out(v.begin(), v.end());
  if (detail::l1(v) <= radius) return out;

  std::vector<double> mags(v.size());
  std::transform(v.begin(), v.end(), mags.begin(), [](double c) { return std::abs(c); });
  std::sort(mags.begin(), mags.end(), std::greater<>());

  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumsum += mags[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (mags[j] - candidate > 0.0) theta = candidate;
  }
  for (double& c : out) c = std::copysign(std::max(std::abs(c) - theta, 0.0), c);
  return out;
}

/// Writes argmin_y rho_F(y - a) + ||y - z||^2 / (2 mu) into `out`.
///
/// The l-infinity case uses the Moreau decomposition: the prox of the
/// l-infinity norm is the identity minus the projection onto the l1 ball
/// of radius mu.
inline void prox_distance_into(GaugeKind kind, ConstView a, ConstView z, double mu, MutView out) {
  detail::require_positive_mu(mu);
  detail::require_same_dim(a, z);
  const std::size_t n = a.size();
  switch (kind) {
    case GaugeKind::L1:
      for (std::size_t j = 0; j < n; ++j) out[j] = a[j] + soft_threshold(z[j] - a[j], mu);
      return;
    case GaugeKind::L2: {
      const double r = detail::euclidean_distance(z, a);
      const double shrink = r > mu ? 1.0 - mu / r : 0.0;
      for (std::size_t j = 0; j < n; ++j) out[j] = a[j] + shrink * (z[j] - a[j]);
      return;
    }
    case GaugeKind::LInf: {
      Vector r(n);
      for (std::size_t j = 0; j < n; ++j) r[j] = z[j] - a[j];
      const Vector p = project_l1_ball(r, mu);
      for (std::size_t j = 0; j < n; ++j) out[j] = a[j] + r[j] - p[j];
      return;
    }
  }
}

inline Vector prox_distance(GaugeKind kind, ConstView a, ConstView z, double mu) {
  Vector out(a.size());
  prox_distance_into(kind, a, z, mu, out);
  return out;
}

/// Weiszfeld iteration for argmin_x sum_p ||x - a^p||_2, started from the
/// mean. When an iterate lands on a data point the subgradient test decides
/// whether that point is optimal; otherwise the iterate is pushed off it
/// along the descent direction by `tol`.
inline Vector geometric_median(const PointSet& points, double tol = 1e-9, std::size_t max_iter = 1000) {
  if (points.size() == 0) throw InvalidInput("geometric median of an empty point set");
  const std::size_t m = points.size();
  const std::size_t n = points.dim();

  Vector x(n, 0.0);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t j = 0; j < n; ++j) x[j] += points[p][j];
  for (double& c : x) c /= static_cast<double>(m);
  if (m == 1) return x;

  // Vardi-Zhang step: points within tol of x are treated as coincident.
  // With multiplicity eta and residual pull r of the others, x is optimal
  // when r <= eta; otherwise the step blends the Weiszfeld map of the
  // remaining points with x.
  Vector num(n);
  Vector pull(n);
  Vector next(n);
  bool settled = false;
  for (std::size_t iter = 0; iter <= max_iter; ++iter) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(pull.begin(), pull.end(), 0.0);
    double denom = 0.0;
    double eta = 0.0;
    std::optional<std::size_t> anchor;
    for (std::size_t p = 0; p < m; ++p) {
      const double d = detail::euclidean_distance(x, points[p]);
      if (d < tol) {
        eta += 1.0;
        if (!anchor) anchor = p;
        continue;
      }
      denom += 1.0 / d;
      for (std::size_t j = 0; j < n; ++j) {
        num[j] += points[p][j] / d;
        pull[j] += (points[p][j] - x[j]) / d;
      }
    }
    if (denom == 0.0) return {points[*anchor].begin(), points[*anchor].end()};
    const double r = detail::l2(pull);
    if (anchor && r <= eta) return {points[*anchor].begin(), points[*anchor].end()};
    // One extra pass after the last step so a limit sitting on a data point
    // snaps to it.
    if (settled || iter == max_iter) break;

    const double keep = anchor ? eta / r : 0.0;
    for (std::size_t j = 0; j < n; ++j) next[j] = (1.0 - keep) * (num[j] / denom) + keep * x[j];
    const double step = detail::euclidean_distance(x, next);
    x.swap(next);
    settled = step <= tol;
  }
  return x;
}

/// Merged-cluster center: componentwise lower median (l1) and geometric
/// median (l2) minimize sum_p rho_F(x - a^p); the componentwise midrange
/// (l-infinity) only minimizes the largest distance.
inline Vector center_representative(GaugeKind kind, const PointSet& points) {
  if (points.size() == 0) throw InvalidInput("center representative of an empty point set");
  const std::size_t m = points.size();
  const std::size_t n = points.dim();
  Vector out(n);
  switch (kind) {
    case GaugeKind::L1: {
      std::vector<double> col(m);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t p = 0; p < m; ++p) col[p] = points[p][j];
        auto mid = col.begin() + static_cast<std::ptrdiff_t>((m - 1) / 2);
        std::nth_element(col.begin(), mid, col.end());
        out[j] = *mid;
      }
      return out;
    }
    case GaugeKind::L2:
      return geometric_median(points);
    case GaugeKind::LInf: {
      for (std::size_t j = 0; j < n; ++j) {
        double lo = points[0][j];
        double hi = lo;
        for (std::size_t p = 1; p < m; ++p) {
          lo = std::min(lo, points[p][j]);
          hi = std::max(hi, points[p][j]);
        }
        out[j] = 0.5 * (lo + hi);
      }
      return out;
    }
  }
  return out;
}

}  // namespace gmwp
