#pragma once

// Independent oracles used to check the closed-form operators: grid
// minimization with nested refinement, central finite differences, the
// exact per-block envelope selection, and the gauge/support-function
// definitions evaluated by bisection and sampling. None of these call the
// closed-form prox or gradient code they are meant to check.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "gmwp/envelope.hpp"
#include "gmwp/gauge.hpp"

namespace gmwp::verify {

struct OracleConfig {
  std::size_t grid_resolution = 50;  // points per axis per pass
  std::size_t passes = 4;
  double fd_step = 1e-5;
  double tolerance = 1e-4;
};

struct GridResult {
  Vector argmin;
  double value = std::numeric_limits<double>::infinity();
};

/// Minimizes `f` over the box center +- half_width (per axis) in at most 3
/// dimensions. Each pass evaluates a full tensor grid and re-centers a box
/// of two cells around the best point. Reliable for smooth objectives; a
/// kink that is not grid-aligned can pull the answer off by ~sqrt(cell).
inline GridResult grid_minimize(const std::function<double(ConstView)>& f, ConstView center, ConstView half_width,
                                const OracleConfig& cfg = {}) {
  const std::size_t n = center.size();
  if (n == 0 || n > 3) throw InvalidInput("grid oracle supports 1 to 3 dimensions");
  const std::size_t res = std::max<std::size_t>(cfg.grid_resolution, 2);

  Vector c(center.begin(), center.end());
  Vector h(half_width.begin(), half_width.end());
  GridResult best;
  Vector y(n);
  for (std::size_t pass = 0; pass < cfg.passes; ++pass) {
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= res;
    GridResult pass_best;
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t idx = rem % res;
        rem /= res;
        y[j] = c[j] - h[j] + 2.0 * h[j] * static_cast<double>(idx) / static_cast<double>(res - 1);
      }
      const double v = f(y);
      if (v < pass_best.value) pass_best = {y, v};
    }
    if (pass_best.value < best.value) best = pass_best;
    c = best.argmin;
    for (double& hj : h) hj = 2.0 * (2.0 * hj / static_cast<double>(res - 1));
  }
  return best;
}

/// Minimizes a convex `f` over the box center +- half_width by nested
/// golden-section search: coordinate j is searched with every later
/// coordinate minimized out, which keeps each 1-D problem convex, so kinks
/// do not mislead it the way grid refinement can. Cost is iters^n.
inline GridResult nested_convex_minimize(const std::function<double(ConstView)>& f, ConstView center,
                                         ConstView half_width, std::size_t iters = 64) {
  const std::size_t n = center.size();
  if (n == 0 || n > 3) throw InvalidInput("nested oracle supports 1 to 3 dimensions");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  Vector y(center.begin(), center.end());

  // Returns min over coordinates j.. with y[0..j) fixed; leaves the argmin
  // of those coordinates in y.
  std::function<double(std::size_t)> solve = [&](std::size_t j) -> double {
    if (j == n) return f(y);
    double lo = center[j] - half_width[j];
    double hi = center[j] + half_width[j];
    auto eval = [&](double t) {
      y[j] = t;
      return solve(j + 1);
    };
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (std::size_t it = 0; it < iters; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = eval(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = eval(x2);
      }
    }
    // Re-evaluate at the midpoint so y holds a consistent argmin.
    return eval(0.5 * (lo + hi));
  };
  GridResult out;
  out.value = solve(0);
  out.argmin = y;
  return out;
}

/// argmin_y rho_F(y - a) + ||y - z||^2 / (2 mu) by nested convex search.
/// The minimizer lies within mu * ||F°|| of z, which bounds the search box.
inline Vector brute_prox(GaugeKind kind, ConstView a, ConstView z, double mu) {
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  const std::size_t n = a.size();
  const double reach = 1.05 * mu * polar_radius(kind, n) + 1e-12;
  const Vector half(n, reach);
  Vector d(n);
  auto objective = [&](ConstView y) {
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = y[j] - a[j];
      sq += (y[j] - z[j]) * (y[j] - z[j]);
    }
    return gauge_value(kind, d) + sq / (2.0 * mu);
  };
  return nested_convex_minimize(objective, z, half).argmin;
}

/// Value of the prox objective at y.
inline double prox_objective(GaugeKind kind, ConstView a, ConstView z, double mu, ConstView y) {
  return gauge_distance(kind, y, a) + detail::squared_distance(y, z) / (2.0 * mu);
}

/// Central differences of the smoothed objective, coordinate by coordinate.
inline CenterConfig fd_gradient(GaugeKind kind, const CenterConfig& centers, const Dataset& data, double mu,
                                double step) {
  CenterConfig grad(PointSet(centers.k(), centers.n()));
  CenterConfig probe = centers;
  auto& x = probe.blocks().flat();
  auto& g = grad.blocks().flat();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double saved = x[j];
    x[j] = saved + step;
    const double up = envelope_objective(kind, probe, data, mu);
    x[j] = saved - step;
    const double down = envelope_objective(kind, probe, data, mu);
    x[j] = saved;
    g[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

struct BlockChoice {
  std::size_t index = 0;
  double value = 0.0;
};

/// The exact prox of phi_i picks the block with the smallest per-block
/// envelope value, not the smallest gauge distance. Per-block prox values
/// come from the brute-force oracle when `use_oracle` is set.
inline BlockChoice exact_block_prox(GaugeKind kind, const CenterConfig& centers, ConstView a, double mu,
                                    bool use_oracle = false) {
  BlockChoice best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t l = 0; l < centers.k(); ++l) {
    const Vector p = use_oracle ? brute_prox(kind, a, centers[l], mu) : prox_distance(kind, a, centers[l], mu);
    const double v = prox_objective(kind, a, centers[l], mu, p);
    if (v < best.value) best = {l, v};
  }
  return best;
}

/// inf { t >= 0 : v in tF } by bisection with an explicit membership test
/// of the unit ball.
inline double gauge_by_bisection(GaugeKind kind, ConstView v, double tol = 1e-13) {
  auto member = [&](double t) {
    if (t == 0.0) {
      for (double c : v)
        if (c != 0.0) return false;
      return true;
    }
    switch (kind) {
      case GaugeKind::L1: {
        double s = 0.0;
        for (double c : v) s += std::abs(c / t);
        return s <= 1.0;
      }
      case GaugeKind::L2: {
        double s = 0.0;
        for (double c : v) s += (c / t) * (c / t);
        return s <= 1.0;
      }
      case GaugeKind::LInf:
        for (double c : v)
          if (std::abs(c / t) > 1.0) return false;
        return true;
    }
    return false;
  };
  if (member(0.0)) return 0.0;
  double hi = 1.0;
  while (!member(hi)) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// max_{u in F} <v, u>. In two dimensions the boundary of F is sampled at
/// `samples` directions; in higher dimensions the polytope balls are
/// maximized over their vertices and the l2 ball at v / ||v||.
inline double support_by_sampling(GaugeKind kind, ConstView v, std::size_t samples = 200000) {
  const std::size_t n = v.size();
  double best = 0.0;
  if (n == 2) {
    for (std::size_t s = 0; s < samples; ++s) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
      double dir[2] = {std::cos(th), std::sin(th)};
      const double scale = gauge_by_bisection(kind, dir);
      best = std::max(best, (v[0] * dir[0] + v[1] * dir[1]) / scale);
    }
    // Vertices of the polytope balls sit at multiples of pi/4 directions.
    if (kind != GaugeKind::L2) {
      const double corners[8][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
      for (const auto& c : corners) {
        if (kind == GaugeKind::L1 && std::abs(c[0]) + std::abs(c[1]) > 1.0) continue;
        best = std::max(best, v[0] * c[0] + v[1] * c[1]);
      }
    }
    return best;
  }
  switch (kind) {
    case GaugeKind::L1:
      for (double c : v) best = std::max(best, std::abs(c));
      return best;
    case GaugeKind::LInf: {
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += ((mask >> j) & 1U) ? v[j] : -v[j];
        best = std::max(best, s);
      }
      return best;
    }
    case GaugeKind::L2: {
      double sq = 0.0;
      for (double c : v) sq += c * c;
      return std::sqrt(sq);
    }
  }
  return best;
}

}  // namespace gmwp::verify
