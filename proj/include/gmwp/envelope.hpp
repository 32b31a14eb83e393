#pragma once

// Per-point terms phi_i(x) = min_l rho_F(x^l - a^i), the raw objective
// f_F = sum_i phi_i, and the Moreau-smoothed objective with its gradient.
//
// The smoothed term of a^i is evaluated on its active block only: the
// center nearest to a^i in gauge distance (smallest index on ties). All
// sums run over i in ascending order so results are bit-deterministic.

#include <limits>

#include "gmwp/gauge.hpp"
#include "gmwp/types.hpp"

namespace gmwp {

struct NearestCenter {
  std::size_t index = 0;
  double distance = 0.0;
};

inline NearestCenter nearest_center(GaugeKind kind, const CenterConfig& centers, ConstView a) {
  if (centers.k() == 0) throw InvalidInput("nearest center requested with no centers");
  NearestCenter best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t l = 0; l < centers.k(); ++l) {
    const double d = gauge_distance(kind, centers[l], a);
    if (d < best.distance) best = {l, d};
  }
  return best;
}

inline Assignment assign_all(GaugeKind kind, const CenterConfig& centers, const Dataset& data) {
  Assignment out;
  out.owner.resize(data.m());
  out.cluster_sizes.assign(centers.k(), 0);
  for (std::size_t i = 0; i < data.m(); ++i) {
    const auto nc = nearest_center(kind, centers, data[i]);
    out.owner[i] = nc.index;
    ++out.cluster_sizes[nc.index];
  }
  return out;
}

inline double objective_raw(GaugeKind kind, const CenterConfig& centers, const Dataset& data) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.m(); ++i) total += nearest_center(kind, centers, data[i]).distance;
  return total;
}

struct EnvelopeComponent {
  double value = 0.0;
  std::size_t active = 0;
  Vector prox_block;
};

namespace detail {

// Envelope value of rho_F(. - a) at z, given its prox p.
inline double envelope_at(GaugeKind kind, ConstView a, ConstView z, ConstView p, double mu) {
  return gauge_distance(kind, p, a) + squared_distance(p, z) / (2.0 * mu);
}

}  // namespace detail

/// phi_i^mu evaluated through the active block of `a`.
inline EnvelopeComponent envelope_component(GaugeKind kind, const CenterConfig& centers, ConstView a, double mu) {
  detail::require_positive_mu(mu);
  EnvelopeComponent out;
  out.active = nearest_center(kind, centers, a).index;
  const ConstView z = centers[out.active];
  out.prox_block = prox_distance(kind, a, z, mu);
  out.value = detail::envelope_at(kind, a, z, out.prox_block, mu);
  return out;
}

inline double envelope_objective(GaugeKind kind, const CenterConfig& centers, const Dataset& data, double mu) {
  detail::require_positive_mu(mu);
  Vector prox(data.n());
  double total = 0.0;
  for (std::size_t i = 0; i < data.m(); ++i) {
    const std::size_t l = nearest_center(kind, centers, data[i]).index;
    prox_distance_into(kind, data[i], centers[l], mu, prox);
    total += detail::envelope_at(kind, data[i], centers[l], prox, mu);
  }
  return total;
}

/// Gradient of the smoothed objective using a precomputed assignment as the
/// active-block map. `assignment` must be the nearest-center assignment of
/// `centers`.
inline CenterConfig envelope_gradient(GaugeKind kind, const CenterConfig& centers, const Dataset& data, double mu,
                                      const Assignment& assignment) {
  detail::require_positive_mu(mu);
  CenterConfig grad(PointSet(centers.k(), centers.n()));
  Vector prox(data.n());
  for (std::size_t i = 0; i < data.m(); ++i) {
    const std::size_t l = assignment.owner[i];
    const ConstView z = centers[l];
    prox_distance_into(kind, data[i], z, mu, prox);
    MutView g = grad[l];
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += z[j] - prox[j];
  }
  for (double& c : grad.blocks().flat()) c /= mu;
  return grad;
}

inline CenterConfig envelope_gradient(GaugeKind kind, const CenterConfig& centers, const Dataset& data, double mu) {
  return envelope_gradient(kind, centers, data, mu, assign_all(kind, centers, data));
}

}  // namespace gmwp
