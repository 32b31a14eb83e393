#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gmwp/data.hpp"
#include "gmwp/gauge.hpp"
#include "gmwp/verify.hpp"

using namespace gmwp;

namespace {

constexpr GaugeKind kAllKinds[] = {GaugeKind::L1, GaugeKind::L2, GaugeKind::LInf};

Vector random_vector(Rng& rng, std::size_t n, double scale = 3.0) {
  Vector v(n);
  for (double& c : v) c = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

double sum_gauge(GaugeKind kind, const PointSet& pts, ConstView x) {
  double s = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) s += gauge_distance(kind, x, pts[p]);
  return s;
}

}  // namespace

// ---- gauge_value ------------------------------------------------------------

TEST(GaugeValue, EuclideanThreeFourFive) {
  const Vector v{3, 4};
  EXPECT_NEAR(verify::gauge_by_bisection(GaugeKind::L2, v), 5.0, 1e-11);
  EXPECT_DOUBLE_EQ(gauge_value(GaugeKind::L2, v), 5.0);
}

TEST(GaugeValue, ZeroVectorHasZeroGauge) { EXPECT_EQ(gauge_value(GaugeKind::L1, Vector{0, 0}), 0.0); }

TEST(GaugeValue, MaxNorm) {
  const Vector v{2, -1};
  EXPECT_NEAR(verify::gauge_by_bisection(GaugeKind::LInf, v), 2.0, 1e-11);
  EXPECT_DOUBLE_EQ(gauge_value(GaugeKind::LInf, v), 2.0);
}

TEST(GaugeValue, ZeroDimensionIsRejected) {
  EXPECT_THROW(gauge_value(GaugeKind::L2, Vector{}), InvalidInput);
  EXPECT_THROW(dual_gauge_value(GaugeKind::L1, Vector{}), InvalidInput);
}

TEST(GaugeValue, MatchesBisectionOracle) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t)
    for (auto kind : kAllKinds) {
      const Vector v = random_vector(rng, 1 + t % 5);
      EXPECT_NEAR(gauge_value(kind, v), verify::gauge_by_bisection(kind, v), 1e-11);
    }
}

// ---- dual_gauge_value --------------------------------------------------------

TEST(DualGauge, L1BallSupport) {
  const Vector v{2, -3};
  EXPECT_NEAR(verify::support_by_sampling(GaugeKind::L1, v), 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(dual_gauge_value(GaugeKind::L1, v), 3.0);
}

TEST(DualGauge, SupportAtOrigin) { EXPECT_EQ(dual_gauge_value(GaugeKind::L2, Vector{0, 0}), 0.0); }

TEST(DualGauge, LInfBallSupport) {
  const Vector v{1, 1};
  EXPECT_NEAR(verify::support_by_sampling(GaugeKind::LInf, v), 2.0, 1e-9);
  EXPECT_DOUBLE_EQ(dual_gauge_value(GaugeKind::LInf, v), 2.0);
}

TEST(DualGauge, DualOfL1IsMaxNormAndViceVersa) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const Vector v = random_vector(rng, 1 + t % 6);
    EXPECT_EQ(dual_gauge_value(GaugeKind::L1, v), gauge_value(GaugeKind::LInf, v));
    EXPECT_EQ(dual_gauge_value(GaugeKind::LInf, v), gauge_value(GaugeKind::L1, v));
    EXPECT_EQ(dual_gauge_value(GaugeKind::L2, v), gauge_value(GaugeKind::L2, v));
  }
}

TEST(DualGauge, MatchesSampledSupportIn2D) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t)
    for (auto kind : kAllKinds) {
      const Vector v = random_vector(rng, 2);
      EXPECT_NEAR(dual_gauge_value(kind, v), verify::support_by_sampling(kind, v, 20000), 1e-6);
    }
}

// ---- gauge axioms -----------------------------------------------------------

TEST(GaugeAxioms, HomogeneityTriangleDefinitenessSandwich) {
  Rng rng(2);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + t % 7;
    const Vector a = random_vector(rng, n);
    const Vector b = random_vector(rng, n);
    const double alpha = 5.0 * rng.uniform();
    Vector sum(n), scaled(n);
    for (std::size_t j = 0; j < n; ++j) {
      sum[j] = a[j] + b[j];
      scaled[j] = alpha * a[j];
    }
    const double l2 = gauge_value(GaugeKind::L2, a);
    for (auto kind : kAllKinds) {
      const double ga = gauge_value(kind, a);
      EXPECT_NEAR(gauge_value(kind, scaled), alpha * ga, 1e-12 * std::max(1.0, alpha * ga));
      EXPECT_LE(gauge_value(kind, sum), ga + gauge_value(kind, b) + 1e-12);
      EXPECT_LE(ga / polar_radius(kind, n), l2 * (1 + 1e-12));
      EXPECT_LE(l2, ball_radius(kind, n) * ga * (1 + 1e-12));
      Vector neg(a);
      for (double& c : neg) c = -c;
      EXPECT_EQ(gauge_value(kind, neg), ga);
    }
  }
  for (auto kind : kAllKinds) EXPECT_EQ(gauge_value(kind, Vector{0, 0, 0}), 0.0);
  for (auto kind : kAllKinds) EXPECT_GT(gauge_value(kind, Vector{0, 1e-300, 0}), 0.0);
}

// ---- project_l1_ball ----------------------------------------------------------

namespace {

// Dense-grid oracle for the l1-ball projection in 2-D.
Vector grid_project_l1(const Vector& v, double r) {
  auto f = [&](ConstView u) {
    const double excess = std::abs(u[0]) + std::abs(u[1]) - r;
    return (u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) + (excess > 0 ? 1e6 * excess : 0.0);
  };
  const Vector c{0, 0};
  const Vector h{r, r};
  verify::OracleConfig cfg;
  cfg.grid_resolution = 201;
  cfg.passes = 5;
  return verify::grid_minimize(f, c, h, cfg).argmin;
}

}  // namespace

TEST(ProjectL1Ball, OutsideOnAxis) {
  const Vector oracle = grid_project_l1({3, 0}, 1.0);
  EXPECT_NEAR(oracle[0], 1.0, 1e-4);
  EXPECT_NEAR(oracle[1], 0.0, 1e-4);
  const Vector p = project_l1_ball(Vector{3, 0}, 1.0);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
}

TEST(ProjectL1Ball, InsideIsUnchanged) {
  const Vector v{0.4, 0.3};
  EXPECT_EQ(project_l1_ball(v, 1.0), v);
}

TEST(ProjectL1Ball, ThresholdZeroesSmallCoordinate) {
  const Vector oracle = grid_project_l1({2, 1}, 1.0);
  EXPECT_NEAR(oracle[0], 1.0, 1e-4);
  EXPECT_NEAR(oracle[1], 0.0, 1e-4);
  const Vector p = project_l1_ball(Vector{2, 1}, 1.0);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
}

TEST(ProjectL1Ball, FeasibleIdempotentAndMatchesGrid) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 6;
    const Vector v = random_vector(rng, n, 4.0);
    const double r = 0.1 + 2.0 * rng.uniform();
    const Vector p = project_l1_ball(v, r);
    EXPECT_LE(gauge_value(GaugeKind::L1, p), r + 1e-12);
    const Vector pp = project_l1_ball(p, r);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(pp[j], p[j], 1e-12);
    if (n == 2 && t < 60) {
      const Vector g = grid_project_l1(v, r);
      EXPECT_NEAR(p[0], g[0], 2e-4);
      EXPECT_NEAR(p[1], g[1], 2e-4);
    }
  }
}

TEST(ProjectL1Ball, NonPositiveRadiusRejected) { EXPECT_THROW(project_l1_ball(Vector{1, 1}, 0.0), ParameterError); }

// ---- prox_distance -----------------------------------------------------------

TEST(ProxDistance, EuclideanShrinkage) {
  const Vector a{0, 0}, z{3, 4};
  const Vector oracle = verify::brute_prox(GaugeKind::L2, a, z, 1.0);
  EXPECT_NEAR(oracle[0], 2.4, 1e-4);
  EXPECT_NEAR(oracle[1], 3.2, 1e-4);
  const Vector p = prox_distance(GaugeKind::L2, a, z, 1.0);
  EXPECT_NEAR(p[0], 2.4, 1e-14);
  EXPECT_NEAR(p[1], 3.2, 1e-14);
}

TEST(ProxDistance, SoftThreshold) {
  // Per-coordinate scalar oracle: argmin_y |y| + (y - z)^2 / 2.
  auto scalar = [](double z) {
    double best = 0, bv = 1e300;
    for (int s = -400000; s <= 400000; ++s) {
      const double y = s * 1e-5;
      const double v = std::abs(y) + 0.5 * (y - z) * (y - z);
      if (v < bv) bv = v, best = y;
    }
    return best;
  };
  EXPECT_NEAR(scalar(0.5), 0.0, 1e-5);
  EXPECT_NEAR(scalar(-2.0), -1.0, 1e-5);
  const Vector p = prox_distance(GaugeKind::L1, Vector{0, 0}, Vector{0.5, -2}, 1.0);
  EXPECT_EQ(p, (Vector{0, -1}));
}

TEST(ProxDistance, AnchorIsFixed) {
  EXPECT_EQ(prox_distance(GaugeKind::L2, Vector{1, 1}, Vector{1, 1}, 0.5), (Vector{1, 1}));
}

TEST(ProxDistance, MaxNormUsesMoreauDecomposition) {
  const Vector a{0, 0}, z{2, 1};
  const Vector oracle = verify::brute_prox(GaugeKind::LInf, a, z, 1.0);
  EXPECT_NEAR(oracle[0], 1.0, 1e-4);
  EXPECT_NEAR(oracle[1], 1.0, 1e-4);
  const Vector p = prox_distance(GaugeKind::LInf, a, z, 1.0);
  EXPECT_NEAR(p[0], 1.0, 1e-14);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
  // a + P(z - a), the form without the residual, scores worse.
  const Vector literal = project_l1_ball(z, 1.0);
  EXPECT_DOUBLE_EQ(verify::prox_objective(GaugeKind::LInf, a, z, 1.0, p), 1.5);
  EXPECT_DOUBLE_EQ(verify::prox_objective(GaugeKind::LInf, a, z, 1.0, literal), 2.0);
}

TEST(ProxDistance, NonPositiveMuRejected) {
  EXPECT_THROW(prox_distance(GaugeKind::L2, Vector{0}, Vector{1}, 0.0), ParameterError);
  EXPECT_THROW(prox_distance(GaugeKind::L1, Vector{0}, Vector{1}, -1.0), ParameterError);
}

TEST(ProxDistance, OptimalAgainstBruteForceOracle) {
  Rng rng(99);
  for (int t = 0; t < 1000; ++t) {
    const GaugeKind kind = kAllKinds[t % 3];
    const Vector a = random_vector(rng, 2);
    const Vector z = random_vector(rng, 2);
    const double mu = 0.05 + 2.0 * rng.uniform();
    const Vector p = prox_distance(kind, a, z, mu);
    const Vector g = verify::brute_prox(kind, a, z, mu);
    EXPECT_LE(verify::prox_objective(kind, a, z, mu, p), verify::prox_objective(kind, a, z, mu, g) + 1e-6);
  }
}

TEST(ProxDistance, NonexpansiveInZ) {
  Rng rng(7);
  for (int t = 0; t < 3000; ++t) {
    const GaugeKind kind = kAllKinds[t % 3];
    const std::size_t n = 1 + t % 5;
    const Vector a = random_vector(rng, n);
    const Vector z1 = random_vector(rng, n);
    const Vector z2 = random_vector(rng, n);
    const double mu = 0.01 + 2.0 * rng.uniform();
    const Vector p1 = prox_distance(kind, a, z1, mu);
    const Vector p2 = prox_distance(kind, a, z2, mu);
    double dp = 0, dz = 0;
    for (std::size_t j = 0; j < n; ++j) {
      dp += (p1[j] - p2[j]) * (p1[j] - p2[j]);
      dz += (z1[j] - z2[j]) * (z1[j] - z2[j]);
    }
    EXPECT_LE(std::sqrt(dp), std::sqrt(dz) + 1e-12);
  }
}

// ---- center_representative / geometric_median ---------------------------------

TEST(CenterRepresentative, ComponentwiseMedian) {
  const PointSet pts = PointSet::from_rows({{0, 0}, {2, 0}, {10, 0}});
  // Oracle: scan coordinate breakpoints for the separable l1 objective.
  double best = 1e300;
  Vector arg;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      const Vector x{pts[p][0], pts[q][1]};
      const double v = sum_gauge(GaugeKind::L1, pts, x);
      if (v < best) best = v, arg = x;
    }
  EXPECT_EQ(arg, (Vector{2, 0}));
  EXPECT_EQ(center_representative(GaugeKind::L1, pts), (Vector{2, 0}));
}

TEST(CenterRepresentative, LowerMedianForEvenCount) {
  const PointSet pts = PointSet::from_rows({{4}, {1}, {3}, {2}});
  EXPECT_EQ(center_representative(GaugeKind::L1, pts), (Vector{2}));
}

TEST(CenterRepresentative, Midrange) {
  const PointSet pts = PointSet::from_rows({{0, 0}, {4, 2}});
  const Vector c{2, 1}, h{4, 4};
  const auto grid =
      verify::grid_minimize([&](ConstView x) { return sum_gauge(GaugeKind::LInf, pts, x); }, c, h);
  const Vector rep = center_representative(GaugeKind::LInf, pts);
  EXPECT_EQ(rep, (Vector{2, 1}));
  EXPECT_LE(sum_gauge(GaugeKind::LInf, pts, rep), grid.value + 1e-9);
}

TEST(CenterRepresentative, MidrangeIsNotASumMinimizerInGeneral) {
  // The midrange minimizes the largest l-infinity distance, not the sum.
  const PointSet pts = PointSet::from_rows({{0, 0}, {0, 0}, {0, 0}, {10, 0}});
  const Vector rep = center_representative(GaugeKind::LInf, pts);
  EXPECT_EQ(rep, (Vector{5, 0}));
  EXPECT_DOUBLE_EQ(sum_gauge(GaugeKind::LInf, pts, rep), 20.0);
  EXPECT_DOUBLE_EQ(sum_gauge(GaugeKind::LInf, pts, Vector{0, 0}), 10.0);
}

TEST(CenterRepresentative, SinglePoint) {
  EXPECT_EQ(center_representative(GaugeKind::L2, PointSet::from_rows({{5, 5}})), (Vector{5, 5}));
}

TEST(CenterRepresentative, EmptyRejected) {
  EXPECT_THROW(center_representative(GaugeKind::L1, PointSet{}), InvalidInput);
  EXPECT_THROW(geometric_median(PointSet{}), InvalidInput);
}

TEST(CenterRepresentative, OptimalAgainstGridForL1AndL2) {
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const GaugeKind kind = t % 2 == 0 ? GaugeKind::L1 : GaugeKind::L2;
    const std::size_t count = 1 + t % 7;
    std::vector<Vector> rows;
    for (std::size_t p = 0; p < count; ++p) rows.push_back(random_vector(rng, 2));
    const PointSet pts = PointSet::from_rows(rows);
    const Vector rep = center_representative(kind, pts);
    const Vector c{0, 0}, h{3.2, 3.2};
    const auto grid = verify::grid_minimize([&](ConstView x) { return sum_gauge(kind, pts, x); }, c, h);
    EXPECT_LE(sum_gauge(kind, pts, rep), grid.value + 1e-4) << "trial " << t;
  }
}

TEST(GeometricMedian, CollinearPairReturnsMean) {
  const PointSet pts = PointSet::from_rows({{0, 0}, {2, 0}});
  const Vector x = geometric_median(pts, 1e-9);
  EXPECT_NEAR(sum_gauge(GaugeKind::L2, pts, x), 2.0, 1e-12);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 0.0, 1e-12);
}

TEST(GeometricMedian, SquareCorners) {
  const Vector x = geometric_median(PointSet::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 1e-9);
  EXPECT_NEAR(x[0], 0.5, 1e-9);
  EXPECT_NEAR(x[1], 0.5, 1e-9);
}

TEST(GeometricMedian, MajorityAnchorWins) {
  const PointSet pts = PointSet::from_rows({{0, 0}, {0, 0}, {10, 0}});
  const Vector c{5, 0}, h{6, 6};
  const auto grid = verify::grid_minimize([&](ConstView x) { return sum_gauge(GaugeKind::L2, pts, x); }, c, h);
  EXPECT_NEAR(grid.argmin[0], 0.0, 1e-3);
  EXPECT_NEAR(grid.argmin[1], 0.0, 1e-3);
  const Vector x = geometric_median(pts, 1e-9);
  EXPECT_EQ(x, (Vector{0, 0}));
}

TEST(GeometricMedian, StartingOnNonOptimalAnchorMovesOff) {
  // The mean (0, 0) coincides with a data point whose subgradient test
  // fails: the pull of the other points has norm 6/sqrt(10) > 1.
  const PointSet pts = PointSet::from_rows({{0, 0}, {3, 0}, {3, 1}, {3, -1}, {-9, 0}});
  const Vector x = geometric_median(pts, 1e-9);
  EXPECT_GT(x[0], 0.1);
  const Vector c{0, 0}, h{10, 10};
  const auto grid = verify::grid_minimize([&](ConstView y) { return sum_gauge(GaugeKind::L2, pts, y); }, c, h);
  EXPECT_LE(sum_gauge(GaugeKind::L2, pts, x), grid.value + 1e-7);
}
