#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mpp/gff.hpp"

using namespace mpp;

namespace {

LimitModel corner() { return {LimitBackWall::corner(), {1.0}}; }
LimitModel three_kink() { return {{{-kInf, -2.0, 0.0, 2.0, kInf}, {1.0, 2.0 / 3, 1.0 / 3, 0.0}, 0.0, 0.0}, {2.0, 2.0, 0.25}}; }

struct Point {
  double x1, x2;
  int k1, k2;
  double t;
};

const std::vector<Point> kGrid = {
    {0.3, 0.8, 1, 1, 1.0}, {0.5, 0.5, 1, 1, 1.0}, {0.5, 1.5, 2, 1, 1.0}, {0.5, 1.5, 1, 1, 2.0}, {-1.0, 0.5, 2, 2, 1.0}};

}  // namespace

TEST(GffKernel, DirichletGreenValue) {
  EXPECT_NEAR(gff_kernel({0, 1}, {0, 2}), std::log(3.0) / (2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(gff_kernel({1, 1}, {-2, 0.5}), gff_kernel({-2, 0.5}, {1, 1}), 1e-15);
  EXPECT_GT(gff_kernel({0.3, 0.2}, {0.4, 0.1}), 0.0);
}

TEST(ContourCovariance, SymmetricAndPositiveVariance) {
  for (const auto& m : {corner(), three_kink()}) {
    const double a = limit_covariance_contour(m, 0.3, 1, 0.8, 2, 1.0).value;
    const double b = limit_covariance_contour(m, 0.8, 2, 0.3, 1, 1.0).value;
    EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    const auto v = limit_covariance_contour(m, 0.5, 1, 0.5, 1, 1.0);
    EXPECT_TRUE(v.converged);
    EXPECT_GT(v.value, 0.0);
    EXPECT_LT(std::abs(v.imag), 1e-10);
  }
}

TEST(ContourCovariance, KTScaling) {
  const auto m = corner();
  const double a = limit_covariance_contour(m, 0.4, 2, 0.9, 2, 1.0).value;
  const double b = limit_covariance_contour(m, 0.4, 1, 0.9, 1, 2.0).value;
  EXPECT_NEAR(a, 4 * b, 1e-10 * std::abs(a));
}

TEST(ContourCovariance, RadiusInvariance) {
  for (const auto& m : {corner(), three_kink()})
    for (const auto& p : kGrid) {
      const auto base = limit_covariance_contour(m, p.x1, p.k1, p.x2, p.k2, p.t);
      const double d = std::exp(0.3 * base.margin);
      for (const auto& r : {std::vector<double>{base.radii[0] / d, base.radii[1]},
                            std::vector<double>{base.radii[0], base.radii[1] * d},
                            std::vector<double>{base.radii[0] * d, base.radii[1] / d}}) {
        const auto moved = limit_covariance_contour(m, p.x1, p.k1, p.x2, p.k2, p.t, {}, r);
        EXPECT_NEAR(moved.value, base.value, 1e-9 * std::max(1.0, std::abs(base.value))) << p.x1 << " " << p.x2;
      }
    }
  const auto base = limit_covariance_contour(corner(), 0.3, 1, 0.8, 1, 1.0);
  EXPECT_THROW(limit_covariance_contour(corner(), 0.3, 1, 0.8, 1, 1.0, {}, {base.radii[1], base.radii[0]}),
               std::domain_error);
}

TEST(ContourCovariance, SingularPointRejected) {
  EXPECT_THROW(limit_covariance_contour(three_kink(), 0.0, 1, 0.5, 1, 1.0), std::domain_error);
}

TEST(PullbackCovariance, MatchesContourOnTwoModels) {
  for (const auto& m : {corner(), three_kink()})
    for (const auto& p : kGrid) {
      const double c = limit_covariance_contour(m, p.x1, p.k1, p.x2, p.k2, p.t).value;
      const double f = pullback_contour_factor(m, p.x1, p.k1, p.x2, p.k2, p.t);
      const double g = gff_pullback_covariance(m, p.x1, p.k1 * p.t, p.x2, p.k2 * p.t);
      EXPECT_NEAR(g / f, c, 1e-3) << p.x1 << " " << p.x2 << " " << p.k1 << " " << p.k2 << " " << p.t;
    }
}

TEST(PullbackCovariance, CornerReferenceValue) {
  const auto m = corner();
  EXPECT_NEAR(limit_covariance_contour(m, 0.3, 1, 0.8, 1, 1.0).value, std::exp(-0.8), 1e-10);
  EXPECT_NEAR(gff_pullback_covariance(m, 0.3, 1.0, 0.8, 1.0), std::numbers::pi * std::exp(-0.8), 1e-4);
}

TEST(PullbackCovariance, SeparatedSlicesDecorrelate) {
  const auto m = corner();
  const double near = gff_pullback_covariance(m, 0.3, 1.0, 0.8, 1.0) / pullback_contour_factor(m, 0.3, 1, 0.8, 1, 1.0);
  const double far = gff_pullback_covariance(m, 0.3, 1.0, 8.0, 1.0) / pullback_contour_factor(m, 0.3, 1, 8.0, 1, 1.0);
  const double vfar = limit_covariance_contour(m, 8.0, 1, 8.0, 1, 1.0).value;
  const double vnear = limit_covariance_contour(m, 0.3, 1, 0.3, 1, 1.0).value;
  EXPECT_LT(far / std::sqrt(vfar * vnear), 0.1 * near / std::sqrt(vnear * limit_covariance_contour(m, 0.8, 1, 0.8, 1, 1.0).value));
}

TEST(CovarianceMatrix, PositiveSemidefinite) {
  for (const auto& m : {corner(), three_kink()}) {
    std::vector<CovariancePoint> pts;
    for (double x : {-1.5, -0.5, 0.5, 1.0, 1.5})
      for (int k : {1, 2}) pts.push_back({x, k});
    const auto M = limit_covariance_matrix(m, pts, 1.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) EXPECT_EQ(M.values[i][j], M.values[j][i]);
    EXPECT_GE(M.min_eigenvalue, -1e-8);
  }
}

TEST(Prelimit, CornerMonotoneApproach) {
  const auto tab = prelimit_covariance_convergence(corner(), 0.3, 1, 0.8, 1, 1.0, 1.0, {0.2, 0.1, 0.05});
  ASSERT_EQ(tab.rows.size(), 3u);
  EXPECT_GT(tab.rows[0].error, tab.rows[1].error);
  EXPECT_GT(tab.rows[1].error, tab.rows[2].error);
  EXPECT_GT(tab.observed_order, 0.7);
  EXPECT_LT(tab.rows[2].error, 0.05);
}

TEST(Prelimit, AlphaScaledLimitAgrees) {
  const auto m = corner();
  const auto a1 = prelimit_covariance_convergence(m, 0.3, 1, 0.8, 1, 1.0, 1.0, {0.2, 0.1, 0.05});
  const auto a2 = prelimit_covariance_convergence(m, 0.3, 1, 0.8, 1, 1.0, 2.0, {0.2, 0.1, 0.05});
  EXPECT_EQ(a1.limit, a2.limit);
  EXPECT_GT(a2.rows[0].error, a2.rows[1].error);
  EXPECT_GT(a2.rows[1].error, a2.rows[2].error);
  EXPECT_LT(a2.rows[2].error, 0.05);
  // Without the 1/alpha normalization the q != t sweep heads to twice the limit.
  EXPECT_GT(a2.rows[2].raw, 1.8 * a2.limit);
}

TEST(Prelimit, DiagonalMatchesSingleXVariance) {
  const auto m = corner();
  const double eps = 0.1;
  const auto tab = prelimit_covariance_convergence(m, 0.5, 1, 0.5, 1, 1.0, 1.0, {eps});
  const auto w = discretize(m.wall(), m.s(), eps, {80});
  const WeightSpec spec{1, {1.0}, std::exp(-eps), 1.0, 1.0};
  const double e2 = moment_multi(w, spec, {5, 5}, {1, 1}).value;
  const double e1 = moment_k1(w, spec, 5).value;
  EXPECT_NEAR(tab.rows[0].raw * eps * eps, e2 - e1 * e1, 1e-8 * std::abs(e2));
}
