#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mpp/frozen.hpp"

using namespace mpp;

namespace {

LimitModel corner() { return {LimitBackWall::corner(), {1.0}}; }
LimitModel three_kink() { return {{{-kInf, -2.0, 0.0, 2.0, kInf}, {1.0, 2.0 / 3, 1.0 / 3, 0.0}, 0.0, 0.0}, {2.0, 2.0, 0.25}}; }
LimitModel half_slope() { return {{{-kInf, kInf}, {0.5}, 0.0, 0.0}, {4.0, 0.25, 2.0, 0.5, 1.25, 0.8}}; }
LimitModel finite_wall() { return {{{-1.5, 0.0, 1.5}, {0.5, 0.0}, 0.0, 0.0}, {2.0, 0.5}}; }

}  // namespace

TEST(Sigma, CornerFormula) {
  const auto m = corner();
  for (double z : {-3.0, -0.2, 0.4, 2.5})
    EXPECT_NEAR(Sigma(m, z), 1 / z - 1 / (z - 1), 1e-14);
  EXPECT_LT(std::abs(Sigma(m, 1e9)), 1e-17);
  EXPECT_THROW(Sigma(m, 1.0), std::domain_error);
}

TEST(Sigma, EndFormsAgree) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (const auto& m : {corner(), three_kink(), half_slope(), finite_wall()})
    for (int i = 0; i < 200; ++i) {
      const double z = u(rng);
      const double s = Sigma(m, z);
      EXPECT_NEAR(Sigma_left_form(m, z), s, 1e-12 * std::max(1.0, std::abs(s)));
      EXPECT_NEAR(Sigma_right_form(m, z), s, 1e-12 * std::max(1.0, std::abs(s)));
    }
}

TEST(InvertF, OneWeight) {
  const auto m = corner();
  for (double w : {-5.0, -0.5, 0.3, 0.9}) EXPECT_NEAR(invert_f(m, w, 0), 1 - 1 / w, 1e-12 * std::abs(1 - 1 / w));
  for (double w : {1.5, 40.0}) EXPECT_NEAR(invert_f(m, w, 1), 1 - 1 / w, 1e-12);
  EXPECT_THROW(invert_f(m, 1.5, 0), std::domain_error);
  EXPECT_THROW(invert_f(m, 0.5, 1), std::domain_error);
}

TEST(InvertF, RoundTripAndPoleLimits) {
  const auto m = half_slope();
  const int d = m.S().d();
  for (int j = 0; j <= d; ++j)
    for (double w : {-30.0, -2.0, 0.25, 0.75, 1.5, 7.0, 300.0}) {
      if ((j == 0 && w >= 1) || (j == d && w <= 1)) continue;
      const double u = invert_f(m, w, j);
      EXPECT_NEAR(f_weights(m, u), w, 1e-12 * std::max(1.0, std::abs(w))) << j << " " << w;
    }
  // Large |w| on an interior component approaches its endpoints.
  EXPECT_NEAR(invert_f(m, 1e9, 1), m.S().sigma[0], 1e-6);
  EXPECT_NEAR(invert_f(m, -1e9, 1), m.S().sigma[1], 1e-6);
}

TEST(FrozenPoint, CornerClosedForm) {
  const auto m = corner();
  for (double z = -6.0; z < 0.0; z += 0.37) {
    const auto fp = frozen_point(m, z);
    EXPECT_EQ(fp.branch, 0);
    EXPECT_NEAR(std::exp(-fp.y), std::pow(1 + std::exp(-fp.x / 2), 2), 1e-9 * std::exp(-fp.y));
    EXPECT_NEAR(z, -std::exp(fp.x / 2), 1e-10 * std::abs(z));
  }
  const auto mid = frozen_point(m, -1.0);
  EXPECT_NEAR(mid.x, 0.0, 1e-12);
  EXPECT_NEAR(mid.y, -2 * std::log(2.0), 1e-12);
  for (double z : {0.3, 0.8, 1.5, 4.0}) {
    const auto fp = frozen_point(m, z);
    EXPECT_NEAR(std::exp(-fp.y), std::pow(1 - std::exp(-fp.x / 2), 2), 1e-9 * std::exp(-fp.y));
  }
}

TEST(FrozenPoint, IsDoubleRoot) {
  for (const auto& m : {three_kink(), half_slope(), finite_wall()}) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
      const double z = u(rng);
      const auto fp = frozen_point(m, z);
      EXPECT_LT(fp.residual, 1e-8);
      EXPECT_TRUE(std::isfinite(fp.x));
      if (std::abs(fp.y) > 30) continue;
      const auto r = companion_roots(m, fp.x, fp.y);
      int near = 0;
      for (double q : r.real) near += std::abs(q - z) < 1e-6 * std::max(1.0, std::abs(z));
      if (r.upper && std::abs(*r.upper - z) < 1e-6 * std::max(1.0, std::abs(z))) near += 2;
      EXPECT_GE(near, 1) << z;
      ++checked;
    }
    EXPECT_GT(checked, 40);
  }
}

TEST(FrozenPoint, ZeroParameterOnFiniteWall) {
  const auto m = finite_wall();
  const auto fp = frozen_point(m, 0.0);
  EXPECT_LT(fp.residual, 1e-12);
  EXPECT_NEAR(fp.y, m.wall().B(-1.5), 1e-14);
  EXPECT_THROW(frozen_point(corner(), 0.0), std::domain_error);
}

TEST(FrozenBoundary, CornerSegments) {
  const auto fb = frozen_boundary(corner(), {});
  ASSERT_EQ(fb.segments.size(), 3u);
  ASSERT_EQ(fb.tentacles.size(), 1u);
  EXPECT_NEAR(fb.tentacles[0].x, 0.0, 1e-9);
  for (const auto& s : fb.segments)
    for (const auto& p : s.points) {
      const double lower = std::pow(1 + std::exp(-p.x / 2), 2), upper = std::pow(1 - std::exp(-p.x / 2), 2);
      const double e = std::exp(-p.y);
      EXPECT_LT(std::min(std::abs(e - lower), std::abs(e - upper)), 1e-9 * std::max(1.0, e));
    }
}

TEST(FrozenBoundary, ThreeKinkWallTentacles) {
  const auto m = three_kink();
  const auto fb = frozen_boundary(m, {});
  const auto sp = singular_points(m.wall(), m.S());
  ASSERT_EQ(fb.tentacles.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(fb.tentacles[i].x, sp[i], 1e-9);
  int tentacle_ends = 0;
  for (const auto& s : fb.segments)
    tentacle_ends += (s.lo_kind == EndpointKind::Tentacle) + (s.hi_kind == EndpointKind::Tentacle);
  EXPECT_EQ(tentacle_ends, 6);
}

TEST(FrozenBoundary, HalfSlopeWallNoTentacles) {
  const auto fb = frozen_boundary(half_slope(), {});
  EXPECT_TRUE(fb.tentacles.empty());
  EXPECT_EQ(fb.segments.size(), 2u);
}

TEST(FrozenBoundary, FiniteWallCusps) {
  const auto m = finite_wall();
  const auto fb = frozen_boundary(m, {});
  EXPECT_EQ(fb.tentacles.size(), 1u);
  for (const auto& s : fb.segments)
    for (auto k : {s.lo_kind, s.hi_kind}) EXPECT_NE(k, EndpointKind::Unbounded);
}

TEST(FrozenBoundary, MatchesLiquidIndicator) {
  const auto m = three_kink();
  const double step = 0.1;
  FrozenOptions opt;
  opt.x_min = -3.0;
  opt.x_max = 3.0;
  opt.y_min = -3.0;
  opt.y_max = 3.0;
  opt.refine_fraction = 0.002;
  const auto fb = frozen_boundary(m, opt);
  std::vector<std::pair<double, double>> curve;
  for (const auto& s : fb.segments)
    for (const auto& p : s.points) curve.emplace_back(p.x, p.y);
  const int n = static_cast<int>(std::round(6.0 / step));
  std::vector<std::vector<bool>> liquid(static_cast<std::size_t>(n + 1), std::vector<bool>(static_cast<std::size_t>(n + 1)));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      liquid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = zeta_map(m, -3.0 + i * step, -3.0 + j * step).has_value();
  int transitions = 0;
  std::vector<std::pair<double, double>> edges;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const bool here = liquid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const bool edge = (i < n && liquid[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j)] != here) ||
                        (j < n && liquid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 1)] != here);
      if (!edge) continue;
      ++transitions;
      const double x = -3.0 + i * step, y = -3.0 + j * step;
      edges.emplace_back(x, y);
      double best = 1e9;
      for (const auto& [cx, cy] : curve) best = std::min(best, std::hypot(cx - x, cy - y));
      EXPECT_LT(best, 2 * step) << x << " " << y;
    }
  EXPECT_GT(transitions, 50);
  // And the other direction of the Hausdorff distance, away from the box edges.
  for (const auto& [cx, cy] : curve) {
    if (std::abs(cx) > 2.7 || std::abs(cy) > 2.7) continue;
    double best = 1e9;
    for (const auto& [x, y] : edges) best = std::min(best, std::hypot(cx - x, cy - y));
    EXPECT_LT(best, 2 * step) << cx << " " << cy;
  }
}
