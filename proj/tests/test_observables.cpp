#include <gtest/gtest.h>

#include <cmath>

#include "mpp/observables.hpp"
#include "mpp/oracle.hpp"

using namespace mpp;

TEST(Wp, Examples) {
  const double q = 0.3, t = 0.6;
  EXPECT_EQ(wp(1, Partition{}, q, t), 1.0);
  EXPECT_EQ(wp(3, Partition{}, q, t), 1.0);
  EXPECT_NEAR(wp(1, Partition{1}, q, t), (1 - 1 / t) * q + 1 / t, 1e-15);
  const Partition lam{3, 1, 1};
  double expect = std::pow(t, -2.0 * 3);
  for (int i = 1; i <= 3; ++i) expect += (1 - std::pow(t, -2.0)) * std::pow(q, 2.0 * lam.part(i)) * std::pow(t, 2.0 * (1 - i));
  EXPECT_NEAR(wp(2, lam, q, t), expect, 1e-12);
  // Appending zero parts does not change the value.
  EXPECT_NEAR(wp(1, Partition{2, 1}, q, t), wp(1, Partition({2, 1, 0, 0}), q, t), 1e-15);
}

TEST(GFunctions, LeftEndIsTrivialAndPolesSeparate) {
  const auto w = wall_from_support({3, 2, {1}});
  const WeightSpec spec = WeightSpec::from_qt(0.2, 0.5, 0.3);
  const auto G = G_functions(w, spec, w.v_min + 1);
  EXPECT_EQ(G.less_poles().size(), w.up(w.v_min) ? 1u : 0u);
  for (int x = w.v_min + 1; x < w.v_max; ++x) {
    const auto H = G_functions(w, spec, x);
    EXPECT_LT(H.rho_less(), H.rho_greater()) << x;
  }
  const auto box = wall_from_support({2, 2, {}});
  EXPECT_EQ(G_functions(box, spec, 1).greater_poles().size(), 1u);
  EXPECT_EQ(G_functions(box, spec, 1).less_poles().size(), 2u);
}

TEST(GFunctions, CornerRescaledPoles) {
  // Corner wall: the logs of the extremal poles approach min(x, 0) and max(x, 0).
  for (double x : {-1.0, 0.5}) {
    double prev = 1e9;
    for (double eps : {0.2, 0.1, 0.05}) {
      DiscreteBackWall w;
      const int L = static_cast<int>(std::ceil(4.0 / eps));
      w.v_min = -L;
      w.v_max = L;
      for (int k = -L; k < L; ++k) w.bits.push_back(k < 0);
      const WeightSpec spec{1, {1.0}, std::exp(-eps), 1.0, 1.0};
      const auto G = G_functions(w, spec, static_cast<int>(std::floor(x / eps)));
      const double err = std::abs(std::log(G.rho_less()) - std::min(x, 0.0)) +
                         std::abs(std::log(G.rho_greater() * spec.t()) - std::max(x, 0.0));
      EXPECT_LT(err, prev + 1e-12);
      prev = err;
    }
    EXPECT_LT(prev, 0.1);
  }
}

namespace {

struct Case {
  SkewSupport support;
  WeightSpec spec;
  int cap;
};

double oracle_wp(const Case& c, const std::vector<int>& xs, const std::vector<int>& ks) {
  const double q = c.spec.q(), t = c.spec.t();
  const auto res = exact_expectations(c.support, c.spec,
                                      {[&](const SkewPlanePartition& pp) {
                                        double v = 1.0;
                                        for (std::size_t a = 0; a < xs.size(); ++a)
                                          v *= wp(ks[a], pp.diagonal(xs[a]), q, t);
                                        return v;
                                      }},
                                      c.cap, EnumerationBudget{200});
  EXPECT_LT(res.tail_mass, 1e-10);
  return res.values.front();
}

}  // namespace

TEST(MomentK1, MatchesOracle) {
  const std::vector<Case> cases = {
      {{1, 1, {}}, WeightSpec::from_qt(0.3, 0.3, 0.3), 40},
      {{2, 2, {}}, WeightSpec::from_qt(0.09, 0.3, 0.3), 40},
      {{2, 2, {}}, WeightSpec::from_qt(0.5, 0.5, 0.1), 12},
      {{3, 1, {1}}, WeightSpec::from_qt(0.25, 0.5, 0.2, {1.5, 0.8}), 30},
  };
  for (const auto& c : cases) {
    const auto w = wall_from_support(c.support);
    for (int x = w.v_min + 1; x < w.v_max; ++x) {
      const auto m = moment_k1(w, c.spec, x);
      EXPECT_TRUE(m.converged);
      EXPECT_LT(std::abs(m.imag), 1e-12);
      const double o = oracle_wp(c, {x}, {1});
      EXPECT_NEAR(m.value, o, 1e-9 * std::abs(o)) << "x=" << x;
    }
  }
}

TEST(MomentK1, DegenerateWallGivesOne) {
  DiscreteBackWall w{0, 3, {0, 0, 0}, 0, 0.0};
  EXPECT_NEAR(moment_k1(w, WeightSpec::schur(0.4), 1).value, 1.0, 1e-13);
}

TEST(MomentK1, RadiusInvariance) {
  const auto w = wall_from_support({3, 3, {1}});
  const WeightSpec spec = WeightSpec::from_qt(0.2, 0.45, 0.3);
  for (int x = w.v_min + 1; x < w.v_max; ++x) {
    const auto G = G_functions(w, spec, x);
    const double lo = std::max(G.rho_less(), 1e-300), hi = G.rho_greater();
    const auto f = [&](cplx z) { return G.product(z); };
    const double ref = moment_k1(w, spec, x).value;
    for (double s : {0.2, 0.5, 0.8}) {
      const double R = G.rho_less() > 0 ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))) : s * hi;
      const auto v = circle_average(f, R, {64, 1 << 18, 1L << 27, 1e-12});
      EXPECT_NEAR(v.value.real(), ref, 1e-10 * std::abs(ref)) << x << " " << s;
    }
  }
}

TEST(MomentK1, SchurResidueSum) {
  // With q = t every inner pole p of G_< is simple with factor (z - p/t)/(z - p).
  const auto w = wall_from_support({3, 2, {}});
  const WeightSpec spec = WeightSpec::schur(0.35);
  const double t = spec.t();
  for (int x = w.v_min + 1; x < w.v_max; ++x) {
    const auto G = G_functions(w, spec, x);
    const auto poles = G.less_poles();
    double total = std::pow(t, -static_cast<double>(poles.size()));  // residue at zero
    for (std::size_t i = 0; i < poles.size(); ++i) {
      double rest = G.greater(poles[i]).real();
      for (std::size_t j = 0; j < poles.size(); ++j)
        if (j != i) rest *= (poles[i] - poles[j] / t) / (poles[i] - poles[j]);
      total += (1 - 1 / t) * rest;
    }
    EXPECT_NEAR(moment_k1(w, spec, x).value, total, 1e-11 * std::max(1.0, std::abs(total))) << x;
  }
}

TEST(MomentMulti, ReducesToK1) {
  const auto w = wall_from_support({2, 2, {}});
  const WeightSpec spec = WeightSpec::from_qt(0.09, 0.3, 0.3);
  for (int x = -1; x <= 1; ++x)
    EXPECT_NEAR(moment_multi(w, spec, {x}, {1}).value, moment_k1(w, spec, x).value, 1e-12);
}

TEST(MomentMulti, MatchesOracle) {
  struct MultiCase {
    Case c;
    std::vector<int> xs, ks;
  };
  const Case c2{{2, 2, {}}, WeightSpec::from_qt(0.09, 0.3, 0.05), 12};
  const Case c3{{3, 1, {1}}, WeightSpec::from_qt(0.25, 0.5, 0.05, {1.5, 0.8}), 12};
  const Case c1{{1, 1, {}}, WeightSpec::from_qt(0.16, 0.4, 0.02), 12};
  const std::vector<MultiCase> cases = {
      {c2, {0, 0}, {1, 1}}, {c2, {-1, 1}, {1, 1}}, {c2, {0}, {2}},          {c2, {-1, 0}, {1, 2}},
      {c3, {0, 1}, {1, 1}}, {c3, {1}, {2}},         {c1, {0, 0, 0}, {1, 1, 1}}, {c1, {0, 0}, {2, 2}},
  };
  for (const auto& mc : cases) {
    const auto w = wall_from_support(mc.c.support);
    const auto m = moment_multi(w, mc.c.spec, mc.xs, mc.ks);
    const double o = oracle_wp(mc.c, mc.xs, mc.ks);
    EXPECT_NEAR(m.value, o, 1e-7 * std::abs(o)) << mc.xs.size() << " vars, k0=" << mc.ks[0];
  }
}

TEST(MomentMulti, CovarianceMatchesOracle) {
  const Case c{{2, 2, {}}, WeightSpec::from_qt(0.2, 0.45, 0.05), 12};
  const auto w = wall_from_support(c.support);
  const double cov = moment_covariance(w, c.spec, -1, 1, 1, 1);
  const double e12 = oracle_wp(c, {-1, 1}, {1, 1});
  const double e1 = oracle_wp(c, {-1}, {1}), e2 = oracle_wp(c, {1}, {1});
  EXPECT_NEAR(cov, e12 - e1 * e2, 1e-7 * std::abs(e12));
}

TEST(MomentMulti, InfeasibleNestingNamesPair) {
  const auto w = wall_from_support({2, 2, {}});
  const WeightSpec spec = WeightSpec::from_qt(0.5, 0.9, 0.95);
  try {
    moment_multi(w, spec, {0, 0, 0}, {2, 1, 1});
    FAIL() << "expected nesting failure";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("variable"), std::string::npos) << e.what();
  }
}

TEST(DimensionReduction, TrivialK1) {
  const CFun f = [](cplx v) { return 1.0 / (v - 0.5); };
  const CFun g = [](cplx v) { return 1.0 / v; };
  EXPECT_EQ(dimension_reduction_check(f, {g}, 1, {1.0}).residual, 0.0);
}

TEST(DimensionReduction, ResidueValues) {
  const CFun f = [](cplx v) { return 1.0 / ((v - 0.5) * (1.0 - v / 3.0)); };
  const CFun f2 = [](cplx v) { return v / ((v - 0.3) * (v - 0.6)) / std::pow(1.0 - v / 5.0, 2); };
  const CFun g = [](cplx v) { return 1.0 / v; };
  const auto a = dimension_reduction_check(f, {g}, 2, {1.0, 1.5});
  EXPECT_LT(a.residual, 1e-10);
  EXPECT_NEAR(a.rhs.real(), 0.544, 1e-3);
  const auto b = dimension_reduction_check(f, {g}, 3, {0.8, 1.2, 1.8});
  EXPECT_LT(b.residual, 1e-9);
  EXPECT_NEAR(b.rhs.real(), 0.84736, 1e-5);
  const auto c = dimension_reduction_check(f, {g, g}, 2, {1.0, 1.5});
  EXPECT_LT(c.residual, 1e-10);
  EXPECT_NEAR(c.rhs.real(), 0.469333, 1e-6);
  const auto d = dimension_reduction_check(f2, {g}, 3, {0.8, 1.2, 1.8});
  EXPECT_LT(d.residual, 1e-9);
  EXPECT_NEAR(d.rhs.real(), 1.58045, 1e-5);
}
