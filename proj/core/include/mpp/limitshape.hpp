#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mpp/backwall.hpp"
#include "mpp/contour.hpp"
#include "mpp/observables.hpp"

namespace mpp {

// One fractional-power factor of G_<x G_>x. Inverse factors read (1 - a/z)^e,
// direct ones (1 - z/a)^e; both use the principal branch.
struct GFactor {
  double a = 1.0;
  double e = 0.0;
  bool inverse = false;
};

// G_x^p as K * z^{n0} * prod (z - r)^{n_r} with integer exponents.
struct RationalPower {
  double log_K = 0.0;
  int sign = 1;
  int n0 = 0;
  std::vector<std::pair<double, int>> roots;  // (r, n_r), r > 0, n_r != 0
};

class LimitModel {
 public:
  LimitModel(LimitBackWall bw, std::vector<double> s);

  const LimitBackWall& wall() const { return bw_; }
  const SMultiset& S() const { return S_; }
  const std::vector<double>& s() const { return s_; }
  int p() const { return S_.p; }

  // p * B'(V_l^-) and p * B'(V_l^+), with B' = 0 left of I and 1 right of it.
  int units_before(int l) const;
  int units_after(int l) const;
  // Exponent change of class j (1-based) at kink l, in units of 1/p.
  int exponent_change(int l, int j) const;
  // Points of J_V for kink l; 0 stands for the left infinite end, kInf for the right one.
  std::vector<double> junction_points(int l) const;
  // The junction set, sorted, with 0 and kInf included when the ends are infinite.
  std::vector<double> junctions() const;

  std::vector<GFactor> less_factors(double x) const;
  std::vector<GFactor> greater_factors(double x) const;
  RationalPower rational_power(double x) const;

 private:
  LimitBackWall bw_;
  std::vector<double> s_;
  SMultiset S_;
  std::vector<int> units_;  // p * slope of each piece
};

// Sum of principal logs of the factors.
cplx log_factor_product(const std::vector<GFactor>& fs, cplx z);

cplx script_G_less(const LimitModel& m, double x, cplx z);
cplx script_G_greater(const LimitModel& m, double x, cplx z);
// Continuous log of G_x on the upper half plane; the companion equation is log G = -y.
cplx log_script_G(const LimitModel& m, double x, cplx z);
cplx script_G(const LimitModel& m, double x, cplx z);
// Boundary value from the upper half plane at a real point off the junctions.
cplx log_script_G_real(const LimitModel& m, double x, double zeta);

cplx log_P(const LimitModel& m, double x, cplx z);
// arg Q from its kink product; independent of x.
double arg_Q(const LimitModel& m, cplx z);

struct CompanionRoots {
  std::optional<cplx> upper;  // the root in the upper half plane, if any
  std::vector<double> real;   // genuine real roots
  int nonreal_count = 0;
};

CompanionRoots companion_roots(const LimitModel& m, double x, double y);

struct LiquidPoint {
  double x = 0.0;
  double y = 0.0;
  cplx zeta;
};

std::optional<LiquidPoint> zeta_map(const LimitModel& m, double x, double y);

// Boundary of the liquid slice at x: y-values where the companion equation has a
// genuine real double root, with that root.
struct SliceBoundary {
  double y = 0.0;
  double zeta = 0.0;
};

struct LiquidSlice {
  std::vector<SliceBoundary> boundary;              // sorted by y
  std::vector<std::pair<double, double>> intervals;  // liquid y-intervals (may be unbounded above)
};

LiquidSlice liquid_slice(const LimitModel& m, double x);

struct Gradient {
  double dH_dx = 0.0;
  double dH_dy = 0.0;
};

Gradient grad_H(const LimitModel& m, double x, double y);
double H(const LimitModel& m, double x, double y, double tol = 1e-7);

struct Proportions {
  double vert = 0.0;
  double left = 0.0;
  double right = 0.0;
};

Proportions local_proportions(const LimitModel& m, double x, double y);
Proportions proportions_from_zeta(const LimitModel& m, double x, cplx zeta);

// (1/2 pi i) \oint [G_<x G_>x]^{kt} dz / z.
MomentResult limit_moment(const LimitModel& m, double x, double kt, QuadratureOptions opt = {});

// \int H(x, y) e^{-kt y} dy, from the slope profile.
double H_exponential_moment(const LimitModel& m, double x, double kt, double tol = 1e-9);

}  // namespace mpp
