#pragma once

#include <vector>

#include "mpp/limitshape.hpp"

namespace mpp {

// -(1/2pi) log|(z1 - z2)/(z1 - conj z2)|, the Dirichlet Green kernel of the upper half plane.
double gff_kernel(cplx z1, cplx z2);

// k1 k2 (2 pi i)^{-2} \oint\oint [G_<x1 G_>x1(z)]^{k1 t}[G_<x2 G_>x2(w)]^{k2 t} / (z - w)^2 dz dw,
// with the w-circle outside the z-circle. The arguments are reordered so that x1 <= x2.
// radii, when given as {R_z, R_w}, replaces the automatic placement and must be admissible.
MomentResult limit_covariance_contour(const LimitModel& m, double x1, int k1, double x2, int k2, double frak_t,
                                      QuadratureOptions opt = {}, std::vector<double> radii = {});

struct PullbackOptions {
  double tolerance = 1e-5;
};

// Integral of e^{-a y1 - b y2} gff_kernel(zeta(x1, y1), zeta(x2, y2)) over the two liquid slices.
double gff_pullback_covariance(const LimitModel& m, double x1, double a, double x2, double b,
                               PullbackOptions opt = {});

// pullback(x1, k1 t, x2, k2 t) = factor * contour(x1, k1, x2, k2, t).
double pullback_contour_factor(const LimitModel& m, double x1, int k1, double x2, int k2, double frak_t);

struct CovariancePoint {
  double x = 0.0;
  int k = 1;
};

struct CovarianceMatrix {
  std::vector<std::vector<double>> values;
  double min_eigenvalue = 0.0;
};

CovarianceMatrix limit_covariance_matrix(const LimitModel& m, const std::vector<CovariancePoint>& pts, double frak_t,
                                         QuadratureOptions opt = {});

struct PrelimitRow {
  double epsilon = 0.0;
  double raw = 0.0;    // Cov / epsilon^2 on the discretized wall
  double value = 0.0;  // raw / alpha, the quantity that tends to the contour value
  double error = 0.0;  // |value - limit|
};

struct PrelimitTable {
  double limit = 0.0;
  std::vector<PrelimitRow> rows;
  double observed_order = 0.0;  // log2 of successive error ratios, averaged
};

PrelimitTable prelimit_covariance_convergence(const LimitModel& m, double x1, int k1, double x2, int k2, double frak_t,
                                              double alpha, const std::vector<double>& epsilons,
                                              double window_length = 8.0);

}  // namespace mpp
