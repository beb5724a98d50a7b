#pragma once

#include <string>
#include <vector>

#include "mpp/limitshape.hpp"

namespace mpp {

struct FrozenPoint {
  double zeta = 0.0;
  double x = 0.0;
  double y = 0.0;
  int branch = 0;           // j with arg_+ Q(zeta) = -pi varsigma_j
  double residual = 0.0;    // double-root equation, scaled by zeta
};

// d/dzeta log Q from the kink exponent changes.
double Sigma(const LimitModel& m, double zeta);
// The same function written from the left end and from the right end of I.
double Sigma_left_form(const LimitModel& m, double zeta);
double Sigma_right_form(const LimitModel& m, double zeta);

// f(u) = (1/p) sum_sigma 1/(1 - u/sigma).
double f_weights(const LimitModel& m, double u);
// Inverse of f on the component E_j; returns kInf for w = 0 on E_0.
double invert_f(const LimitModel& m, double w, int j);

// Number of units of 1/p in -arg_+ Q(zeta) / pi.
int arg_Q_units(const LimitModel& m, double zeta);

FrozenPoint frozen_point(const LimitModel& m, double zeta);

enum class EndpointKind { Cusp, Tentacle, Unbounded };
std::string to_string(EndpointKind k);

struct FrozenSegment {
  int component = 0;
  double zeta_lo = 0.0;  // junction endpoints in the order traversed; kInf marks the point at infinity
  double zeta_hi = 0.0;
  EndpointKind lo_kind = EndpointKind::Cusp;
  EndpointKind hi_kind = EndpointKind::Cusp;
  std::vector<FrozenPoint> points;
};

struct Tentacle {
  double junction = 0.0;
  double x = 0.0;
  double extrapolation_error = 0.0;
};

struct FrozenOptions {
  int samples = 200;
  double x_min = -4.0, x_max = 4.0, y_min = -4.0, y_max = 4.0;
  double refine_fraction = 0.01;
  int max_points = 20000;
};

struct FrozenBoundary {
  std::vector<FrozenSegment> segments;
  std::vector<Tentacle> tentacles;
};

FrozenBoundary frozen_boundary(const LimitModel& m, FrozenOptions opt = {});

// Limit of x along the parametrization as zeta approaches the junction point.
Tentacle tentacle_limit(const LimitModel& m, double junction);

}  // namespace mpp
