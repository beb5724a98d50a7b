#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace mpp {

using cplx = std::complex<double>;

struct ContourSpec {
  double center = 0.0;
  std::vector<double> radius;
  int points = 64;
};

struct QuadratureOptions {
  int initial_points = 64;
  int max_points = 1 << 16;
  long max_total_nodes = 1L << 27;
  double tolerance = 1e-10;
};

struct QuadratureResult {
  cplx value;
  int points = 0;
  double last_change = 0.0;
  bool converged = false;
};

// Mean of f over n equispaced nodes of |z| = R, doubled until the change falls
// under tolerance (relative to max(1, |value|)).
QuadratureResult circle_average(const std::function<cplx(cplx)>& f, double R, QuadratureOptions opt = {});

// Radii with log-bounds lo[n] < log R_n < hi[n] and log R_{n+1} - log R_n > gap,
// placed to maximise the smallest slack. Throws std::domain_error naming the
// first pair of variables whose constraints cannot be met.
struct NestedRadii {
  std::vector<double> radius;
  double margin = 0.0;
};
NestedRadii place_nested_radii(const std::vector<double>& log_lo, const std::vector<double>& log_hi, double gap);

// Tensor trapezoid integral of prod_n node_n(z_n) * prod_{a<b} pair_ab(z_a, z_b)
// averaged over the torus; node functions already include the z factor of dz/(2 pi i z).
struct TensorIntegrand {
  std::vector<double> radius;
  std::function<cplx(int, cplx)> node;
  std::function<cplx(int, int, cplx, cplx)> pair;  // may return 1
  std::vector<std::vector<bool>> coupled;           // coupled[a][b] for a < b
};
QuadratureResult tensor_circle_average(const TensorIntegrand& f, QuadratureOptions opt = {});

}  // namespace mpp
