#pragma once

#include <functional>
#include <vector>

#include "mpp/combinatorics.hpp"
#include "mpp/contour.hpp"
#include "mpp/macdonald.hpp"

namespace mpp {

double wp(int k, const Partition& lam, double q, double t);

class GFunctions {
 public:
  GFunctions(std::vector<double> less_a, std::vector<double> greater_a, double t);

  cplx less(cplx z) const;
  cplx greater(cplx z) const;
  cplx product(cplx z) const { return less(z) * greater(z); }
  std::vector<double> less_poles() const;     // 1/a_e, sorted
  std::vector<double> greater_poles() const;  // 1/(t a_e), sorted
  double rho_less() const;                    // 0 without poles
  double rho_greater() const;                 // inf without poles

 private:
  std::vector<double> la_, ga_;
  double t_;
};

GFunctions G_functions(const DiscreteBackWall& wall, const WeightSpec& spec, int x);

struct MomentResult {
  double value = 0.0;
  double imag = 0.0;
  int points = 0;
  double last_change = 0.0;
  bool converged = false;
  std::vector<double> radii;
  double margin = 0.0;
};

MomentResult moment_k1(const DiscreteBackWall& wall, const WeightSpec& spec, int x,
                       QuadratureOptions opt = {});

// E[prod_a wp_{k_a}(pi^{x_a})] with x sorted, k_a in {1, 2}, sum k_a <= 4.
MomentResult moment_multi(const DiscreteBackWall& wall, const WeightSpec& spec,
                          const std::vector<int>& xs, const std::vector<int>& ks,
                          QuadratureOptions opt = {});

// Covariance of wp_{k1}(pi^{x1}) and wp_{k2}(pi^{x2}), x1 <= x2.
double moment_covariance(const DiscreteBackWall& wall, const WeightSpec& spec, int x1, int k1,
                         int x2, int k2, QuadratureOptions opt = {});

using CFun = std::function<cplx(cplx)>;

struct DimensionReductionResult {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
};

// Nested k-fold integral against the reduced one-dimensional integral; radii
// must increase and lie in the annulus where f and the g_j are holomorphic.
DimensionReductionResult dimension_reduction_check(const CFun& f, const std::vector<CFun>& g, int k,
                                                   const std::vector<double>& radii,
                                                   QuadratureOptions opt = {});

}  // namespace mpp
