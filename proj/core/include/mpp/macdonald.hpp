#pragma once

#include <complex>
#include <vector>

#include "mpp/combinatorics.hpp"

namespace mpp {

struct WeightSpec {
  int p = 1;
  std::vector<double> s{1.0};
  double r = 0.5;
  double frak_t = 1.0;
  double alpha = 1.0;

  double t() const;
  double q() const;
  double epsilon() const;
  double s_at(int v) const;
  void validate() const;
  // Product of the period weights equals one.
  bool limit_regime(double tol = 1e-12) const;

  static WeightSpec schur(double r);
  // Builds (frak_t, alpha) from target (q, t) at fixed r.
  static WeightSpec from_qt(double q, double t, double r, std::vector<double> s = {1.0});
};

std::complex<double> qpochhammer(std::complex<double> a, double q, int n);
std::complex<double> qpochhammer_inf(std::complex<double> a, double q);
double log_qpochhammer_inf(double a, double q);

// (tu; q)_inf / (qu; q)_inf
double f_ratio(double u, double q, double t);
double log_f_ratio(double u, double q, double t);

// Zero when mu does not interlace lam.
double psi_coeff(const Partition& lam, const Partition& mu, double q, double t);
double phi_coeff(const Partition& lam, const Partition& mu, double q, double t);
double log_psi_coeff(const Partition& lam, const Partition& mu, double q, double t);
double log_phi_coeff(const Partition& lam, const Partition& mu, double q, double t);

double turn_weight(const SkewPlanePartition& pp, const Turn& turn, const WeightSpec& spec);

// Signed log turn-weight sum of one column, given its two neighbours and the
// bits of its two bounding edges.
double column_log_weight(const Partition& left, const Partition& mid, const Partition& right,
                         bool up_left, bool up_right, double alpha, double log_t);

double log_macdonald_weight(const SkewPlanePartition& pp, const WeightSpec& spec);
double macdonald_weight(const SkewPlanePartition& pp, const WeightSpec& spec);

double log_measure_weight(const SkewPlanePartition& pp, const WeightSpec& spec);
double measure_weight(const SkewPlanePartition& pp, const WeightSpec& spec);

// log a_e at e = k + 1/2, normalised as r^e times the running s-product.
double log_a(const WeightSpec& spec, int k);

double log_measure_weight_via_coefficients(const DiscreteBackWall& wall,
                                           const std::vector<Partition>& diagonals,
                                           const WeightSpec& spec);
double measure_weight_via_coefficients(const DiscreteBackWall& wall,
                                       const std::vector<Partition>& diagonals,
                                       const WeightSpec& spec);
double measure_weight_via_coefficients(const SkewPlanePartition& pp, const WeightSpec& spec);

struct SummabilityResult {
  bool ok = true;
  int k1 = 0;  // witness edges e1 = k1 + 1/2 < e2 = k2 + 1/2
  int k2 = 0;
  double ratio = 0.0;  // sup of a_{e1}^{-1} a_{e2} over (1,0) pairs
};

SummabilityResult summability_check(const DiscreteBackWall& wall, const WeightSpec& spec);

double log_partition_function_exact(const DiscreteBackWall& wall, const WeightSpec& spec);
double partition_function_exact(const DiscreteBackWall& wall, const WeightSpec& spec);

}  // namespace mpp
