#include "mpp/gff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace mpp {

namespace {

constexpr double kPi = std::numbers::pi;

std::pair<double, double> log_annulus(const LimitModel& m, double x) {
  const double lo = rho_less(m.wall(), m.S(), x), hi = rho_greater(m.wall(), m.S(), x);
  if (!(lo < hi * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << "x = " << x << " is singular: no circle separates the poles";
    throw std::domain_error(msg.str());
  }
  double l = lo > 0.0 ? std::log(lo) : -kInf, h = std::isfinite(hi) ? std::log(hi) : kInf;
  if (!std::isfinite(l) && !std::isfinite(h)) return {-2.0, 2.0};
  if (!std::isfinite(l)) l = h - 4.0;
  if (!std::isfinite(h)) h = l + 4.0;
  return {l, h};
}

// Integral of g(y) e^{-c y} over [lo, hi], hi possibly infinite.
template <class F>
double weighted_integral(F g, double c, double lo, double hi, double tol) {
  if (!(hi > lo)) return 0.0;
  const auto f = [&](double u) { return g(u) * std::exp(-c * (u - lo)); };
  double v = 0.0;
  if (std::isfinite(hi)) {
    boost::math::quadrature::tanh_sinh<double> ts;
    v = ts.integrate(f, lo, hi, tol);
  } else {
    boost::math::quadrature::exp_sinh<double> es;
    v = es.integrate([&](double t) { return f(lo + t); }, tol);
  }
  return v * std::exp(-c * lo);
}

}  // namespace

double gff_kernel(cplx z1, cplx z2) { return -std::log(std::abs((z1 - z2) / (z1 - std::conj(z2)))) / (2 * kPi); }

MomentResult limit_covariance_contour(const LimitModel& m, double x1, int k1, double x2, int k2, double frak_t,
                                      QuadratureOptions opt, std::vector<double> radii) {
  if (x1 > x2) {
    std::swap(x1, x2);
    std::swap(k1, k2);
  }
  const auto [l1, h1] = log_annulus(m, x1);
  const auto [l2, h2] = log_annulus(m, x2);
  auto placed = place_nested_radii({l1, l2}, {h1, h2}, 0.0);
  if (!(placed.margin > 0.0)) throw std::domain_error("contours touch: no room between the z- and w-circles");
  if (!radii.empty()) {
    const double lo1 = rho_less(m.wall(), m.S(), x1), hi1 = rho_greater(m.wall(), m.S(), x1);
    const double lo2 = rho_less(m.wall(), m.S(), x2), hi2 = rho_greater(m.wall(), m.S(), x2);
    if (radii.size() != 2 || !(radii[0] > lo1 && radii[0] < hi1 && radii[1] > lo2 && radii[1] < hi2 &&
                               radii[1] > radii[0]))
      throw std::domain_error("radii are not admissible for the nested contours");
    placed.radius = radii;
    placed.margin = std::min({std::log(radii[0] / std::max(lo1, 1e-300)), std::log(hi1 / radii[0]),
                              std::log(radii[1] / std::max(lo2, 1e-300)), std::log(hi2 / radii[1]),
                              std::log(radii[1] / radii[0])});
  }

  auto factors = [&](double x) {
    auto fs = m.less_factors(x);
    const auto g = m.greater_factors(x);
    fs.insert(fs.end(), g.begin(), g.end());
    return fs;
  };
  const auto f1 = factors(x1), f2 = factors(x2);
  const double e1 = k1 * frak_t, e2 = k2 * frak_t;
  TensorIntegrand T;
  T.radius = placed.radius;
  T.node = [&](int n, cplx z) {
    return n == 0 ? std::exp(e1 * log_factor_product(f1, z)) * z : std::exp(e2 * log_factor_product(f2, z)) * z;
  };
  T.pair = [](int, int, cplx z, cplx w) { return 1.0 / ((z - w) * (z - w)); };
  T.coupled = {{false, true}, {false, false}};
  const auto q = tensor_circle_average(T, opt);
  MomentResult res;
  res.value = k1 * k2 * q.value.real();
  res.imag = k1 * k2 * q.value.imag();
  res.points = q.points;
  res.last_change = q.last_change;
  res.converged = q.converged;
  res.radii = placed.radius;
  res.margin = placed.margin;
  return res;
}

double pullback_contour_factor(const LimitModel& m, double x1, int k1, double x2, int k2, double frak_t) {
  const double a = k1 * frak_t, b = k2 * frak_t;
  const double kkt = k1 * k2 * frak_t;
  return kPi * std::exp(-a * m.wall().B(x1) - b * m.wall().B(x2)) / (kkt * kkt);
}

double gff_pullback_covariance(const LimitModel& m, double x1, double a, double x2, double b, PullbackOptions opt) {
  const auto s1 = liquid_slice(m, x1), s2 = liquid_slice(m, x2);
  const bool same_x = x1 == x2;
  double total = 0.0;
  for (const auto& [lo1, hi1] : s1.intervals) {
    if (!std::isfinite(lo1)) throw std::domain_error("liquid slice unbounded below");
    const auto outer = [&](double y1) {
      const auto z1 = zeta_map(m, x1, y1);
      if (!z1) return 0.0;
      double inner = 0.0;
      for (const auto& [lo2, hi2] : s2.intervals) {
        const auto g = [&](double y2) {
          const auto z2 = zeta_map(m, x2, y2);
          if (!z2 || (same_x && y2 == y1)) return 0.0;
          return gff_kernel(z1->zeta, z2->zeta);
        };
        if (same_x && y1 > lo2 && y1 < hi2) {
          inner += weighted_integral(g, b, lo2, y1, opt.tolerance);
          inner += weighted_integral(g, b, y1, hi2, opt.tolerance);
        } else {
          inner += weighted_integral(g, b, lo2, hi2, opt.tolerance);
        }
      }
      return inner;
    };
    total += weighted_integral(outer, a, lo1, hi1, opt.tolerance);
  }
  return total;
}

CovarianceMatrix limit_covariance_matrix(const LimitModel& m, const std::vector<CovariancePoint>& pts, double frak_t,
                                         QuadratureOptions opt) {
  const std::size_t n = pts.size();
  CovarianceMatrix out;
  out.values.assign(n, std::vector<double>(n, 0.0));
  Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = limit_covariance_contour(m, pts[i].x, pts[i].k, pts[j].x, pts[j].k, frak_t, opt).value;
      out.values[i][j] = out.values[j][i] = v;
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  out.min_eigenvalue = n == 0 ? 0.0 : es.eigenvalues().minCoeff();
  return out;
}

PrelimitTable prelimit_covariance_convergence(const LimitModel& m, double x1, int k1, double x2, int k2, double frak_t,
                                              double alpha, const std::vector<double>& epsilons, double window_length) {
  PrelimitTable tab;
  tab.limit = limit_covariance_contour(m, x1, k1, x2, k2, frak_t).value;
  for (double eps : epsilons) {
    const auto w = discretize(m.wall(), m.s(), eps, {static_cast<int>(std::ceil(window_length / eps))});
    const WeightSpec spec{m.p(), m.s(), std::exp(-eps), frak_t, alpha};
    const int v1 = static_cast<int>(std::floor(x1 / eps)), v2 = static_cast<int>(std::floor(x2 / eps));
    const double raw = moment_covariance(w, spec, v1, k1, v2, k2) / (eps * eps);
    const double cov = raw / alpha;
    tab.rows.push_back({eps, raw, cov, std::abs(cov - tab.limit)});
  }
  double acc = 0.0;
  int cnt = 0;
  for (std::size_t i = 1; i < tab.rows.size(); ++i) {
    const double r = tab.rows[i - 1].error / tab.rows[i].error;
    const double h = tab.rows[i - 1].epsilon / tab.rows[i].epsilon;
    if (r > 0.0 && std::isfinite(r)) {
      acc += std::log(r) / std::log(h);
      ++cnt;
    }
  }
  tab.observed_order = cnt ? acc / cnt : 0.0;
  return tab;
}

}  // namespace mpp
