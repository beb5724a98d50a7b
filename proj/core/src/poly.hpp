#pragma once

#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

#include <unsupported/Eigen/Polynomials>

namespace mpp::detail {

using Poly = std::vector<double>;  // increasing powers

inline Poly poly_mul_root(const Poly& P, double a) {
  Poly out(P.size() + 1, 0.0);
  for (std::size_t i = 0; i < P.size(); ++i) {
    out[i + 1] += P[i];
    out[i] -= a * P[i];
  }
  return out;
}

inline Poly poly_from(const std::vector<std::pair<double, int>>& roots, int zero_power) {
  Poly P{1.0};
  for (int i = 0; i < zero_power; ++i) P = poly_mul_root(P, 0.0);
  for (const auto& [a, n] : roots)
    for (int i = 0; i < n; ++i) P = poly_mul_root(P, a);
  return P;
}

inline std::vector<std::complex<double>> poly_roots(Poly P) {
  const double scale = *std::max_element(P.begin(), P.end(), [](double u, double v) { return std::abs(u) < std::abs(v); });
  while (P.size() > 1 && std::abs(P.back()) <= 1e-14 * std::abs(scale)) P.pop_back();
  std::size_t lead_zeros = 0;
  while (lead_zeros + 1 < P.size() && P[lead_zeros] == 0.0) ++lead_zeros;
  std::vector<std::complex<double>> out(lead_zeros, std::complex<double>(0.0));
  P.erase(P.begin(), P.begin() + static_cast<std::ptrdiff_t>(lead_zeros));
  if (P.size() < 2) return out;
  Eigen::VectorXd c(static_cast<Eigen::Index>(P.size()));
  for (std::size_t i = 0; i < P.size(); ++i) c[static_cast<Eigen::Index>(i)] = P[i];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()[i]);
  return out;
}

}  // namespace mpp::detail
