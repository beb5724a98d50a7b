#include "mpp/backwall.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mpp {

namespace {

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

int slope_units(double slope, int p) {
  const double u = slope * p;
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-9 || r < 0 || r > p) {
    std::ostringstream msg;
    msg << "slope " << slope << " is not of the form i/" << p;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(r);
}

}  // namespace

SMultiset SMultiset::from_values(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("empty multiset");
  SMultiset S;
  S.p = static_cast<int>(values.size());
  S.values = values;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (double v : sorted) {
    if (!(v > 0.0)) throw std::invalid_argument("multiset values must be positive");
    if (!S.sigma.empty() && same_value(S.sigma.back(), v)) {
      ++S.multiplicity.back();
    } else {
      S.sigma.push_back(v);
      S.multiplicity.push_back(1);
    }
  }
  S.varsigma.push_back(0.0);
  int acc = 0;
  for (int m : S.multiplicity) {
    acc += m;
    S.varsigma.push_back(static_cast<double>(acc) / S.p);
  }
  S.tau.push_back(kInf);
  S.tau.insert(S.tau.end(), sorted.begin(), sorted.end());
  S.tau.push_back(0.0);
  return S;
}

SMultiset SMultiset::from_s(const std::vector<double>& s) {
  std::vector<double> prods;
  double acc = 1.0;
  for (double v : s) prods.push_back(acc *= v);
  return from_values(prods);
}

int SMultiset::class_of_value(double v) const {
  for (int j = 0; j < d(); ++j)
    if (same_value(sigma[static_cast<std::size_t>(j)], v)) return j + 1;
  throw std::invalid_argument("value is not in the multiset");
}

double LimitBackWall::slope_before(int l) const {
  return l == 0 ? 0.0 : slopes[static_cast<std::size_t>(l - 1)];
}

double LimitBackWall::slope_after(int l) const {
  return l == pieces() ? 1.0 : slopes[static_cast<std::size_t>(l)];
}

double LimitBackWall::slope_at(double x) const {
  for (int l = 1; l <= pieces(); ++l)
    if (x < kinks[static_cast<std::size_t>(l)]) return slopes[static_cast<std::size_t>(l - 1)];
  return slopes.back();
}

double LimitBackWall::B(double x) const {
  // Integrate the slope from the anchor.
  auto integral_from = [&](double a, double b) {
    double s = 0.0;
    for (int l = 1; l <= pieces(); ++l) {
      const double lo = std::max(a, kinks[static_cast<std::size_t>(l - 1)]);
      const double hi = std::min(b, kinks[static_cast<std::size_t>(l)]);
      if (hi > lo) s += slopes[static_cast<std::size_t>(l - 1)] * (hi - lo);
    }
    return s;
  };
  return x >= x0 ? b0 + integral_from(x0, x) : b0 - integral_from(x, x0);
}

void LimitBackWall::validate_structure(int p) const {
  if (kinks.size() < 2) throw std::invalid_argument("need at least two kinks");
  if (slopes.size() + 1 != kinks.size()) throw std::invalid_argument("need one slope per piece");
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i)
    if (!(kinks[i] < kinks[i + 1])) throw std::invalid_argument("kinks must be strictly increasing");
  for (std::size_t i = 1; i + 1 < kinks.size(); ++i)
    if (!std::isfinite(kinks[i])) throw std::invalid_argument("only the end kinks may be infinite");
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    slope_units(slopes[i], p);
    if (i > 0 && slopes[i] == slopes[i - 1])
      throw std::invalid_argument("consecutive slopes must differ");
  }
  if (!std::isfinite(x0) || x0 < kinks.front() || x0 > kinks.back())
    throw std::invalid_argument("anchor must lie in I");
}

LimitBackWall LimitBackWall::corner() { return LimitBackWall{{-kInf, 0.0, kInf}, {1.0, 0.0}, 0.0, 0.0}; }

MembershipReport validate_limit_backwall(const LimitBackWall& bw, const SMultiset& S) {
  MembershipReport rep;
  for (std::size_t i = 0; i + 1 < bw.kinks.size(); ++i)
    if (!(bw.kinks[i] < bw.kinks[i + 1])) throw std::invalid_argument("kinks must be strictly increasing");
  try {
    bw.validate_structure(S.p);
  } catch (const std::invalid_argument& e) {
    rep.member = false;
    rep.structural.emplace_back(e.what());
    return rep;
  }
  const int n = bw.pieces();
  for (int a = 0; a <= n; ++a) {
    const double V = bw.kinks[static_cast<std::size_t>(a)];
    if (!std::isfinite(V)) continue;
    const int i = slope_units(bw.slope_before(a), S.p);
    if (i == 0) continue;  // tau_0^{-1} = 0
    for (int b = a; b <= n; ++b) {
      const double W = bw.kinks[static_cast<std::size_t>(b)];
      if (!std::isfinite(W)) continue;
      const int j = slope_units(bw.slope_after(b), S.p);
      const double prod = S.tau[static_cast<std::size_t>(j + 1)] / S.tau[static_cast<std::size_t>(i)] *
                          std::exp(-(W - V));
      if (prod > 1.0 + 1e-12) {
        rep.member = false;
        rep.violations.push_back({V, W, prod});
      }
    }
  }
  return rep;
}

double rho_less(const LimitBackWall& bw, const SMultiset& S, double x) {
  double best = 0.0;
  for (int l = 1; l <= bw.pieces(); ++l) {
    if (!(bw.kinks[static_cast<std::size_t>(l - 1)] < x)) break;
    const int i = slope_units(bw.slopes[static_cast<std::size_t>(l - 1)], S.p);
    if (i == 0) continue;
    best = std::max(best, std::exp(std::min(x, bw.kinks[static_cast<std::size_t>(l)])) / S.tau[static_cast<std::size_t>(i)]);
  }
  return best;
}

double rho_greater(const LimitBackWall& bw, const SMultiset& S, double x) {
  double best = kInf;
  for (int l = bw.pieces(); l >= 1; --l) {
    if (!(bw.kinks[static_cast<std::size_t>(l)] > x)) break;
    const int i = slope_units(bw.slopes[static_cast<std::size_t>(l - 1)], S.p);
    if (i == S.p) continue;  // tau_{p+1} = 0
    best = std::min(best, std::exp(std::max(x, bw.kinks[static_cast<std::size_t>(l - 1)])) /
                              S.tau[static_cast<std::size_t>(i + 1)]);
  }
  return best;
}

bool is_regular(const LimitBackWall& bw, const SMultiset& S) {
  for (double sl : bw.slopes) {
    bool hit = false;
    for (double v : S.varsigma) hit = hit || std::abs(v - sl) < 1e-12;
    if (!hit) return false;
  }
  const int n = bw.pieces();
  for (int a = 0; a <= n; ++a) {
    const double V = bw.kinks[static_cast<std::size_t>(a)];
    if (!std::isfinite(V)) continue;
    for (int b = a + 1; b <= n; ++b) {
      const double W = bw.kinks[static_cast<std::size_t>(b)];
      if (!std::isfinite(W)) continue;
      const double lo = rho_less(bw, S, V);
      const double hi = rho_greater(bw, S, W);
      if (!(lo < hi * (1.0 - 1e-12))) return false;
    }
  }
  return true;
}

std::vector<double> singular_points(const LimitBackWall& bw, const SMultiset& S) {
  if (!validate_limit_backwall(bw, S).member || !is_regular(bw, S))
    throw std::domain_error("singular points need a regular wall; this one has a continuum");
  std::vector<double> out;
  for (int l = 1; l < bw.pieces(); ++l)
    if (bw.slope_after(l) < bw.slope_before(l)) out.push_back(bw.kinks[static_cast<std::size_t>(l)]);
  return out;
}

std::vector<int> slope_index_set(const SMultiset& S, int i) {
  std::vector<int> idx(static_cast<std::size_t>(S.p));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double va = S.values[static_cast<std::size_t>(a)], vb = S.values[static_cast<std::size_t>(b)];
    if (same_value(va, vb)) return false;
    return va > vb;
  });
  idx.resize(static_cast<std::size_t>(i));
  std::sort(idx.begin(), idx.end());
  return idx;
}

DiscreteBackWall discretize(const LimitBackWall& bw, const std::vector<double>& s, double eps,
                            DiscretizeOptions opt) {
  const SMultiset S = SMultiset::from_s(s);
  const auto rep = validate_limit_backwall(bw, S);
  if (!rep.member) {
    std::ostringstream msg;
    msg << "wall is not admissible for this weight multiset";
    if (!rep.structural.empty()) msg << ": " << rep.structural.front();
    for (const auto& v : rep.violations) msg << "; pair (" << v.V << ", " << v.W << ") gives " << v.product;
    throw std::domain_error(msg.str());
  }
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int window = opt.window > 0 ? opt.window : static_cast<int>(std::floor(1.0 / (eps * eps)));
  const int n = bw.pieces();
  std::vector<int> v(static_cast<std::size_t>(n + 1));
  for (int l = 0; l <= n; ++l) {
    const double V = bw.kinks[static_cast<std::size_t>(l)];
    if (V == -kInf) v[static_cast<std::size_t>(l)] = -window;
    else if (V == kInf) v[static_cast<std::size_t>(l)] = window;
    else v[static_cast<std::size_t>(l)] = static_cast<int>(std::floor(V / eps)) + l;
  }
  for (int l = 0; l < n; ++l)
    if (v[static_cast<std::size_t>(l + 1)] - v[static_cast<std::size_t>(l)] < S.p)
      throw std::domain_error("epsilon too coarse: a block holds less than one period");

  DiscreteBackWall w;
  w.v_min = v.front();
  w.v_max = v.back();
  for (int l = 1; l <= n; ++l) {
    const int i = slope_units(bw.slopes[static_cast<std::size_t>(l - 1)], S.p);
    const auto A = slope_index_set(S, i);
    for (int k = v[static_cast<std::size_t>(l - 1)]; k < v[static_cast<std::size_t>(l)]; ++k) {
      const int m = ((k % S.p) + S.p) % S.p;
      w.bits.push_back(std::binary_search(A.begin(), A.end(), m) ? 1 : 0);
    }
  }
  w.anchor_v = std::clamp(static_cast<int>(std::floor(bw.x0 / eps)), w.v_min, w.v_max);
  w.anchor_B = bw.B(w.anchor_v * eps) / eps;
  w.validate();
  return w;
}

LimitBackWall rescaled_profile(const LimitBackWall& bw, const DiscreteBackWall& w, double eps) {
  LimitBackWall out = bw;
  for (std::size_t l = 0; l < bw.kinks.size(); ++l) {
    const double V = bw.kinks[l];
    if (std::isfinite(V)) out.kinks[l] = eps * (std::floor(V / eps) + static_cast<double>(l));
  }
  out.x0 = eps * w.anchor_v;
  out.b0 = eps * w.anchor_B;
  return out;
}

}  // namespace mpp
