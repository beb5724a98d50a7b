#include "mpp/limitshape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "poly.hpp"

namespace mpp {

namespace {

using detail::Poly;
using detail::poly_from;
using detail::poly_roots;

constexpr double kPi = std::numbers::pi;

bool close_rel(double a, double b, double tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::vector<GFactor> merged(std::vector<GFactor> fs) {
  std::sort(fs.begin(), fs.end(), [](const GFactor& u, const GFactor& v) {
    return u.inverse != v.inverse ? u.inverse : u.a < v.a;
  });
  std::vector<GFactor> out;
  for (const auto& f : fs) {
    if (!out.empty() && out.back().inverse == f.inverse && close_rel(out.back().a, f.a, 1e-11))
      out.back().e += f.e;
    else
      out.push_back(f);
  }
  std::erase_if(out, [](const GFactor& f) { return std::abs(f.e) < 1e-9; });
  return out;
}

double wrap_2pi(double t) { return t - 2 * kPi * std::round(t / (2 * kPi)); }

// d/dz log G_x = (1/p)(n0/z + sum n_a/(z - a)).
template <class T>
T log_derivative(const RationalPower& rp, int p, T z) {
  T s = static_cast<double>(rp.n0) / z;
  for (const auto& [a, n] : rp.roots) s += static_cast<double>(n) / (z - a);
  return s / static_cast<double>(p);
}

bool near_junction(const RationalPower& rp, double z) {
  if (std::abs(z) < 1e-13) return true;
  for (const auto& [a, n] : rp.roots)
    if (std::abs(z - a) < 1e-11 * std::max(1.0, a)) return true;
  return false;
}

struct Segment {
  double lo = -kInf, hi = kInf;
  bool liquid = false;
  double dH_dy = 0.0, dH_dx = 0.0;  // constants on frozen segments
  double lo_limit = 0.0, hi_limit = 0.0;  // dH_dy limits at the ends of liquid segments
};

double frozen_dHdx(const LimitModel& m, double x, double zc) {
  if (zc <= 0.0) return 0.0;
  int count = 0;
  for (double tau : m.S().values) count += zc * tau * std::exp(-x) > 1.0;
  return -static_cast<double>(count) / m.p();
}

std::vector<Segment> segments(const LimitModel& m, double x, const LiquidSlice& slice) {
  const auto& b = slice.boundary;
  if (b.empty()) {
    std::ostringstream msg;
    msg << "no liquid slice at x = " << x;
    throw std::domain_error(msg.str());
  }
  std::vector<Segment> segs(b.size() + 1);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    segs[i].lo = i == 0 ? -kInf : b[i - 1].y;
    segs[i].hi = i == b.size() ? kInf : b[i].y;
    const double mid = i == 0 ? segs[i].hi - 1.0 : (i == b.size() ? segs[i].lo + 1.0 : 0.5 * (segs[i].lo + segs[i].hi));
    for (const auto& [lo, hi] : slice.intervals) segs[i].liquid = segs[i].liquid || (mid > lo && mid < hi);
  }
  auto limit = [](double zc) { return zc < 0.0 ? 0.0 : 1.0; };
  for (std::size_t i = 0; i < segs.size(); ++i) {
    auto& s = segs[i];
    if (s.liquid) {
      s.lo_limit = i > 0 ? limit(b[i - 1].zeta) : 0.0;
      s.hi_limit = i < b.size() ? limit(b[i].zeta) : 1.0;
      continue;
    }
    if (i == 0) continue;  // H vanishes below the slice
    // Take the constants from a boundary point that touches liquid.
    std::size_t ref = i - 1;
    if (!(i >= 2 && segs[i - 1].liquid) && i < b.size() && segs[i + 1].liquid) ref = i;
    s.dH_dy = limit(b[ref].zeta);
    s.dH_dx = frozen_dHdx(m, x, b[ref].zeta);
  }
  return segs;
}

double liquid_dHdy(const LimitModel& m, double x, double u, const Segment& s) {
  if (const auto z = zeta_map(m, x, u)) return 1.0 - std::arg(z->zeta) / kPi;
  // Numerically on the edge: use the nearer end limit.
  if (!std::isfinite(s.hi) || u - s.lo < s.hi - u) return s.lo_limit;
  return s.hi_limit;
}

}  // namespace

LimitModel::LimitModel(LimitBackWall bw, std::vector<double> s)
    : bw_(std::move(bw)), s_(std::move(s)), S_(SMultiset::from_s(s_)) {
  const auto rep = validate_limit_backwall(bw_, S_);
  if (!rep.member) {
    std::ostringstream msg;
    msg << "back wall is not admissible";
    if (!rep.structural.empty()) msg << ": " << rep.structural.front();
    throw std::invalid_argument(msg.str());
  }
  for (double sl : bw_.slopes) units_.push_back(static_cast<int>(std::lround(sl * S_.p)));
}

int LimitModel::units_before(int l) const { return l == 0 ? 0 : units_[static_cast<std::size_t>(l - 1)]; }
int LimitModel::units_after(int l) const { return l == bw_.pieces() ? S_.p : units_[static_cast<std::size_t>(l)]; }

int LimitModel::exponent_change(int l, int j) const {
  const int lo = static_cast<int>(std::lround(S_.varsigma[static_cast<std::size_t>(j - 1)] * S_.p));
  const int hi = static_cast<int>(std::lround(S_.varsigma[static_cast<std::size_t>(j)] * S_.p));
  int c = 0;
  for (int k = lo + 1; k <= hi; ++k) c += (k <= units_after(l)) - (k <= units_before(l));
  return c;
}

std::vector<double> LimitModel::junction_points(int l) const {
  const double V = bw_.kinks[static_cast<std::size_t>(l)];
  std::vector<double> out;
  for (int j = 1; j <= S_.d(); ++j) {
    if (exponent_change(l, j) == 0) continue;
    const double pt = V == -kInf ? 0.0 : (V == kInf ? kInf : std::exp(V) / S_.sigma[static_cast<std::size_t>(j - 1)]);
    if (out.empty() || !close_rel(out.back(), pt, 1e-13)) out.push_back(pt);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> LimitModel::junctions() const {
  std::vector<double> out;
  for (int l = 0; l <= bw_.pieces(); ++l) {
    const auto J = junction_points(l);
    out.insert(out.end(), J.begin(), J.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return a == b || close_rel(a, b, 1e-13); }),
            out.end());
  return out;
}

std::vector<GFactor> LimitModel::less_factors(double x) const {
  const double e = 1.0 / S_.p;
  std::vector<GFactor> fs;
  for (int l = 1; l <= bw_.pieces(); ++l) {
    const double lo = bw_.kinks[static_cast<std::size_t>(l - 1)], hi = bw_.kinks[static_cast<std::size_t>(l)];
    if (!(lo < x)) break;
    for (int k = 1; k <= units_[static_cast<std::size_t>(l - 1)]; ++k) {
      const double tau = S_.tau[static_cast<std::size_t>(k)];
      fs.push_back({std::exp(std::min(hi, x)) / tau, e, true});
      if (std::isfinite(lo)) fs.push_back({std::exp(lo) / tau, -e, true});
    }
  }
  return merged(std::move(fs));
}

std::vector<GFactor> LimitModel::greater_factors(double x) const {
  const double e = 1.0 / S_.p;
  std::vector<GFactor> fs;
  for (int l = bw_.pieces(); l >= 1; --l) {
    const double lo = bw_.kinks[static_cast<std::size_t>(l - 1)], hi = bw_.kinks[static_cast<std::size_t>(l)];
    if (!(hi > x)) break;
    for (int k = units_[static_cast<std::size_t>(l - 1)] + 1; k <= S_.p; ++k) {
      const double tau = S_.tau[static_cast<std::size_t>(k)];
      fs.push_back({std::exp(std::max(lo, x)) / tau, e, false});
      if (std::isfinite(hi)) fs.push_back({std::exp(hi) / tau, -e, false});
    }
  }
  return merged(std::move(fs));
}

RationalPower LimitModel::rational_power(double x) const {
  RationalPower rp;
  rp.log_K = -S_.p * bw_.B(x);
  auto fs = less_factors(x);
  const auto g = greater_factors(x);
  fs.insert(fs.end(), g.begin(), g.end());
  for (const auto& f : fs) {
    const int n = static_cast<int>(std::lround(f.e * S_.p));
    if (f.inverse) {
      rp.n0 -= n;
    } else {
      rp.log_K -= n * std::log(f.a);
      if (n % 2 != 0) rp.sign = -rp.sign;
    }
    auto it = std::find_if(rp.roots.begin(), rp.roots.end(), [&](const auto& r) { return close_rel(r.first, f.a, 1e-11); });
    if (it == rp.roots.end()) rp.roots.emplace_back(f.a, n);
    else it->second += n;
  }
  std::erase_if(rp.roots, [](const auto& r) { return r.second == 0; });
  std::sort(rp.roots.begin(), rp.roots.end());
  return rp;
}

cplx log_factor_product(const std::vector<GFactor>& fs, cplx z) {
  cplx s = 0.0;
  for (const auto& f : fs) s += f.e * std::log(f.inverse ? 1.0 - f.a / z : 1.0 - z / f.a);
  return s;
}

cplx script_G_less(const LimitModel& m, double x, cplx z) { return std::exp(log_factor_product(m.less_factors(x), z)); }
cplx script_G_greater(const LimitModel& m, double x, cplx z) {
  return std::exp(log_factor_product(m.greater_factors(x), z));
}

cplx log_script_G(const LimitModel& m, double x, cplx z) {
  if (z.imag() == 0.0) return log_script_G_real(m, x, z.real());
  return -m.wall().B(x) + log_factor_product(m.less_factors(x), z) + log_factor_product(m.greater_factors(x), z);
}

cplx script_G(const LimitModel& m, double x, cplx z) { return std::exp(log_script_G(m, x, z)); }

cplx log_script_G_real(const LimitModel& m, double x, double zeta) {
  double re = -m.wall().B(x), im = 0.0;
  auto add = [&](const std::vector<GFactor>& fs) {
    for (const auto& f : fs) {
      const double v = f.inverse ? 1.0 - f.a / zeta : 1.0 - zeta / f.a;
      if (v == 0.0 || !std::isfinite(v)) throw std::domain_error("evaluation at a branch point");
      re += f.e * std::log(std::abs(v));
      if (v < 0.0) im += f.e * (f.inverse ? kPi : -kPi);
    }
  };
  add(m.less_factors(x));
  add(m.greater_factors(x));
  return {re, im};
}

cplx log_P(const LimitModel& m, double x, cplx z) {
  cplx s = 0.0;
  for (double tau : m.S().values) s += std::log(1.0 - tau * std::exp(-x) * z);
  return s / static_cast<double>(m.p());
}

double arg_Q(const LimitModel& m, cplx z) {
  const auto& bw = m.wall();
  const auto& tau = m.S().tau;
  double s = 0.0;
  for (int l = 0; l <= bw.pieces(); ++l) {
    const double V = bw.kinks[static_cast<std::size_t>(l)];
    if (V == kInf) continue;
    for (int k = 1; k <= m.p(); ++k) {
      const int c = (k <= m.units_after(l)) - (k <= m.units_before(l));
      if (c == 0) continue;
      const cplx w = V == -kInf ? -tau[static_cast<std::size_t>(k)] * z : 1.0 - std::exp(-V) * tau[static_cast<std::size_t>(k)] * z;
      s += c * std::arg(w);
    }
  }
  return s / m.p();
}

CompanionRoots companion_roots(const LimitModel& m, double x, double y) {
  const auto rp = m.rational_power(x);
  const int p = m.p();
  std::vector<std::pair<double, int>> up, down;
  for (const auto& [a, n] : rp.roots) (n > 0 ? up : down).emplace_back(a, std::abs(n));
  Poly N = poly_from(up, std::max(rp.n0, 0));
  Poly D = poly_from(down, std::max(-rp.n0, 0));
  const double c = std::exp(-p * y - rp.log_K);
  Poly E(std::max(N.size(), D.size()), 0.0);
  for (std::size_t i = 0; i < N.size(); ++i) E[i] += rp.sign * N[i];
  for (std::size_t i = 0; i < D.size(); ++i) E[i] -= c * D[i];

  CompanionRoots out;
  std::vector<cplx> upper;
  for (cplx z : poly_roots(E)) {
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) > 1e-9 * scale) {
      if (z.imag() < 0.0) continue;
      cplx w = z;
      for (int it = 0; it < 40; ++it) {
        const cplx F = log_script_G(m, x, w) + y;
        const cplx step = F / log_derivative(rp, p, w);
        const cplx next = w - step;
        if (!(next.imag() > 0.0)) break;
        w = next;
        if (std::abs(step) < 1e-15 * scale) break;
      }
      const double res = std::abs(log_script_G(m, x, w) + y);
      if (res < 1e-8 * std::max(1.0, std::abs(y))) upper.push_back(w);
      continue;
    }
    double r = z.real();
    if (near_junction(rp, r)) continue;
    for (int it = 0; it < 40; ++it) {
      const double F = log_script_G_real(m, x, r).real() + y;
      const double step = F / log_derivative(rp, p, r);
      if (!std::isfinite(step) || near_junction(rp, r - step)) break;
      r -= step;
      if (std::abs(step) < 1e-15 * scale) break;
    }
    const cplx L = log_script_G_real(m, x, r);
    if (std::abs(L.real() + y) > 1e-7 * std::max(1.0, std::abs(y)) || std::abs(wrap_2pi(L.imag())) > 1e-7) continue;
    if (std::none_of(out.real.begin(), out.real.end(), [&](double q) { return std::abs(q - r) < 1e-10 * scale; }))
      out.real.push_back(r);
  }
  // A near-double root can surface as two nearby eigenvalues; keep one.
  std::sort(upper.begin(), upper.end(), [&](cplx u, cplx w) {
    return std::abs(log_script_G(m, x, u) + y) < std::abs(log_script_G(m, x, w) + y);
  });
  std::vector<cplx> distinct;
  for (cplx w : upper)
    if (std::none_of(distinct.begin(), distinct.end(), [&](cplx u) { return std::abs(u - w) < 1e-4 * std::max(1.0, std::abs(w)); }))
      distinct.push_back(w);
  if (distinct.size() > 1) {
    std::ostringstream msg;
    msg << "root filter is ambiguous at (" << x << ", " << y << "):";
    for (cplx w : distinct) msg << " " << w << " residual " << std::abs(log_script_G(m, x, w) + y);
    throw std::runtime_error(msg.str());
  }
  if (!distinct.empty()) {
    out.upper = distinct.front();
    out.nonreal_count = 2;
  }
  std::sort(out.real.begin(), out.real.end());
  return out;
}

std::optional<LiquidPoint> zeta_map(const LimitModel& m, double x, double y) {
  const auto r = companion_roots(m, x, y);
  if (!r.upper) return std::nullopt;
  return LiquidPoint{x, y, *r.upper};
}

LiquidSlice liquid_slice(const LimitModel& m, double x) {
  const auto rp = m.rational_power(x);
  const int p = m.p();
  // Critical points of log G: n0 prod(z - a) + z sum_a n_a prod_{b != a}(z - b) = 0.
  Poly C(rp.roots.size() + 1, 0.0);
  {
    std::vector<std::pair<double, int>> all;
    for (const auto& [a, n] : rp.roots) all.emplace_back(a, 1);
    const Poly full = poly_from(all, 0);
    for (std::size_t i = 0; i < full.size(); ++i) C[i] += rp.n0 * full[i];
    for (std::size_t j = 0; j < rp.roots.size(); ++j) {
      std::vector<std::pair<double, int>> rest;
      for (std::size_t k = 0; k < rp.roots.size(); ++k)
        if (k != j) rest.emplace_back(rp.roots[k].first, 1);
      const Poly part = poly_from(rest, 1);
      for (std::size_t i = 0; i < part.size(); ++i) C[i] += rp.roots[j].second * part[i];
    }
  }
  LiquidSlice slice;
  for (cplx z : poly_roots(C)) {
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) > 1e-7 * scale) continue;
    double r = z.real();
    for (int it = 0; it < 30; ++it) {
      double g = rp.n0 / r, dg = -rp.n0 / (r * r);
      for (const auto& [a, n] : rp.roots) {
        g += n / (r - a);
        dg -= n / ((r - a) * (r - a));
      }
      const double step = g / dg;
      if (!std::isfinite(step)) break;
      r -= step;
      if (std::abs(step) < 1e-15 * scale) break;
    }
    if (near_junction(rp, r)) continue;
    const cplx L = log_script_G_real(m, x, r);
    if (std::abs(wrap_2pi(L.imag())) > 1e-7) continue;
    const double yc = -L.real();
    if (std::none_of(slice.boundary.begin(), slice.boundary.end(),
                     [&](const SliceBoundary& b) { return std::abs(b.y - yc) < 1e-10 * std::max(1.0, std::abs(yc)); }))
      slice.boundary.push_back({yc, r});
  }
  std::sort(slice.boundary.begin(), slice.boundary.end(), [](const auto& a, const auto& b) { return a.y < b.y; });
  (void)p;
  const auto& b = slice.boundary;
  for (std::size_t i = 0; i <= b.size() && !b.empty(); ++i) {
    const double lo = i == 0 ? -kInf : b[i - 1].y;
    const double hi = i == b.size() ? kInf : b[i].y;
    const double mid = i == 0 ? hi - 1.0 : (i == b.size() ? lo + 1.0 : 0.5 * (lo + hi));
    if (!zeta_map(m, x, mid)) continue;
    if (!slice.intervals.empty() && slice.intervals.back().second == lo) slice.intervals.back().second = hi;
    else slice.intervals.emplace_back(lo, hi);
  }
  return slice;
}

Gradient grad_H(const LimitModel& m, double x, double y) {
  const double p = m.p();
  if (const auto z = zeta_map(m, x, y)) {
    Gradient g;
    g.dH_dy = 1.0 - std::arg(z->zeta) / kPi;
    for (double tau : m.S().values) g.dH_dx += std::arg(1.0 - tau * std::exp(-x) * z->zeta);
    g.dH_dx /= p * kPi;
    return g;
  }
  const auto slice = liquid_slice(m, x);
  for (const auto& s : segments(m, x, slice))
    if (y >= s.lo && y <= s.hi) return {s.dH_dx, s.dH_dy};
  return {};
}

double H(const LimitModel& m, double x, double y, double tol) {
  const auto slice = liquid_slice(m, x);
  const auto segs = segments(m, x, slice);
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  for (const auto& s : segs) {
    if (!(y > s.lo)) break;
    if (s.lo == -kInf) {
      if (s.liquid) throw std::domain_error("liquid slice unbounded below");
      continue;
    }
    const double hi = std::min(y, s.hi);
    if (!s.liquid) {
      total += s.dH_dy * (hi - s.lo);
      continue;
    }
    total += ts.integrate([&](double u) { return liquid_dHdy(m, x, u, s); }, s.lo, hi, tol);
  }
  return total;
}

double H_exponential_moment(const LimitModel& m, double x, double kt, double tol) {
  const auto slice = liquid_slice(m, x);
  const auto segs = segments(m, x, slice);
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  double total = 0.0;
  for (const auto& s : segs) {
    if (s.lo == -kInf) continue;
    if (!s.liquid) {
      const double upper = std::isfinite(s.hi) ? std::exp(-kt * s.hi) : 0.0;
      total += s.dH_dy * (std::exp(-kt * s.lo) - upper) / kt;
      continue;
    }
    // Shift so the weight is O(1) at the lower end.
    const auto f = [&](double u) { return liquid_dHdy(m, x, u, s) * std::exp(-kt * (u - s.lo)); };
    const double part = std::isfinite(s.hi) ? ts.integrate(f, s.lo, s.hi, tol)
                                            : es.integrate([&](double t) { return f(s.lo + t); }, tol);
    total += part * std::exp(-kt * s.lo);
  }
  return total / kt;
}

Proportions proportions_from_zeta(const LimitModel& m, double x, cplx zeta) {
  const cplx z = std::exp(-x) * zeta;
  Proportions pr;
  pr.vert = std::arg(z) / kPi;
  for (double tau : m.S().values) pr.left += std::abs(std::arg(1.0 - tau * z));
  pr.left /= m.p() * kPi;
  pr.right = 1.0 - pr.vert - pr.left;
  return pr;
}

Proportions local_proportions(const LimitModel& m, double x, double y) {
  const auto z = zeta_map(m, x, y);
  if (!z) {
    std::ostringstream msg;
    msg << "(" << x << ", " << y << ") is outside the liquid region";
    throw std::domain_error(msg.str());
  }
  return proportions_from_zeta(m, x, z->zeta);
}

MomentResult limit_moment(const LimitModel& m, double x, double kt, QuadratureOptions opt) {
  double lo = rho_less(m.wall(), m.S(), x), hi = rho_greater(m.wall(), m.S(), x);
  if (!(lo < hi * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << "x = " << x << " is singular: no circle separates the poles";
    throw std::domain_error(msg.str());
  }
  double R = 0.0;
  if (lo == 0.0 && hi == kInf) R = 1.0;
  else if (lo == 0.0) R = hi / 2;
  else if (hi == kInf) R = 2 * lo;
  else R = std::sqrt(lo * hi);
  auto fs = m.less_factors(x);
  const auto g = m.greater_factors(x);
  fs.insert(fs.end(), g.begin(), g.end());
  const auto q = circle_average([&](cplx z) { return std::exp(kt * log_factor_product(fs, z)); }, R, opt);
  MomentResult res;
  res.value = q.value.real();
  res.imag = q.value.imag();
  res.points = q.points;
  res.last_change = q.last_change;
  res.converged = q.converged;
  res.radii = {R};
  res.margin = std::log(hi / R);
  return res;
}

}  // namespace mpp
