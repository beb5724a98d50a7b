#include "mpp/frozen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "poly.hpp"

namespace mpp {

namespace {

constexpr double kPi = std::numbers::pi;

// One pole of Sigma: coefficient c/p at the point e^V / tau (0 for V = -inf).
struct Term {
  double point = 0.0;
  int c = 0;
};

std::vector<Term> sigma_terms(const LimitModel& m) {
  const auto& bw = m.wall();
  std::vector<Term> out;
  for (int l = 0; l <= bw.pieces(); ++l) {
    const double V = bw.kinks[static_cast<std::size_t>(l)];
    if (V == kInf) continue;
    for (int k = 1; k <= m.p(); ++k) {
      const int c = (k <= m.units_after(l)) - (k <= m.units_before(l));
      if (c != 0) out.push_back({V == -kInf ? 0.0 : std::exp(V) / m.S().tau[static_cast<std::size_t>(k)], c});
    }
  }
  return out;
}

bool hits(double zeta, double point) { return std::abs(zeta - point) <= 1e-14 * std::max(1.0, std::abs(point)); }

// 1/(zeta - e^V/tau) with the conventions for infinite V.
double h(double zeta, double V, double tau) {
  if (V == kInf) return 0.0;
  const double pt = V == -kInf ? 0.0 : std::exp(V) / tau;
  if (hits(zeta, pt)) throw std::domain_error("Sigma evaluated at a junction point");
  return 1.0 / (zeta - pt);
}

int branch_of_units(const LimitModel& m, int units) {
  const auto& vs = m.S().varsigma;
  for (std::size_t j = 0; j < vs.size(); ++j)
    if (std::lround(vs[j] * m.p()) == units) return static_cast<int>(j);
  throw std::domain_error("arg_+ Q does not match any varsigma; the wall is not regular");
}

double junction_theta(double J) { return J == kInf ? kPi / 2 : std::atan(J); }

EndpointKind kind_of(const LimitModel& m, const std::vector<Term>& terms, double J) {
  if (J == kInf || (J == 0.0 && m.wall().kinks.front() == -kInf)) return EndpointKind::Unbounded;
  int c = 0;
  for (const auto& t : terms)
    if (hits(J, t.point)) c += t.c;
  return c < 0 ? EndpointKind::Tentacle : EndpointKind::Cusp;
}

}  // namespace

std::string to_string(EndpointKind k) {
  switch (k) {
    case EndpointKind::Cusp: return "cusp";
    case EndpointKind::Tentacle: return "tentacle";
    case EndpointKind::Unbounded: return "unbounded";
  }
  return "?";
}

double Sigma(const LimitModel& m, double zeta) {
  double s = 0.0;
  for (const auto& t : sigma_terms(m)) {
    if (hits(zeta, t.point)) throw std::domain_error("Sigma evaluated at a junction point");
    s += t.c / (zeta - t.point);
  }
  return s / m.p();
}

double Sigma_left_form(const LimitModel& m, double zeta) {
  const auto& bw = m.wall();
  double s = 0.0;
  for (int k = 1; k <= m.p(); ++k) {
    const double tau = m.S().tau[static_cast<std::size_t>(k)];
    s += h(zeta, bw.kinks.front(), tau);
    for (int l = 1; l <= bw.pieces(); ++l)
      if (k > m.units_after(l - 1))
        s += h(zeta, bw.kinks[static_cast<std::size_t>(l)], tau) - h(zeta, bw.kinks[static_cast<std::size_t>(l - 1)], tau);
  }
  return s / m.p();
}

double Sigma_right_form(const LimitModel& m, double zeta) {
  const auto& bw = m.wall();
  double s = 0.0;
  for (int k = 1; k <= m.p(); ++k) {
    const double tau = m.S().tau[static_cast<std::size_t>(k)];
    s += h(zeta, bw.kinks.back(), tau);
    for (int l = 1; l <= bw.pieces(); ++l)
      if (k <= m.units_after(l - 1))
        s += h(zeta, bw.kinks[static_cast<std::size_t>(l - 1)], tau) - h(zeta, bw.kinks[static_cast<std::size_t>(l)], tau);
  }
  return s / m.p();
}

double f_weights(const LimitModel& m, double u) {
  double s = 0.0;
  for (double tau : m.S().values) s += 1.0 / (1.0 - u / tau);
  return s / m.p();
}

double invert_f(const LimitModel& m, double w, int j) {
  const auto& S = m.S();
  const int d = S.d();
  if (j < 0 || j > d) throw std::invalid_argument("branch index out of range");
  if (j == 0 && !(w < 1.0)) throw std::domain_error("phi_0 needs w < 1");
  if (j == d && !(w > 1.0)) throw std::domain_error("phi_d needs w > 1");
  if (j == 0 && w == 0.0) return kInf;
  auto inside = [&](double u) {
    if (j == 0) return u > S.sigma.front() || u < 0.0;
    if (j == d) return u > 0.0 && u < S.sigma.back();
    return u > S.sigma[static_cast<std::size_t>(j)] && u < S.sigma[static_cast<std::size_t>(j - 1)];
  };
  // sum_c m_c prod_{i != c} (1 - u/sigma_i) - p w prod_i (1 - u/sigma_i) = 0
  auto linear = [](const detail::Poly& P, double sigma) {
    detail::Poly out(P.size() + 1, 0.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
      out[i] += P[i];
      out[i + 1] -= P[i] / sigma;
    }
    return out;
  };
  detail::Poly E(static_cast<std::size_t>(d) + 1, 0.0);
  detail::Poly full{1.0};
  for (int i = 0; i < d; ++i) full = linear(full, S.sigma[static_cast<std::size_t>(i)]);
  for (std::size_t i = 0; i < full.size(); ++i) E[i] -= S.p * w * full[i];
  for (int c = 0; c < d; ++c) {
    detail::Poly part{1.0};
    for (int i = 0; i < d; ++i)
      if (i != c) part = linear(part, S.sigma[static_cast<std::size_t>(i)]);
    for (std::size_t i = 0; i < part.size(); ++i) E[i] += S.multiplicity[static_cast<std::size_t>(c)] * part[i];
  }
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& z : detail::poly_roots(E)) {
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) > 1e-6 * scale) continue;
    double u = z.real();
    for (int it = 0; it < 30; ++it) {
      double g = -w, dg = 0.0;
      for (double tau : S.values) {
        g += 1.0 / (1.0 - u / tau) / S.p;
        dg += 1.0 / (tau * (1.0 - u / tau) * (1.0 - u / tau)) / S.p;
      }
      const double step = g / dg;
      if (!std::isfinite(step)) break;
      u -= step;
      if (std::abs(step) < 1e-16 * scale) break;
    }
    if (inside(u)) best = u;
  }
  if (std::isnan(best)) {
    std::ostringstream msg;
    msg << "no preimage of " << w << " on component " << j;
    throw std::runtime_error(msg.str());
  }
  return best;
}

int arg_Q_units(const LimitModel& m, double zeta) {
  int units = 0;
  for (const auto& t : sigma_terms(m)) units += t.c * (zeta > t.point);
  return units;
}

FrozenPoint frozen_point(const LimitModel& m, double zeta) {
  const auto terms = sigma_terms(m);
  for (const auto& t : terms)
    if (hits(zeta, t.point)) throw std::domain_error("parameter lies in the junction set");
  const auto& tau = m.S().values;
  FrozenPoint fp;
  fp.zeta = zeta;
  if (zeta == 0.0) {
    double st = 0.0;
    for (double v : tau) st += v;
    const double s0 = Sigma(m, 0.0);
    fp.x = -std::log(-s0 * m.p() / st);
    fp.y = m.wall().B(m.wall().kinks.front());
    fp.branch = 0;
    fp.residual = std::abs(-std::exp(-fp.x) * st / m.p() - s0);
    return fp;
  }
  fp.branch = branch_of_units(m, arg_Q_units(m, zeta));
  const double sig = Sigma(m, zeta);
  const double u = invert_f(m, zeta * sig, fp.branch);
  const double ex = zeta * u;
  if (!(ex > 0.0) || !std::isfinite(ex)) throw std::domain_error("parametrization gives a non-positive e^x");
  fp.x = std::log(ex);
  double lhs = 0.0;
  for (double v : tau) lhs += 1.0 / (zeta - ex / v);
  fp.residual = std::abs(zeta * (lhs / m.p() - sig));
  const cplx L = log_script_G_real(m, fp.x, zeta);
  fp.y = -L.real();
  const double wrap = std::abs(L.imag() - 2 * kPi * std::round(L.imag() / (2 * kPi)));
  fp.residual = std::max(fp.residual, wrap);
  if (fp.residual > 1e-8) {
    std::ostringstream msg;
    msg << "double-root residual " << fp.residual << " at zeta = " << zeta << " on branch " << fp.branch;
    throw std::runtime_error(msg.str());
  }
  return fp;
}

Tentacle tentacle_limit(const LimitModel& m, double J) {
  auto richardson = [&](double sign) {
    const double h0 = 1e-3 * std::max(J, 1e-3);
    double x[3];
    for (int i = 0; i < 3; ++i) x[i] = frozen_point(m, J + sign * h0 / (1 << i)).x;
    const double r0 = 2 * x[1] - x[0], r1 = 2 * x[2] - x[1];
    return (4 * r1 - r0) / 3;
  };
  const double a = richardson(-1.0), b = richardson(1.0);
  return {J, 0.5 * (a + b), std::abs(a - b)};
}

FrozenBoundary frozen_boundary(const LimitModel& m, FrozenOptions opt) {
  const auto terms = sigma_terms(m);
  const auto J = m.junctions();
  if (J.empty()) throw std::domain_error("empty junction set");
  std::vector<double> th;
  for (double v : J) th.push_back(junction_theta(v));
  const double diag = std::hypot(opt.x_max - opt.x_min, opt.y_max - opt.y_min);
  const double thr = opt.refine_fraction * diag;
  auto clipped = [&](const FrozenPoint& p) {
    return std::pair{std::clamp(p.x, opt.x_min, opt.x_max), std::clamp(p.y, opt.y_min, opt.y_max)};
  };
  auto sample = [&](double t, std::vector<std::pair<double, FrozenPoint>>& out) {
    const double z = std::tan(t);
    try {
      out.emplace_back(t, frozen_point(m, z));
    } catch (const std::exception&) {
      // isolated parameters (e.g. w = 0 on E_0) are skipped
    }
  };

  FrozenBoundary fb;
  for (std::size_t i = 0; i < J.size(); ++i) {
    const double a = th[i];
    const double b = i + 1 < J.size() ? th[i + 1] : th.front() + kPi;
    FrozenSegment seg;
    seg.component = static_cast<int>(i);
    seg.zeta_lo = J[i];
    seg.zeta_hi = i + 1 < J.size() ? J[i + 1] : J.front();
    seg.lo_kind = kind_of(m, terms, seg.zeta_lo);
    seg.hi_kind = kind_of(m, terms, seg.zeta_hi);
    std::vector<std::pair<double, FrozenPoint>> pts;
    const int n = std::max(opt.samples, 4);
    for (int k = 1; k < n; ++k) sample(a + (b - a) * 0.5 * (1 - std::cos(kPi * k / n)), pts);
    bool changed = true;
    while (changed && static_cast<int>(pts.size()) < opt.max_points) {
      changed = false;
      std::vector<std::pair<double, FrozenPoint>> next;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        next.push_back(pts[k]);
        if (k + 1 == pts.size()) break;
        const auto [x0, y0] = clipped(pts[k].second);
        const auto [x1, y1] = clipped(pts[k + 1].second);
        if (std::hypot(x1 - x0, y1 - y0) > thr && pts[k + 1].first - pts[k].first > 1e-12) {
          const std::size_t before = next.size();
          sample(0.5 * (pts[k].first + pts[k + 1].first), next);
          changed = changed || next.size() > before;
        }
      }
      pts.swap(next);
    }
    for (auto& [t, p] : pts) seg.points.push_back(p);
    fb.segments.push_back(std::move(seg));
  }
  for (double v : J)
    if (kind_of(m, terms, v) == EndpointKind::Tentacle) fb.tentacles.push_back(tentacle_limit(m, v));
  return fb;
}

}  // namespace mpp
