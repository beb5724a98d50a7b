#include "mpp/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mpp {

double wp(int k, const Partition& lam, double q, double t) {
  if (k < 1) throw std::invalid_argument("wp needs k >= 1");
  double s = 0.0;
  for (int i = 1; i <= lam.length(); ++i) s += std::pow(q, k * lam.part(i)) * std::pow(t, k * (1 - i));
  return (1.0 - std::pow(t, -k)) * s + std::pow(t, -k * lam.length());
}

GFunctions::GFunctions(std::vector<double> less_a, std::vector<double> greater_a, double t)
    : la_(std::move(less_a)), ga_(std::move(greater_a)), t_(t) {}

cplx GFunctions::less(cplx z) const {
  cplx v = 1.0;
  for (double a : la_) {
    const cplx w = 1.0 / (a * z);
    v *= (1.0 - w / t_) / (1.0 - w);
  }
  return v;
}

cplx GFunctions::greater(cplx z) const {
  cplx v = 1.0;
  for (double a : ga_) v *= (1.0 - a * z) / (1.0 - t_ * a * z);
  return v;
}

std::vector<double> GFunctions::less_poles() const {
  std::vector<double> p;
  for (double a : la_) p.push_back(1.0 / a);
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<double> GFunctions::greater_poles() const {
  std::vector<double> p;
  for (double a : ga_) p.push_back(1.0 / (t_ * a));
  std::sort(p.begin(), p.end());
  return p;
}

double GFunctions::rho_less() const {
  const auto p = less_poles();
  return p.empty() ? 0.0 : p.back();
}

double GFunctions::rho_greater() const {
  const auto p = greater_poles();
  return p.empty() ? std::numeric_limits<double>::infinity() : p.front();
}

GFunctions G_functions(const DiscreteBackWall& w, const WeightSpec& spec, int x) {
  if (x < w.v_min || x > w.v_max) throw std::domain_error("G_functions: x outside I");
  std::vector<double> less, greater;
  double la = log_a(spec, w.v_min);
  const double lr = std::log(spec.r);
  for (int k = w.v_min; k < w.v_max; ++k) {
    if (k > w.v_min) la += lr + std::log(spec.s_at(k));
    if (k < x && w.up(k)) less.push_back(std::exp(la));
    if (k >= x && !w.up(k)) greater.push_back(std::exp(la));
  }
  return GFunctions(std::move(less), std::move(greater), spec.t());
}

namespace {

// Log bounds of the pole-free annulus, with synthetic bounds where a side has no poles.
std::pair<double, double> annulus(const GFunctions& g, double room) {
  const double lo = g.rho_less(), hi = g.rho_greater();
  if (lo > 0.0 && std::isfinite(hi)) return {std::log(lo), std::log(hi)};
  if (lo > 0.0) return {std::log(lo), std::log(lo) + room};
  if (std::isfinite(hi)) return {std::log(hi) - room, std::log(hi)};
  return {-room / 2, room / 2};
}

}  // namespace

MomentResult moment_k1(const DiscreteBackWall& w, const WeightSpec& spec, int x, QuadratureOptions opt) {
  const GFunctions g = G_functions(w, spec, x);
  if (g.rho_less() >= g.rho_greater()) {
    std::ostringstream msg;
    msg << "moment_k1: no contour separates the poles at x = " << x << " (rho_< = " << g.rho_less()
        << ", rho_> = " << g.rho_greater() << "); the k*frak_t separation condition fails";
    throw std::domain_error(msg.str());
  }
  const auto [lo, hi] = annulus(g, 8.0);
  MomentResult res;
  const double R = std::exp(0.5 * (lo + hi));
  const auto q = circle_average([&](cplx z) { return g.product(z); }, R, opt);
  res.value = q.value.real();
  res.imag = q.value.imag();
  res.points = q.points;
  res.last_change = q.last_change;
  res.converged = q.converged;
  res.radii = {R};
  res.margin = 0.5 * (hi - lo);
  return res;
}

MomentResult moment_multi(const DiscreteBackWall& w, const WeightSpec& spec, const std::vector<int>& xs,
                          const std::vector<int>& ks, QuadratureOptions opt) {
  if (xs.size() != ks.size() || xs.empty()) throw std::invalid_argument("moment_multi: xs and ks must match");
  if (!std::is_sorted(xs.begin(), xs.end())) throw std::invalid_argument("moment_multi: xs must be sorted");
  int K = 0;
  for (int k : ks) {
    if (k < 1 || k > 2) throw std::invalid_argument("moment_multi: each k must be 1 or 2");
    K += k;
  }
  if (K > 4) throw std::invalid_argument("moment_multi: total dimension above 4");

  const double t = spec.t(), q = spec.q(), qt = q / t;
  const double gap = -std::log(t);
  std::vector<GFunctions> gs;
  std::vector<int> group, first;  // per variable: group index, whether first in its group
  std::vector<double> lo, hi;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    gs.push_back(G_functions(w, spec, xs[a]));
    const auto [l, h] = annulus(gs.back(), 2.0 * (K * gap + 4.0));
    for (int i = 0; i < ks[a]; ++i) {
      group.push_back(static_cast<int>(a));
      first.push_back(i == 0);
      lo.push_back(l);
      hi.push_back(h);
    }
  }
  const NestedRadii radii = place_nested_radii(lo, hi, gap);

  TensorIntegrand f;
  f.radius = radii.radius;
  f.node = [&](int n, cplx z) {
    const int a = group[static_cast<std::size_t>(n)];
    const cplx G = gs[static_cast<std::size_t>(a)].product(z);
    return ks[static_cast<std::size_t>(a)] == 1 ? G : G * z;
  };
  f.pair = [&](int m, int n, cplx z, cplx wv) -> cplx {
    if (group[static_cast<std::size_t>(m)] == group[static_cast<std::size_t>(n)]) {
      return (1.0 / z + qt / wv) * (wv - z) / ((wv - z / t) * (wv - q * z));
    }
    const cplx u = z / wv;
    return (1.0 - qt * u) * (1.0 - u) / ((1.0 - q * u) * (1.0 - u / t));
  };
  f.coupled.assign(static_cast<std::size_t>(K), std::vector<bool>(static_cast<std::size_t>(K), true));

  if (K >= 3) opt.initial_points = std::min(opt.initial_points, 32);
  const auto qr = tensor_circle_average(f, opt);
  MomentResult res;
  res.value = qr.value.real();
  res.imag = qr.value.imag();
  res.points = qr.points;
  res.last_change = qr.last_change;
  res.converged = qr.converged;
  res.radii = radii.radius;
  res.margin = radii.margin;
  return res;
}

double moment_covariance(const DiscreteBackWall& w, const WeightSpec& spec, int x1, int k1, int x2, int k2,
                         QuadratureOptions opt) {
  if (x1 > x2) {
    std::swap(x1, x2);
    std::swap(k1, k2);
  }
  const double joint = moment_multi(w, spec, {x1, x2}, {k1, k2}, opt).value;
  const double m1 = moment_multi(w, spec, {x1}, {k1}, opt).value;
  const double m2 = moment_multi(w, spec, {x2}, {k2}, opt).value;
  return joint - m1 * m2;
}

DimensionReductionResult dimension_reduction_check(const CFun& f, const std::vector<CFun>& g, int k,
                                                   const std::vector<double>& radii, QuadratureOptions opt) {
  if (k < 1 || static_cast<int>(radii.size()) != k) throw std::invalid_argument("need one radius per variable");
  DimensionReductionResult res;
  const CFun reduced = [&](cplx v) {
    cplx val = std::pow(f(v), k) * v;
    for (const auto& gj : g) val *= gj(v);
    return val * std::pow(static_cast<double>(k), static_cast<double>(g.size()) - 1.0);
  };
  res.rhs = circle_average(reduced, radii.front(), opt).value;
  if (k == 1) {
    res.lhs = res.rhs;
    return res;
  }
  // The g-sums couple all variables, so the tensor is built by expanding them:
  // prod_j sum_i g_j(v_i) = sum over maps j -> i of prod_j g_j(v_{i(j)}).
  const int s = static_cast<int>(g.size());
  long maps = 1;
  for (int j = 0; j < s; ++j) maps *= k;
  cplx total = 0.0;
  for (long code = 0; code < maps; ++code) {
    std::vector<int> owner(static_cast<std::size_t>(s));
    long c = code;
    for (int j = 0; j < s; ++j, c /= k) owner[static_cast<std::size_t>(j)] = static_cast<int>(c % k);
    TensorIntegrand T;
    T.radius = radii;
    T.node = [&, owner](int n, cplx v) {
      cplx val = f(v) * v;
      for (int j = 0; j < s; ++j)
        if (owner[static_cast<std::size_t>(j)] == n) val *= g[static_cast<std::size_t>(j)](v);
      return val;
    };
    T.pair = [](int a, int b, cplx va, cplx vb) -> cplx { return b == a + 1 ? 1.0 / (vb - va) : 1.0; };
    T.coupled.assign(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(k), false));
    for (int a = 0; a + 1 < k; ++a) T.coupled[static_cast<std::size_t>(a)][static_cast<std::size_t>(a + 1)] = true;
    QuadratureOptions o = opt;
    if (k >= 3) o.initial_points = std::min(o.initial_points, 32);
    total += tensor_circle_average(T, o).value;
  }
  res.lhs = total;
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

}  // namespace mpp
