#include "mpp/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mpp {

QuadratureResult circle_average(const std::function<cplx(cplx)>& f, double R, QuadratureOptions opt) {
  QuadratureResult res;
  cplx prev;
  bool have_prev = false;
  for (int n = opt.initial_points; n <= opt.max_points; n *= 2) {
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) sum += f(std::polar(R, 2.0 * std::numbers::pi * j / n));
    const cplx val = sum / static_cast<double>(n);
    res.value = val;
    res.points = n;
    if (have_prev) {
      res.last_change = std::abs(val - prev);
      if (res.last_change < opt.tolerance * std::max(1.0, std::abs(val))) {
        res.converged = true;
        return res;
      }
    }
    prev = val;
    have_prev = true;
  }
  return res;
}

NestedRadii place_nested_radii(const std::vector<double>& lo, const std::vector<double>& hi, double gap) {
  const std::size_t K = lo.size();
  if (hi.size() != K || K == 0) throw std::invalid_argument("radius bounds must be nonempty and matched");
  auto greedy = [&](double m, std::vector<double>& L) -> std::ptrdiff_t {
    L.assign(K, 0.0);
    for (std::size_t n = 0; n < K; ++n) {
      L[n] = lo[n] + m;
      if (n > 0) L[n] = std::max(L[n], L[n - 1] + gap + m);
      if (L[n] > hi[n] - m) return static_cast<std::ptrdiff_t>(n);
    }
    return -1;
  };
  std::vector<double> L;
  const std::ptrdiff_t bad = greedy(0.0, L);
  if (bad >= 0) {
    std::ostringstream msg;
    msg << "nested contours infeasible between variables " << std::max<std::ptrdiff_t>(bad - 1, 0)
        << " and " << bad << ": need log-radius gap " << gap << " inside the pole-free annuli";
    throw std::domain_error(msg.str());
  }
  double a = 0.0, b = 0.0;
  for (std::size_t n = 0; n < K; ++n) b = (n == 0) ? (hi[n] - lo[n]) / 2 : std::min(b, (hi[n] - lo[n]) / 2);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    (greedy(m, L) < 0 ? a : b) = m;
  }
  greedy(a, L);
  NestedRadii out;
  out.margin = a;
  for (double l : L) out.radius.push_back(std::exp(l));
  return out;
}

namespace {

struct TensorEval {
  int K;
  int n;
  std::vector<std::vector<cplx>> node;                // node[a][j]
  std::vector<std::vector<std::vector<cplx>>> pair;   // pair[a][b][j*n+l], empty when uncoupled
  std::vector<int> idx;

  cplx run(int level, cplx partial) {
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
      cplx v = partial * node[static_cast<std::size_t>(level)][static_cast<std::size_t>(j)];
      for (int a = 0; a < level; ++a) {
        const auto& pm = pair[static_cast<std::size_t>(a)][static_cast<std::size_t>(level)];
        if (!pm.empty()) v *= pm[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]) * n + j];
      }
      if (level + 1 == K) {
        sum += v;
      } else {
        idx[static_cast<std::size_t>(level)] = j;
        sum += run(level + 1, v);
      }
    }
    return sum;
  }
};

}  // namespace

QuadratureResult tensor_circle_average(const TensorIntegrand& f, QuadratureOptions opt) {
  const int K = static_cast<int>(f.radius.size());
  QuadratureResult res;
  cplx prev;
  bool have_prev = false;
  for (int n = opt.initial_points; n <= opt.max_points; n *= 2) {
    if (std::pow(static_cast<double>(n), K) > static_cast<double>(opt.max_total_nodes)) break;
    TensorEval ev{K, n, {}, {}, std::vector<int>(static_cast<std::size_t>(K), 0)};
    std::vector<std::vector<cplx>> z(static_cast<std::size_t>(K));
    for (int a = 0; a < K; ++a) {
      for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(a)].push_back(std::polar(f.radius[static_cast<std::size_t>(a)], 2.0 * std::numbers::pi * j / n));
      std::vector<cplx> nv;
      for (const cplx& zz : z[static_cast<std::size_t>(a)]) nv.push_back(f.node(a, zz));
      ev.node.push_back(std::move(nv));
    }
    ev.pair.assign(static_cast<std::size_t>(K), std::vector<std::vector<cplx>>(static_cast<std::size_t>(K)));
    for (int a = 0; a < K; ++a)
      for (int b = a + 1; b < K; ++b) {
        if (!f.coupled[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
        auto& pm = ev.pair[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        pm.resize(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            pm[static_cast<std::size_t>(j) * n + l] = f.pair(a, b, z[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)], z[static_cast<std::size_t>(b)][static_cast<std::size_t>(l)]);
      }
    const cplx val = ev.run(0, 1.0) / std::pow(static_cast<double>(n), K);
    res.value = val;
    res.points = n;
    if (have_prev) {
      res.last_change = std::abs(val - prev);
      if (res.last_change < opt.tolerance * std::max(1.0, std::abs(val))) {
        res.converged = true;
        return res;
      }
    }
    prev = val;
    have_prev = true;
  }
  return res;
}

}  // namespace mpp
