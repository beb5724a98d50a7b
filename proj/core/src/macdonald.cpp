#include "mpp/macdonald.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mpp {

double WeightSpec::t() const { return std::pow(r, frak_t); }
double WeightSpec::q() const { return std::pow(t(), alpha); }
double WeightSpec::epsilon() const { return -std::log(r); }

double WeightSpec::s_at(int v) const {
  const int m = ((v % p) + p) % p;
  return s[static_cast<std::size_t>(m)];
}

void WeightSpec::validate() const {
  if (p < 1) throw std::invalid_argument("period p must be positive");
  if (static_cast<int>(s.size()) != p) throw std::invalid_argument("s must hold exactly p values");
  for (double v : s)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("s values must be positive");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0,1)");
  if (!(frak_t > 0.0)) throw std::invalid_argument("frak_t must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

bool WeightSpec::limit_regime(double tol) const {
  double lp = 0.0;
  for (double v : s) lp += std::log(v);
  return std::abs(lp) < tol;
}

WeightSpec WeightSpec::schur(double r) { return WeightSpec{1, {1.0}, r, 1.0, 1.0}; }

WeightSpec WeightSpec::from_qt(double q, double t, double r, std::vector<double> s) {
  WeightSpec w;
  w.p = static_cast<int>(s.size());
  w.s = std::move(s);
  w.r = r;
  w.frak_t = std::log(t) / std::log(r);
  w.alpha = std::log(q) / std::log(t);
  w.validate();
  return w;
}

std::complex<double> qpochhammer(std::complex<double> a, double q, int n) {
  std::complex<double> prod = 1.0;
  std::complex<double> term = a;
  for (int i = 0; i < n; ++i, term *= q) prod *= 1.0 - term;
  return prod;
}

std::complex<double> qpochhammer_inf(std::complex<double> a, double q) {
  if (!(std::abs(q) < 1.0)) throw std::domain_error("infinite q-Pochhammer needs |q| < 1");
  std::complex<double> prod = 1.0;
  std::complex<double> term = a;
  for (int i = 0;; ++i, term *= q) {
    if (i >= 8 && std::abs(term) < 1e-17) break;
    prod *= 1.0 - term;
  }
  return prod;
}

double log_qpochhammer_inf(double a, double q) {
  double s = 0.0;
  double term = a;
  for (int i = 0;; ++i, term *= q) {
    if (i >= 8 && std::abs(term) < 1e-17) break;
    s += std::log1p(-term);
  }
  return s;
}

double log_f_ratio(double u, double q, double t) {
  if (q == t) return 0.0;
  double s = 0.0;
  double qi = 1.0;
  for (int i = 0;; ++i, qi *= q) {
    const double num = t * u * qi;
    const double den = q * u * qi;
    if (i >= 8 && std::abs(num) < 1e-17 && std::abs(den) < 1e-17) break;
    if (std::abs(1.0 - den) < 1e-14) {
      std::ostringstream msg;
      msg << "f_ratio: denominator factor " << i << " vanishes (u = " << u << ")";
      throw std::domain_error(msg.str());
    }
    s += std::log(std::abs(1.0 - num)) - std::log(std::abs(1.0 - den));
  }
  return s;
}

double f_ratio(double u, double q, double t) {
  if (q == t) return 1.0;
  double prod = 1.0;
  double qi = 1.0;
  for (int i = 0;; ++i, qi *= q) {
    const double num = t * u * qi;
    const double den = q * u * qi;
    if (i >= 8 && std::abs(num) < 1e-17 && std::abs(den) < 1e-17) break;
    if (std::abs(1.0 - den) < 1e-14) {
      std::ostringstream msg;
      msg << "f_ratio: denominator factor " << i << " vanishes (u = " << u << ")";
      throw std::domain_error(msg.str());
    }
    prod *= (1.0 - num) / (1.0 - den);
  }
  return prod;
}

namespace {

double lf(int qexp, int texp, double q, double t) {
  return log_f_ratio(std::pow(q, qexp) * std::pow(t, texp), q, t);
}

}  // namespace

// Products run over 1 <= i <= j <= l(lam) for both coefficients.
double log_psi_coeff(const Partition& lam, const Partition& mu, double q, double t) {
  if (!interlaces(mu, lam)) return -std::numeric_limits<double>::infinity();
  if (q == t) return 0.0;
  const int L = lam.length();
  double s = 0.0;
  for (int i = 1; i <= L; ++i) {
    for (int j = i; j <= L; ++j) {
      const int d = j - i;
      s += lf(mu.part(i) - mu.part(j), d, q, t) + lf(lam.part(i) - lam.part(j + 1), d, q, t);
      s -= lf(lam.part(i) - mu.part(j), d, q, t) + lf(mu.part(i) - lam.part(j + 1), d, q, t);
    }
  }
  return s;
}

double log_phi_coeff(const Partition& lam, const Partition& mu, double q, double t) {
  if (!interlaces(mu, lam)) return -std::numeric_limits<double>::infinity();
  if (q == t) return 0.0;
  const int L = lam.length();
  double s = 0.0;
  for (int i = 1; i <= L; ++i) {
    for (int j = i; j <= L; ++j) {
      const int d = j - i;
      s += lf(lam.part(i) - lam.part(j), d, q, t) + lf(mu.part(i) - mu.part(j + 1), d, q, t);
      s -= lf(lam.part(i) - mu.part(j), d, q, t) + lf(mu.part(i) - lam.part(j + 1), d, q, t);
    }
  }
  return s;
}

double psi_coeff(const Partition& lam, const Partition& mu, double q, double t) {
  return std::exp(log_psi_coeff(lam, mu, q, t));
}

double phi_coeff(const Partition& lam, const Partition& mu, double q, double t) {
  return std::exp(log_phi_coeff(lam, mu, q, t));
}

namespace {

// Log weight of the turn at unit edge (gap, level) of a column with parts lam.
double log_turn_factor(const Partition& lam, int gap, int level, double alpha, double log_t) {
  // Differences of alpha-coordinates; the column offset B(x) cancels.
  const double y_minus = alpha * lam.part(gap + 1) - gap + (level - 1) * alpha;
  const double y_plus = y_minus + alpha;
  double s = 0.0;
  for (int j = 1; j <= gap; ++j) {
    const double Yj = alpha * lam.part(j) - j + 1;
    s += std::log1p(-std::exp(log_t * (Yj - y_plus))) - std::log1p(-std::exp(log_t * (Yj - 1 - y_minus)));
  }
  return s;
}

}  // namespace

double turn_weight(const SkewPlanePartition& pp, const Turn& turn, const WeightSpec& spec) {
  return std::exp(log_turn_factor(pp.diagonal(turn.x), turn.gap, turn.level, spec.alpha,
                                  std::log(spec.t())));
}

double column_log_weight(const Partition& A, const Partition& lam, const Partition& C, bool bl,
                         bool br, double alpha, double log_t) {
  if (alpha == 1.0) return 0.0;
  double s = 0.0;
  for (int i = 1; i <= lam.length(); ++i) {
    const int g = lam.part(i) - lam.part(i + 1);
    if (g == 0) continue;
    const int left_run = (bl ? A.part(i) : A.part(i + 1)) - lam.part(i + 1);
    const int right_run = (br ? C.part(i + 1) : C.part(i)) - lam.part(i + 1);
    for (int m = 1; m <= g; ++m) {
      const bool left_is_l = m <= left_run;
      const bool right_is_r = m <= right_run;
      if (left_is_l != right_is_r) continue;
      const double v = log_turn_factor(lam, i, m, alpha, log_t);
      s += left_is_l ? -v : v;
    }
  }
  return s;
}

double log_macdonald_weight(const SkewPlanePartition& pp, const WeightSpec& spec) {
  const auto& w = pp.wall();
  const double log_t = std::log(spec.t());
  double s = 0.0;
  for (int x = w.v_min + 1; x < w.v_max; ++x)
    s += column_log_weight(pp.diagonal(x - 1), pp.diagonal(x), pp.diagonal(x + 1), w.up(x - 1),
                           w.up(x), spec.alpha, log_t);
  return s;
}

double macdonald_weight(const SkewPlanePartition& pp, const WeightSpec& spec) {
  return std::exp(log_macdonald_weight(pp, spec));
}

double log_measure_weight(const SkewPlanePartition& pp, const WeightSpec& spec) {
  double s = log_macdonald_weight(pp, spec);
  const auto& w = pp.wall();
  const double lr = std::log(spec.r);
  for (int v = w.v_min + 1; v < w.v_max; ++v) {
    const long sz = pp.diagonal(v).size();
    if (sz) s += static_cast<double>(sz) * (lr + std::log(spec.s_at(v)));
  }
  return s;
}

double measure_weight(const SkewPlanePartition& pp, const WeightSpec& spec) {
  return std::exp(log_measure_weight(pp, spec));
}

double log_a(const WeightSpec& spec, int k) {
  double ls = 0.0;
  if (k >= 0) {
    for (int v = 0; v <= k; ++v) ls += std::log(spec.s_at(v));
  } else {
    for (int v = k + 1; v <= -1; ++v) ls -= std::log(spec.s_at(v));
  }
  return (k + 0.5) * std::log(spec.r) + ls;
}

namespace {

std::vector<double> log_a_table(const DiscreteBackWall& w, const WeightSpec& spec) {
  std::vector<double> la(static_cast<std::size_t>(w.edge_count()));
  la[0] = log_a(spec, w.v_min);
  const double lr = std::log(spec.r);
  for (int k = w.v_min + 1; k < w.v_max; ++k)
    la[static_cast<std::size_t>(k - w.v_min)] =
        la[static_cast<std::size_t>(k - 1 - w.v_min)] + lr + std::log(spec.s_at(k));
  return la;
}

}  // namespace

double log_measure_weight_via_coefficients(const DiscreteBackWall& w,
                                           const std::vector<Partition>& diags,
                                           const WeightSpec& spec) {
  if (static_cast<int>(diags.size()) != w.edge_count() - 1)
    throw std::invalid_argument("one partition per interior diagonal required");
  const Partition empty;
  auto D = [&](int v) -> const Partition& {
    return (v > w.v_min && v < w.v_max) ? diags[static_cast<std::size_t>(v - w.v_min - 1)] : empty;
  };
  const auto la = log_a_table(w, spec);
  const double q = spec.q(), t = spec.t();
  double s = 0.0;
  for (int k = w.v_min; k < w.v_max; ++k) {
    const Partition& lo = D(k);
    const Partition& hi = D(k + 1);
    const double lak = la[static_cast<std::size_t>(k - w.v_min)];
    const double c = w.up(k) ? log_psi_coeff(hi, lo, q, t) : log_phi_coeff(lo, hi, q, t);
    if (!std::isfinite(c)) return -std::numeric_limits<double>::infinity();
    s += c + lak * static_cast<double>(lo.size() - hi.size());
  }
  return s;
}

double measure_weight_via_coefficients(const DiscreteBackWall& w, const std::vector<Partition>& diags,
                                       const WeightSpec& spec) {
  return std::exp(log_measure_weight_via_coefficients(w, diags, spec));
}

double measure_weight_via_coefficients(const SkewPlanePartition& pp, const WeightSpec& spec) {
  return measure_weight_via_coefficients(pp.wall(), pp.diagonals(), spec);
}

SummabilityResult summability_check(const DiscreteBackWall& w, const WeightSpec& spec) {
  const auto la = log_a_table(w, spec);
  SummabilityResult res;
  bool seen_up = false;
  double best_neg = 0.0;  // max of -log a_{e1} over up edges seen so far
  int best_k = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = w.v_min; k < w.v_max; ++k) {
    const double l = la[static_cast<std::size_t>(k - w.v_min)];
    if (w.up(k)) {
      if (!seen_up || -l > best_neg) best_neg = -l, best_k = k;
      seen_up = true;
    } else if (seen_up && best_neg + l > worst) {
      worst = best_neg + l;
      res.k1 = best_k;
      res.k2 = k;
    }
  }
  if (std::isfinite(worst)) {
    res.ratio = std::exp(worst);
    res.ok = worst < 0.0;
  }
  return res;
}

double log_partition_function_exact(const DiscreteBackWall& w, const WeightSpec& spec) {
  const auto sc = summability_check(w, spec);
  if (!sc.ok) {
    std::ostringstream msg;
    msg << "partition function diverges: a_{e1}^{-1} a_{e2} = " << sc.ratio << " at e1 = "
        << sc.k1 << ".5, e2 = " << sc.k2 << ".5";
    throw std::domain_error(msg.str());
  }
  const auto la = log_a_table(w, spec);
  const double q = spec.q(), t = spec.t();
  double s = 0.0;
  for (int k1 = w.v_min; k1 < w.v_max; ++k1) {
    if (!w.up(k1)) continue;
    for (int k2 = k1 + 1; k2 < w.v_max; ++k2) {
      if (w.up(k2)) continue;
      const double xy = std::exp(la[static_cast<std::size_t>(k2 - w.v_min)] -
                                 la[static_cast<std::size_t>(k1 - w.v_min)]);
      s += log_qpochhammer_inf(t * xy, q) - log_qpochhammer_inf(xy, q);
    }
  }
  return s;
}

double partition_function_exact(const DiscreteBackWall& w, const WeightSpec& spec) {
  return std::exp(log_partition_function_exact(w, spec));
}

}  // namespace mpp
