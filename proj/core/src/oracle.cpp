#include "mpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpp {

namespace {

// Neumaier summation.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

OracleResult exact_expectations(const SkewSupport& support, const WeightSpec& spec,
                                const std::vector<Observable>& observables, int cap,
                                EnumerationBudget budget) {
  std::vector<double> logw;
  std::vector<std::vector<double>> obs;
  enumerate_skew_pp(support, cap, [&](const SkewPlanePartition& pp) {
    logw.push_back(log_measure_weight(pp, spec));
    std::vector<double> row;
    for (const auto& o : observables) row.push_back(o(pp));
    obs.push_back(std::move(row));
  }, budget);
  // The empty filling has weight one, so the logs are relative to it already.
  Accumulator Z;
  std::vector<Accumulator> num(observables.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double w = std::exp(logw[i]);
    Z.add(w);
    for (std::size_t j = 0; j < observables.size(); ++j) num[j].add(w * obs[i][j]);
  }
  OracleResult res;
  res.cap = cap;
  res.configurations = static_cast<long>(logw.size());
  for (auto& a : num) res.values.push_back(a.value() / Z.value());
  const DiscreteBackWall wall = wall_from_support(support);
  if (summability_check(wall, spec).ok) {
    const double logZ = log_partition_function_exact(wall, spec);
    res.tail_mass = std::max(0.0, 1.0 - Z.value() * std::exp(-logZ));
  } else {
    res.tail_mass = std::numeric_limits<double>::infinity();
  }
  return res;
}

double exact_expectation(const SkewSupport& support, const WeightSpec& spec, const Observable& obs, int cap,
                         EnumerationBudget budget) {
  return exact_expectations(support, spec, {obs}, cap, budget).values.front();
}

CrosscheckResult distribution_crosscheck(const SkewSupport& support, const WeightSpec& spec, int cap,
                                         EnumerationBudget budget) {
  CrosscheckResult res;
  std::vector<double> l1, l2;
  enumerate_skew_pp(support, cap, [&](const SkewPlanePartition& pp) {
    l1.push_back(log_measure_weight(pp, spec));
    l2.push_back(std::log(measure_weight_via_coefficients(pp, spec)));
  }, budget);
  const double m1 = *std::max_element(l1.begin(), l1.end());
  const double m2 = *std::max_element(l2.begin(), l2.end());
  Accumulator z1, z2;
  for (std::size_t i = 0; i < l1.size(); ++i) {
    z1.add(std::exp(l1[i] - m1));
    z2.add(std::exp(l2[i] - m2));
  }
  const double lz1 = m1 + std::log(z1.value()), lz2 = m2 + std::log(z2.value());
  for (std::size_t i = 0; i < l1.size(); ++i) {
    const double d = std::abs(std::expm1((l1[i] - lz1) - (l2[i] - lz2)));
    res.max_discrepancy = std::max(res.max_discrepancy, d);
    res.rows.push_back({static_cast<long>(i), std::exp(l1[i]), std::exp(l2[i])});
  }
  return res;
}

std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  if (n <= 0) return out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int maxlabel) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int b = 0; b <= maxlabel + 1; ++b) {
      a[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(maxlabel, b));
    }
  };
  a[0] = 0;
  rec(1, 0);
  return out;
}

double cumulant(const CumulantRequest& req, const std::function<double(const std::vector<int>&)>& joint) {
  const int n = static_cast<int>(req.variables.size());
  if (n != req.order || n < 1) throw std::invalid_argument("cumulant: one variable per slot of the order");
  double total = 0.0;
  for (const auto& rgs : set_partitions(n)) {
    const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    double prod = 1.0;
    for (int b = 0; b < blocks; ++b) {
      std::vector<int> vars;
      for (int i = 0; i < n; ++i)
        if (rgs[static_cast<std::size_t>(i)] == b) vars.push_back(req.variables[static_cast<std::size_t>(i)]);
      prod *= joint(vars);
    }
    double coef = (blocks % 2 == 1) ? 1.0 : -1.0;
    for (int m = 2; m < blocks; ++m) coef *= m;
    total += coef * prod;
  }
  return total;
}

double sample_cumulant(const std::vector<std::vector<double>>& rows, const CumulantRequest& req) {
  if (rows.empty()) throw std::invalid_argument("sample_cumulant: no samples");
  const double n = static_cast<double>(rows.size());
  return cumulant(req, [&](const std::vector<int>& vars) {
    double s = 0.0;
    for (const auto& r : rows) {
      double p = 1.0;
      for (int v : vars) p *= r.at(static_cast<std::size_t>(v));
      s += p;
    }
    return s / n;
  });
}

}  // namespace mpp
