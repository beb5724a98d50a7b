#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mpp/combinatorics.hpp"
#include "mpp/macdonald.hpp"

namespace mpp {

using Observable = std::function<double(const SkewPlanePartition&)>;

struct OracleResult {
  std::vector<double> values;  // one per observable
  double tail_mass = 0.0;      // probability mass above the height cap
  long configurations = 0;
  int cap = 0;
};

OracleResult exact_expectations(const SkewSupport& support, const WeightSpec& spec,
                                const std::vector<Observable>& observables, int cap,
                                EnumerationBudget budget = {});
double exact_expectation(const SkewSupport& support, const WeightSpec& spec, const Observable& obs,
                         int cap, EnumerationBudget budget = {});

struct CrosscheckRow {
  long id = 0;
  double weight_turns = 0.0;
  double weight_coefficients = 0.0;
};

struct CrosscheckResult {
  double max_discrepancy = 0.0;
  std::vector<CrosscheckRow> rows;
};

CrosscheckResult distribution_crosscheck(const SkewSupport& support, const WeightSpec& spec, int cap,
                                         EnumerationBudget budget = {});

// Restricted growth strings of length n; block labels start at 0.
std::vector<std::vector<int>> set_partitions(int n);

struct CumulantRequest {
  int order = 1;
  std::vector<int> variables;  // indices into the caller's variable list, one per slot
};

// Cumulant from joint moments; joint(indices) returns E[prod of the listed variables].
double cumulant(const CumulantRequest& req, const std::function<double(const std::vector<int>&)>& joint);

// Plug-in cumulant from sample rows (rows = draws, columns = variables).
double sample_cumulant(const std::vector<std::vector<double>>& rows, const CumulantRequest& req);

}  // namespace mpp
