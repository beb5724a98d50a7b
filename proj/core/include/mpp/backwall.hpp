#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mpp/combinatorics.hpp"

namespace mpp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SMultiset {
  int p = 1;
  std::vector<double> values;    // s_0...s_i for i = 0..p-1
  std::vector<double> sigma;     // distinct values, decreasing (1-based in formulas)
  std::vector<int> multiplicity;
  std::vector<double> varsigma;  // varsigma[0] = 0, ..., varsigma[d] = 1
  std::vector<double> tau;       // tau[0] = inf, tau[1..p] decreasing, tau[p+1] = 0

  static SMultiset from_s(const std::vector<double>& s);
  static SMultiset from_values(const std::vector<double>& values);

  int d() const { return static_cast<int>(sigma.size()); }
  // 1-based class index j with sigma_j equal to the given product.
  int class_of_value(double v) const;
  // varsigma of the class holding sigma_j.
  double varsigma_at(int j) const { return varsigma[static_cast<std::size_t>(j)]; }
};

struct LimitBackWall {
  std::vector<double> kinks;   // V_0 < ... < V_n; ends may be infinite
  std::vector<double> slopes;  // slopes[l-1] on (V_{l-1}, V_l)
  double x0 = 0.0;
  double b0 = 0.0;

  int pieces() const { return static_cast<int>(slopes.size()); }
  // Slope just left / right of kink index l with the boundary conventions.
  double slope_before(int l) const;
  double slope_after(int l) const;
  double slope_at(double x) const;
  double B(double x) const;
  void validate_structure(int p) const;

  static LimitBackWall corner();
};

struct WallViolation {
  double V = 0.0;
  double W = 0.0;
  double product = 0.0;
};

struct MembershipReport {
  bool member = true;
  std::vector<std::string> structural;
  std::vector<WallViolation> violations;
};

MembershipReport validate_limit_backwall(const LimitBackWall& bw, const SMultiset& S);
bool is_regular(const LimitBackWall& bw, const SMultiset& S);
double rho_less(const LimitBackWall& bw, const SMultiset& S, double x);
double rho_greater(const LimitBackWall& bw, const SMultiset& S, double x);
std::vector<double> singular_points(const LimitBackWall& bw, const SMultiset& S);

struct DiscretizeOptions {
  // Replaces the +-floor(1/eps^2) window for infinite ends when positive.
  int window = 0;
};

// Block indices picked for slope i/p: the i largest prefix products, lowest index first on ties.
std::vector<int> slope_index_set(const SMultiset& S, int i);

DiscreteBackWall discretize(const LimitBackWall& bw, const std::vector<double>& s, double epsilon,
                            DiscretizeOptions opt = {});

// The limit wall with its finite kinks moved to epsilon * v_l and its anchor to the discrete
// anchor, i.e. the piecewise linear profile traced by epsilon * B(v) of discretize(bw, s, epsilon).
LimitBackWall rescaled_profile(const LimitBackWall& bw, const DiscreteBackWall& w, double epsilon);

}  // namespace mpp
