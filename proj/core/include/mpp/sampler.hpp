#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mpp/combinatorics.hpp"
#include "mpp/macdonald.hpp"
#include "mpp/oracle.hpp"

namespace mpp {

struct CubeMove {
  int i = 1;
  int j = 1;
  int delta = 1;  // +1 adds a cube, -1 removes one
  bool operator==(const CubeMove&) const = default;
};

// Addable and removable cells of the state, in row-major order, adds before removes per cell.
std::vector<CubeMove> available_moves(const SkewPlanePartition& pp);
SkewPlanePartition apply_move(const SkewPlanePartition& pp, CubeMove mv);

// log of w(pp') / w(pp) for pp' = apply_move(pp, mv), from the three affected columns only.
double log_weight_ratio(const SkewPlanePartition& pp, CubeMove mv, const WeightSpec& spec);
// Metropolis-Hastings acceptance for the uniform-corner proposal:
// min(1, w(pp')/w(pp) * n(pp)/n(pp')), n = number of available moves.
double acceptance_probability(const SkewPlanePartition& pp, CubeMove mv, const WeightSpec& spec);

using Rng = std::mt19937_64;
Rng make_rng(std::uint64_t seed, std::uint64_t chain);

// One proposal and accept/reject. Uses the same random stream as Chain::step.
SkewPlanePartition mcmc_step(const SkewPlanePartition& state, const WeightSpec& spec, Rng& rng);

// Incremental chain on a mutable grid.
class Chain {
 public:
  Chain(const SkewPlanePartition& start, WeightSpec spec, std::uint64_t seed, std::uint64_t chain = 0);

  bool step();
  void run(long n);

  SkewPlanePartition state() const;
  int entry(int i, int j) const { return g_[idx(i, j)]; }
  long volume() const { return volume_; }
  int move_count() const { return moves_; }
  double log_weight() const { return log_w_; }
  long proposals() const { return proposals_; }
  long accepts() const { return accepts_; }
  // Recompute the full weight after every accepted move and throw on a mismatch above 1e-10.
  void set_verify(bool on) { verify_ = on; }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (N_ + 2) + static_cast<std::size_t>(j); }
  bool can_add(int i, int j) const;
  bool can_remove(int i, int j) const;
  int local_moves(int i, int j) const;
  double column(int x) const;
  void set_part(int i, int j, int value);

  DiscreteBackWall wall_;
  SkewSupport support_;
  WeightSpec spec_;
  Rng rng_;
  int N_ = 0, M_ = 0;
  std::vector<int> g_;
  std::vector<std::pair<int, int>> cells_;
  std::vector<std::vector<int>> raw_;  // diagonal parts, zeros kept
  std::vector<Partition> diag_;
  std::vector<int> first_row_;
  double log_t_ = 0.0;
  double log_w_ = 0.0;
  long volume_ = 0;
  int moves_ = 0;
  long proposals_ = 0, accepts_ = 0;
  bool verify_ = false;
};

struct ChainConfig {
  std::uint64_t seed = 1;
  long burn_in = 1000;
  long steps = 10000;  // total steps including burn-in
  long thin = 1;
  DiscreteBackWall wall;
  WeightSpec spec;

  void validate() const;
};

struct ChainSamples {
  std::vector<std::vector<double>> rows;  // draws x observables
  double acceptance = 0.0;
};

struct SampleStats {
  std::vector<double> mean;
  std::vector<double> se;    // batch means, pooled over chains
  std::vector<double> rhat;  // split-chain Gelman-Rubin
  bool converged = true;     // every rhat <= 1.05
  std::vector<ChainSamples> chains;

  // All draws of all chains stacked.
  std::vector<std::vector<double>> pooled() const;
};

// Independent chains started from the empty configuration; threads = 0 uses the hardware count.
SampleStats run_chains(const ChainConfig& cfg, int n_chains, const std::vector<Observable>& observables,
                       int threads = 0);

double batch_means_se(const std::vector<double>& series, int batches = 0);
double split_rhat(const std::vector<std::vector<double>>& chains);

// epsilon * h(x, y / epsilon) at each y, one observable per grid point.
std::vector<Observable> height_observables(double alpha, int x, double epsilon, const std::vector<double>& y);

struct HeightProfile {
  std::vector<double> y;
  std::vector<double> mean;
  std::vector<double> se;
};

HeightProfile empirical_height_profile(const std::vector<SkewPlanePartition>& samples, double alpha, int x,
                                       double epsilon, const std::vector<double>& y);

struct CumulantEstimate {
  double value = 0.0;
  double se = 0.0;  // delete-one-block jackknife
};

std::vector<CumulantEstimate> empirical_cumulants(const std::vector<std::vector<double>>& rows,
                                                  const std::vector<CumulantRequest>& requests, int blocks = 20);

}  // namespace mpp
