#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpp {

class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<int> parts);
  explicit Partition(std::vector<int> parts);

  // 1-based access; zero outside the stored parts.
  int part(int i) const {
    return (i >= 1 && i <= static_cast<int>(parts_.size())) ? parts_[i - 1] : 0;
  }
  int length() const { return static_cast<int>(parts_.size()); }
  long size() const;
  bool empty() const { return parts_.empty(); }
  const std::vector<int>& parts() const { return parts_; }

  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

// mu ≺ lam : lam_i >= mu_i >= lam_{i+1} for all i.
bool interlaces(const Partition& mu, const Partition& lam);

struct SkewSupport {
  int N = 1;
  int M = 1;
  Partition mu;

  void validate() const;
  int cell_count() const;
  bool contains(int i, int j) const;
  // Diagonal d = j - i ranges over (-M, N).
  int first_row(int d) const;
  int diagonal_length(int d) const;
};

// Slope bits B'(k + 1/2) for integer k in [v_min, v_max).
struct DiscreteBackWall {
  int v_min = 0;
  int v_max = 0;
  std::vector<std::uint8_t> bits;
  int anchor_v = 0;
  double anchor_B = 0.0;

  int edge_count() const { return v_max - v_min; }
  bool up(int k) const { return bits.at(static_cast<std::size_t>(k - v_min)) != 0; }
  bool contains_diagonal(int v) const { return v > v_min && v < v_max; }
  double B(int v) const;
  void validate() const;
};

DiscreteBackWall wall_from_support(const SkewSupport& support);
SkewSupport support_from_wall(const DiscreteBackWall& wall);

class SkewPlanePartition {
 public:
  // Diagonals listed for v = v_min+1 .. v_max-1. Throws on broken interlacing.
  SkewPlanePartition(DiscreteBackWall wall, std::vector<Partition> diagonals);
  static SkewPlanePartition empty(DiscreteBackWall wall);
  // rows[i-1][c] holds pi_{i, mu_i + 1 + c}.
  static SkewPlanePartition from_grid(const SkewSupport& support,
                                      const std::vector<std::vector<int>>& rows);

  const DiscreteBackWall& wall() const { return wall_; }
  SkewSupport support() const { return support_from_wall(wall_); }
  // Empty partition outside the open interval (v_min, v_max).
  const Partition& diagonal(int v) const;
  const std::vector<Partition>& diagonals() const { return diag_; }
  long volume() const;
  std::vector<std::vector<int>> grid() const;
  int entry(int i, int j) const;

  bool operator==(const SkewPlanePartition& o) const { return diag_ == o.diag_; }

 private:
  DiscreteBackWall wall_;
  std::vector<Partition> diag_;
  static const Partition kEmpty;
};

std::vector<std::pair<int, Partition>> diagonal_sections(const SkewPlanePartition& pp);

enum class TurnKind { internal, external };

struct Turn {
  int x = 0;
  double y_minus = 0.0;
  double y_plus = 0.0;
  TurnKind kind = TurnKind::internal;
  int gap = 0;    // lozenge gap index; 0 is the region above the first lozenge
  int level = 0;  // 1-based position of the unit edge inside the gap
};

// Turns on diagonal x. Edges above the topmost horizontal lozenge are listed up
// to the height B(x) + alpha * top_window.
std::vector<Turn> turns(const SkewPlanePartition& pp, double alpha, int x, int top_window = 0);

double height_function(const SkewPlanePartition& pp, double alpha, int x, double y);

// Integral of h(x, y) t^{k y} dy over the real line.
double height_exponential_moment(const SkewPlanePartition& pp, double alpha, double t, int x, int k);

struct EnumerationBudget {
  long max_cells_times_cap = 256;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

void enumerate_skew_pp(const SkewSupport& support, int height_cap,
                       const std::function<void(const SkewPlanePartition&)>& visit,
                       EnumerationBudget budget = {});
std::vector<SkewPlanePartition> enumerate_skew_pp(const SkewSupport& support, int height_cap,
                                                  EnumerationBudget budget = {});

}  // namespace mpp
