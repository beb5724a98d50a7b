#include "mpp/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace mpp {

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) throw std::invalid_argument("partition parts must be nonnegative");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw std::invalid_argument("partition parts must be weakly decreasing");
  }
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

long Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0L); }

bool interlaces(const Partition& mu, const Partition& lam) {
  const int n = std::max(mu.length(), lam.length()) + 1;
  for (int i = 1; i <= n; ++i) {
    if (lam.part(i) < mu.part(i) || mu.part(i) < lam.part(i + 1)) return false;
  }
  return true;
}

void SkewSupport::validate() const {
  if (N < 1 || M < 1) throw std::invalid_argument("support needs N >= 1 and M >= 1");
  if (mu.length() > M || mu.part(1) > N) throw std::invalid_argument("mu must fit inside N^M");
  if (mu.part(M) >= N) throw std::invalid_argument("support has no cells");
}

int SkewSupport::cell_count() const { return N * M - static_cast<int>(mu.size()); }

bool SkewSupport::contains(int i, int j) const {
  return i >= 1 && i <= M && j > mu.part(i) && j <= N;
}

int SkewSupport::first_row(int d) const {
  int i = std::max(1, 1 - d);
  while (i <= M && i + d <= mu.part(i)) ++i;
  return i;
}

int SkewSupport::diagonal_length(int d) const {
  const int a = first_row(d);
  const int b = std::min(M, N - d);
  return std::max(0, b - a + 1);
}

double DiscreteBackWall::B(int v) const {
  double b = anchor_B;
  if (v >= anchor_v) {
    for (int k = anchor_v; k < v; ++k) b += up(k) ? 1.0 : 0.0;
  } else {
    for (int k = v; k < anchor_v; ++k) b -= up(k) ? 1.0 : 0.0;
  }
  return b;
}

void DiscreteBackWall::validate() const {
  if (v_max <= v_min) throw std::invalid_argument("wall needs v_min < v_max");
  if (static_cast<int>(bits.size()) != v_max - v_min)
    throw std::invalid_argument("wall needs one slope bit per half-integer edge");
  if (anchor_v < v_min || anchor_v > v_max) throw std::invalid_argument("wall anchor outside I");
}

DiscreteBackWall wall_from_support(const SkewSupport& s) {
  s.validate();
  DiscreteBackWall w;
  w.v_min = -s.M;
  w.v_max = s.N;
  w.anchor_v = -s.M;
  w.bits.assign(static_cast<std::size_t>(s.mu.part(s.M)), 0);
  for (int i = s.M; i >= 1; --i) {
    w.bits.push_back(1);
    const int above = (i == 1) ? s.N : s.mu.part(i - 1);
    w.bits.insert(w.bits.end(), static_cast<std::size_t>(above - s.mu.part(i)), 0);
  }
  return w;
}

SkewSupport support_from_wall(const DiscreteBackWall& w) {
  const int ones = static_cast<int>(std::count(w.bits.begin(), w.bits.end(), 1));
  const int zeros = w.edge_count() - ones;
  if (ones == 0 || zeros == 0) throw std::invalid_argument("wall has no cells");
  std::size_t k = 0;
  int run = 0;
  while (k < w.bits.size() && w.bits[k] == 0) ++run, ++k;
  std::vector<int> mu(static_cast<std::size_t>(ones), 0);
  int row = ones;
  mu[static_cast<std::size_t>(row - 1)] = run;
  while (k < w.bits.size()) {
    ++k;  // the up step of the current row
    int gap = 0;
    while (k < w.bits.size() && w.bits[k] == 0) ++gap, ++k;
    if (row > 1) mu[static_cast<std::size_t>(row - 2)] = mu[static_cast<std::size_t>(row - 1)] + gap;
    --row;
  }
  SkewSupport s{zeros, ones, Partition(mu)};
  s.validate();
  return s;
}

const Partition SkewPlanePartition::kEmpty{};

SkewPlanePartition::SkewPlanePartition(DiscreteBackWall wall, std::vector<Partition> diagonals)
    : wall_(std::move(wall)), diag_(std::move(diagonals)) {
  wall_.validate();
  if (static_cast<int>(diag_.size()) != wall_.edge_count() - 1)
    throw std::invalid_argument("one partition per interior diagonal required");
  for (int k = wall_.v_min; k < wall_.v_max; ++k) {
    const Partition& lo = diagonal(k);
    const Partition& hi = diagonal(k + 1);
    const bool ok = wall_.up(k) ? interlaces(lo, hi) : interlaces(hi, lo);
    if (!ok) {
      std::ostringstream msg;
      msg << "diagonals " << k << " and " << k + 1 << " do not interlace";
      throw std::invalid_argument(msg.str());
    }
  }
}

SkewPlanePartition SkewPlanePartition::empty(DiscreteBackWall wall) {
  const int n = wall.edge_count() - 1;
  return SkewPlanePartition(std::move(wall), std::vector<Partition>(static_cast<std::size_t>(n)));
}

SkewPlanePartition SkewPlanePartition::from_grid(const SkewSupport& s,
                                                 const std::vector<std::vector<int>>& rows) {
  s.validate();
  if (static_cast<int>(rows.size()) != s.M) throw std::invalid_argument("grid needs M rows");
  std::vector<Partition> diags;
  for (int d = -s.M + 1; d < s.N; ++d) {
    std::vector<int> parts;
    const int a = s.first_row(d);
    for (int i = a; i < a + s.diagonal_length(d); ++i) {
      const auto& row = rows[static_cast<std::size_t>(i - 1)];
      if (static_cast<int>(row.size()) != s.N - s.mu.part(i))
        throw std::invalid_argument("grid row length does not match the support");
      parts.push_back(row[static_cast<std::size_t>(i + d - s.mu.part(i) - 1)]);
    }
    diags.emplace_back(std::move(parts));
  }
  return SkewPlanePartition(wall_from_support(s), std::move(diags));
}

const Partition& SkewPlanePartition::diagonal(int v) const {
  if (!wall_.contains_diagonal(v)) return kEmpty;
  return diag_[static_cast<std::size_t>(v - wall_.v_min - 1)];
}

long SkewPlanePartition::volume() const {
  long s = 0;
  for (const auto& p : diag_) s += p.size();
  return s;
}

int SkewPlanePartition::entry(int i, int j) const {
  const SkewSupport s = support();
  if (!s.contains(i, j)) throw std::out_of_range("cell outside the support");
  const int d = j - i;
  const int v = d + wall_.v_min + s.M;
  return diagonal(v).part(i - s.first_row(d) + 1);
}

std::vector<std::vector<int>> SkewPlanePartition::grid() const {
  const SkewSupport s = support();
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(s.M));
  for (int i = 1; i <= s.M; ++i)
    for (int j = s.mu.part(i) + 1; j <= s.N; ++j) rows[static_cast<std::size_t>(i - 1)].push_back(entry(i, j));
  return rows;
}

std::vector<std::pair<int, Partition>> diagonal_sections(const SkewPlanePartition& pp) {
  std::vector<std::pair<int, Partition>> out;
  for (int v = pp.wall().v_min + 1; v < pp.wall().v_max; ++v) out.emplace_back(v, pp.diagonal(v));
  return out;
}

std::vector<Turn> turns(const SkewPlanePartition& pp, double alpha, int x, int top_window) {
  const DiscreteBackWall& w = pp.wall();
  if (!w.contains_diagonal(x)) throw std::domain_error("turns: x outside the interior diagonals");
  const Partition& A = pp.diagonal(x - 1);
  const Partition& lam = pp.diagonal(x);
  const Partition& C = pp.diagonal(x + 1);
  const bool bl = w.up(x - 1);
  const bool br = w.up(x);
  const double Bx = w.B(x);
  auto Y = [&](int i) { return alpha * lam.part(i) - i + 1 + Bx; };
  constexpr int kInf = std::numeric_limits<int>::max() / 2;

  std::vector<Turn> out;
  for (int i = 0; i <= lam.length(); ++i) {
    const int g = (i == 0) ? top_window - lam.part(1) : lam.part(i) - lam.part(i + 1);
    const int left_run = (bl ? (i == 0 ? kInf : A.part(i)) : A.part(i + 1)) - lam.part(i + 1);
    const int right_run = (br ? C.part(i + 1) : (i == 0 ? kInf : C.part(i))) - lam.part(i + 1);
    for (int m = 1; m <= g; ++m) {
      const bool left_is_l = m <= left_run;
      const bool right_is_r = m <= right_run;
      if (left_is_l != right_is_r) continue;
      Turn t;
      t.x = x;
      t.y_minus = Y(i + 1) + (m - 1) * alpha;
      t.y_plus = t.y_minus + alpha;
      t.kind = left_is_l ? TurnKind::internal : TurnKind::external;
      t.gap = i;
      t.level = m;
      out.push_back(t);
    }
  }
  return out;
}

double height_function(const SkewPlanePartition& pp, double alpha, int x, double y) {
  const DiscreteBackWall& w = pp.wall();
  if (x < w.v_min || x > w.v_max) throw std::domain_error("height_function: x outside I");
  const Partition& lam = pp.diagonal(x);
  const double Bx = w.B(x);
  double acc = y - Bx;
  for (int i = 1; i <= lam.length(); ++i) {
    const double Yi = alpha * lam.part(i) - i + 1 + Bx;
    acc += std::clamp(Yi - y, 0.0, 1.0);
  }
  acc += std::max(Bx - lam.length() - y, 0.0);
  return acc / alpha;
}

double height_exponential_moment(const SkewPlanePartition& pp, double alpha, double t, int x, int k) {
  if (!(t > 0.0 && t < 1.0) || k < 1) throw std::invalid_argument("need 0 < t < 1 and k >= 1");
  const Partition& lam = pp.diagonal(x);
  const double Bx = pp.wall().B(x);
  std::vector<double> br{Bx - lam.length(), Bx};
  for (int i = 1; i <= lam.length(); ++i) {
    const double Yi = alpha * lam.part(i) - i + 1 + Bx;
    br.push_back(Yi);
    br.push_back(Yi - 1.0);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const double c = -k * std::log(t);
  auto f = [&](double y) { return height_function(pp, alpha, x, y) * std::exp(-c * y); };
  using GL = boost::math::quadrature::gauss<double, 20>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) total += GL::integrate(f, br[i], br[i + 1]);
  // Above the last breakpoint h = (y - B)/alpha exactly.
  const double a = br.back();
  total += std::exp(-c * a) * ((a - Bx) / (alpha * c) + 1.0 / (alpha * c * c));
  return total;
}

namespace {

struct GridEnumerator {
  const SkewSupport& s;
  int cap;
  std::vector<std::pair<int, int>> cells;
  std::vector<std::vector<int>> rows;
  const std::function<void(const SkewPlanePartition&)>& visit;

  void run(std::size_t k) {
    if (k == cells.size()) {
      visit(SkewPlanePartition::from_grid(s, rows));
      return;
    }
    const auto [i, j] = cells[k];
    int hi = cap;
    if (s.contains(i - 1, j)) hi = std::min(hi, at(i - 1, j));
    if (s.contains(i, j - 1)) hi = std::min(hi, at(i, j - 1));
    for (int v = 0; v <= hi; ++v) {
      at(i, j) = v;
      run(k + 1);
    }
    at(i, j) = 0;
  }
  int& at(int i, int j) {
    return rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - s.mu.part(i) - 1)];
  }
};

}  // namespace

void enumerate_skew_pp(const SkewSupport& support, int height_cap,
                       const std::function<void(const SkewPlanePartition&)>& visit,
                       EnumerationBudget budget) {
  support.validate();
  if (height_cap < 0) throw std::invalid_argument("height cap must be nonnegative");
  const long load = static_cast<long>(support.cell_count()) * height_cap;
  if (load > budget.max_cells_times_cap) {
    const double estimate = std::pow(height_cap + 1.0, support.cell_count());
    std::ostringstream msg;
    msg << "enumeration budget exceeded: cells*cap = " << load << " > "
        << budget.max_cells_times_cap << ", up to " << estimate << " configurations";
    throw BudgetExceeded(msg.str(), estimate);
  }
  GridEnumerator e{support, height_cap, {}, {}, visit};
  for (int i = 1; i <= support.M; ++i) {
    e.rows.emplace_back(static_cast<std::size_t>(support.N - support.mu.part(i)), 0);
    for (int j = support.mu.part(i) + 1; j <= support.N; ++j) e.cells.emplace_back(i, j);
  }
  e.run(0);
}

std::vector<SkewPlanePartition> enumerate_skew_pp(const SkewSupport& support, int height_cap,
                                                  EnumerationBudget budget) {
  std::vector<SkewPlanePartition> out;
  enumerate_skew_pp(support, height_cap, [&](const SkewPlanePartition& pp) { out.push_back(pp); }, budget);
  return out;
}

}  // namespace mpp
