#include "mpp/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mpp {

namespace {

constexpr int kTop = std::numeric_limits<int>::max() / 2;

struct GridView {
  const SkewSupport& s;
  const std::vector<std::vector<int>>& rows;
  int at(int i, int j) const {
    if (!s.contains(i, j)) return (i > s.M || j > s.N) ? 0 : kTop;
    return rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - s.mu.part(i) - 1)];
  }
  bool can_add(int i, int j) const { return at(i - 1, j) > at(i, j) && at(i, j - 1) > at(i, j); }
  bool can_remove(int i, int j) const {
    const int v = at(i, j);
    return v > 0 && at(i + 1, j) < v && at(i, j + 1) < v;
  }
};

std::vector<std::pair<int, int>> support_cells(const SkewSupport& s) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= s.M; ++i)
    for (int j = s.mu.part(i) + 1; j <= s.N; ++j) out.emplace_back(i, j);
  return out;
}

int diagonal_of(const DiscreteBackWall& w, const SkewSupport& s, int i, int j) { return j - i + w.v_min + s.M; }

double column_at(const DiscreteBackWall& w, const std::function<const Partition&(int)>& diag, int x, double alpha,
                 double log_t) {
  if (!w.contains_diagonal(x)) return 0.0;
  return column_log_weight(diag(x - 1), diag(x), diag(x + 1), w.up(x - 1), w.up(x), alpha, log_t);
}

CubeMove draw_move(std::size_t cells, Rng& rng) {
  std::uniform_int_distribution<std::size_t> u(0, 2 * cells - 1);
  const std::size_t k = u(rng);
  return {static_cast<int>(k / 2), 0, (k % 2 == 0) ? 1 : -1};  // i holds the cell index until resolved
}

}  // namespace

std::vector<CubeMove> available_moves(const SkewPlanePartition& pp) {
  const SkewSupport s = pp.support();
  const auto rows = pp.grid();
  const GridView g{s, rows};
  std::vector<CubeMove> out;
  for (const auto& [i, j] : support_cells(s)) {
    if (g.can_add(i, j)) out.push_back({i, j, 1});
    if (g.can_remove(i, j)) out.push_back({i, j, -1});
  }
  return out;
}

SkewPlanePartition apply_move(const SkewPlanePartition& pp, CubeMove mv) {
  const SkewSupport s = pp.support();
  auto rows = pp.grid();
  const GridView g{s, rows};
  if (!s.contains(mv.i, mv.j)) throw std::out_of_range("move outside the support");
  if (mv.delta == 1 ? !g.can_add(mv.i, mv.j) : !g.can_remove(mv.i, mv.j))
    throw std::invalid_argument("move breaks the plane partition order");
  rows[static_cast<std::size_t>(mv.i - 1)][static_cast<std::size_t>(mv.j - s.mu.part(mv.i) - 1)] += mv.delta;
  auto out = SkewPlanePartition::from_grid(s, rows);
  return SkewPlanePartition(pp.wall(), out.diagonals());
}

double log_weight_ratio(const SkewPlanePartition& pp, CubeMove mv, const WeightSpec& spec) {
  const auto& w = pp.wall();
  const SkewSupport s = pp.support();
  const int v = diagonal_of(w, s, mv.i, mv.j);
  double lr = mv.delta * (std::log(spec.r) + std::log(spec.s_at(v)));
  if (spec.alpha == 1.0) return lr;
  const auto next = apply_move(pp, mv);
  const double log_t = std::log(spec.t());
  const std::function<const Partition&(int)> d0 = [&](int x) -> const Partition& { return pp.diagonal(x); };
  const std::function<const Partition&(int)> d1 = [&](int x) -> const Partition& { return next.diagonal(x); };
  for (int x = v - 1; x <= v + 1; ++x)
    lr += column_at(w, d1, x, spec.alpha, log_t) - column_at(w, d0, x, spec.alpha, log_t);
  return lr;
}

double acceptance_probability(const SkewPlanePartition& pp, CubeMove mv, const WeightSpec& spec) {
  const double n0 = static_cast<double>(available_moves(pp).size());
  const double n1 = static_cast<double>(available_moves(apply_move(pp, mv)).size());
  return std::min(1.0, std::exp(log_weight_ratio(pp, mv, spec)) * n0 / n1);
}

Rng make_rng(std::uint64_t seed, std::uint64_t chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chain), static_cast<std::uint32_t>(chain >> 32)};
  return Rng(seq);
}

SkewPlanePartition mcmc_step(const SkewPlanePartition& state, const WeightSpec& spec, Rng& rng) {
  const SkewSupport s = state.support();
  const auto cells = support_cells(s);
  const auto rows = state.grid();
  const GridView g{s, rows};
  CubeMove mv;
  for (;;) {
    mv = draw_move(cells.size(), rng);
    const auto [i, j] = cells[static_cast<std::size_t>(mv.i)];
    mv.i = i;
    mv.j = j;
    if (mv.delta == 1 ? g.can_add(i, j) : g.can_remove(i, j)) break;
  }
  const double a = acceptance_probability(state, mv, spec);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < a ? apply_move(state, mv) : state;
}

Chain::Chain(const SkewPlanePartition& start, WeightSpec spec, std::uint64_t seed, std::uint64_t chain)
    : wall_(start.wall()), support_(start.support()), spec_(std::move(spec)), rng_(make_rng(seed, chain)) {
  spec_.validate();
  N_ = support_.N;
  M_ = support_.M;
  g_.assign(static_cast<std::size_t>(M_ + 2) * static_cast<std::size_t>(N_ + 2), 0);
  for (int i = 0; i <= M_ + 1; ++i)
    for (int j = 0; j <= N_ + 1; ++j) {
      if (support_.contains(i, j)) g_[idx(i, j)] = start.entry(i, j);
      else g_[idx(i, j)] = (i > M_ || j > N_) ? 0 : kTop;
    }
  cells_ = support_cells(support_);
  const int nd = wall_.edge_count() - 1;
  raw_.resize(static_cast<std::size_t>(nd));
  diag_.resize(static_cast<std::size_t>(nd));
  first_row_.resize(static_cast<std::size_t>(nd));
  for (int v = wall_.v_min + 1; v < wall_.v_max; ++v) {
    const std::size_t k = static_cast<std::size_t>(v - wall_.v_min - 1);
    const int d = v - wall_.v_min - M_;
    first_row_[k] = support_.first_row(d);
    raw_[k].assign(static_cast<std::size_t>(support_.diagonal_length(d)), 0);
    for (std::size_t a = 0; a < raw_[k].size(); ++a) {
      const int i = first_row_[k] + static_cast<int>(a);
      raw_[k][a] = g_[idx(i, i + d)];
    }
    diag_[k] = Partition(raw_[k]);
  }
  log_t_ = std::log(spec_.t());
  log_w_ = log_measure_weight(start, spec_);
  volume_ = start.volume();
  for (const auto& [i, j] : cells_) moves_ += can_add(i, j) + can_remove(i, j);
}

bool Chain::can_add(int i, int j) const {
  const int v = g_[idx(i, j)];
  return g_[idx(i - 1, j)] > v && g_[idx(i, j - 1)] > v;
}

bool Chain::can_remove(int i, int j) const {
  const int v = g_[idx(i, j)];
  return v > 0 && g_[idx(i + 1, j)] < v && g_[idx(i, j + 1)] < v;
}

int Chain::local_moves(int i, int j) const {
  int n = 0;
  const auto count = [&](int a, int b) {
    if (support_.contains(a, b)) n += can_add(a, b) + can_remove(a, b);
  };
  count(i, j);
  count(i - 1, j);
  count(i + 1, j);
  count(i, j - 1);
  count(i, j + 1);
  return n;
}

double Chain::column(int x) const {
  if (!wall_.contains_diagonal(x)) return 0.0;
  const auto d = [&](int v) -> const Partition& {
    static const Partition empty;
    return wall_.contains_diagonal(v) ? diag_[static_cast<std::size_t>(v - wall_.v_min - 1)] : empty;
  };
  return column_log_weight(d(x - 1), d(x), d(x + 1), wall_.up(x - 1), wall_.up(x), spec_.alpha, log_t_);
}

void Chain::set_part(int i, int j, int value) {
  g_[idx(i, j)] = value;
  const int v = diagonal_of(wall_, support_, i, j);
  const std::size_t k = static_cast<std::size_t>(v - wall_.v_min - 1);
  raw_[k][static_cast<std::size_t>(i - first_row_[k])] = value;
  if (spec_.alpha != 1.0) diag_[k] = Partition(raw_[k]);
}

bool Chain::step() {
  ++proposals_;
  CubeMove mv;
  for (;;) {
    mv = draw_move(cells_.size(), rng_);
    const auto [i, j] = cells_[static_cast<std::size_t>(mv.i)];
    mv.i = i;
    mv.j = j;
    if (mv.delta == 1 ? can_add(i, j) : can_remove(i, j)) break;
  }
  const int v = diagonal_of(wall_, support_, mv.i, mv.j);
  double lr = mv.delta * (std::log(spec_.r) + std::log(spec_.s_at(v)));
  const bool mac = spec_.alpha != 1.0;
  double before = 0.0;
  if (mac)
    for (int x = v - 1; x <= v + 1; ++x) before += column(x);
  const int old_local = local_moves(mv.i, mv.j);
  const int old_value = g_[idx(mv.i, mv.j)];
  set_part(mv.i, mv.j, old_value + mv.delta);
  const int n1 = moves_ - old_local + local_moves(mv.i, mv.j);
  if (mac) {
    double after = 0.0;
    for (int x = v - 1; x <= v + 1; ++x) after += column(x);
    lr += after - before;
  }
  const double a = std::min(1.0, std::exp(lr) * moves_ / n1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng_) < a) {
    ++accepts_;
    moves_ = n1;
    log_w_ += lr;
    volume_ += mv.delta;
    if (verify_) {
      const double full = log_measure_weight(state(), spec_);
      if (std::abs(full - log_w_) > 1e-10 * std::max(1.0, std::abs(full))) {
        std::ostringstream msg;
        msg << "incremental weight drifted: " << log_w_ << " vs " << full;
        throw std::logic_error(msg.str());
      }
    }
    return true;
  }
  set_part(mv.i, mv.j, old_value);
  return false;
}

void Chain::run(long n) {
  for (long k = 0; k < n; ++k) step();
}

SkewPlanePartition Chain::state() const {
  std::vector<Partition> d;
  d.reserve(raw_.size());
  for (const auto& r : raw_) d.emplace_back(r);
  return SkewPlanePartition(wall_, std::move(d));
}

void ChainConfig::validate() const {
  if (burn_in < 0 || steps <= burn_in) throw std::invalid_argument("chain config needs steps > burn_in >= 0");
  if (thin < 1) throw std::invalid_argument("chain config needs thin >= 1");
  wall.validate();
  spec.validate();
}

std::vector<std::vector<double>> SampleStats::pooled() const {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) out.insert(out.end(), c.rows.begin(), c.rows.end());
  return out;
}

double batch_means_se(const std::vector<double>& series, int batches) {
  const std::size_t n = series.size();
  if (n < 4) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t B = batches > 1 ? static_cast<std::size_t>(batches)
                                    : std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(double(n))));
  const std::size_t b = n / B;
  if (b == 0) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> m(B, 0.0);
  for (std::size_t k = 0; k < B; ++k) {
    for (std::size_t a = 0; a < b; ++a) m[k] += series[k * b + a];
    m[k] /= static_cast<double>(b);
  }
  const double mean = std::accumulate(m.begin(), m.end(), 0.0) / static_cast<double>(B);
  double var = 0.0;
  for (double x : m) var += (x - mean) * (x - mean);
  var /= static_cast<double>(B - 1);
  return std::sqrt(var / static_cast<double>(B));
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> parts;
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) n = std::min(n, c.size() / 2);
  if (chains.empty() || n < 2) return std::numeric_limits<double>::quiet_NaN();
  for (const auto& c : chains) {
    parts.emplace_back(c.begin(), c.begin() + static_cast<long>(n));
    parts.emplace_back(c.begin() + static_cast<long>(n), c.begin() + static_cast<long>(2 * n));
  }
  const double m = static_cast<double>(parts.size());
  std::vector<double> means, vars;
  for (const auto& p : parts) {
    const double mu = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(n);
    double v = 0.0;
    for (double x : p) v += (x - mu) * (x - mu);
    means.push_back(mu);
    vars.push_back(v / static_cast<double>(n - 1));
  }
  const double W = std::accumulate(vars.begin(), vars.end(), 0.0) / m;
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double Bn = 0.0;
  for (double mu : means) Bn += (mu - grand) * (mu - grand);
  Bn /= (m - 1);
  if (W == 0.0) return Bn == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  return std::sqrt(((nn - 1) / nn * W + Bn) / W);
}

SampleStats run_chains(const ChainConfig& cfg, int n_chains, const std::vector<Observable>& observables,
                       int threads) {
  cfg.validate();
  if (n_chains < 1) throw std::invalid_argument("need at least one chain");
  SampleStats st;
  st.chains.resize(static_cast<std::size_t>(n_chains));
  const auto start = SkewPlanePartition::empty(cfg.wall);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int c = next++; c < n_chains; c = next++) {
      Chain ch(start, cfg.spec, cfg.seed, static_cast<std::uint64_t>(c));
      ch.run(cfg.burn_in);
      auto& out = st.chains[static_cast<std::size_t>(c)];
      for (long t = 1; t <= cfg.steps - cfg.burn_in; ++t) {
        ch.step();
        if (t % cfg.thin) continue;
        const auto pp = ch.state();
        std::vector<double> row;
        row.reserve(observables.size());
        for (const auto& f : observables) row.push_back(f(pp));
        out.rows.push_back(std::move(row));
      }
      out.acceptance = static_cast<double>(ch.accepts()) / static_cast<double>(ch.proposals());
    }
  };
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min(nt, n_chains);
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::size_t K = observables.size();
  st.mean.assign(K, 0.0);
  st.se.assign(K, 0.0);
  st.rhat.assign(K, 1.0);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<std::vector<double>> series;
    double se2 = 0.0;
    for (const auto& c : st.chains) {
      std::vector<double> s;
      s.reserve(c.rows.size());
      for (const auto& r : c.rows) s.push_back(r[k]);
      st.mean[k] += std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
      const double e = batch_means_se(s);
      se2 += e * e;
      series.push_back(std::move(s));
    }
    st.mean[k] /= n_chains;
    st.se[k] = std::sqrt(se2) / n_chains;
    st.rhat[k] = split_rhat(series);
    if (!(st.rhat[k] <= 1.05)) st.converged = false;
  }
  return st;
}

std::vector<Observable> height_observables(double alpha, int x, double epsilon, const std::vector<double>& y) {
  std::vector<Observable> out;
  for (double yy : y)
    out.push_back([=](const SkewPlanePartition& pp) { return epsilon * height_function(pp, alpha, x, yy / epsilon); });
  return out;
}

HeightProfile empirical_height_profile(const std::vector<SkewPlanePartition>& samples, double alpha, int x,
                                       double epsilon, const std::vector<double>& y) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  HeightProfile hp;
  hp.y = y;
  const double n = static_cast<double>(samples.size());
  for (double yy : y) {
    double s = 0.0, s2 = 0.0;
    for (const auto& pp : samples) {
      const double h = epsilon * height_function(pp, alpha, x, yy / epsilon);
      s += h;
      s2 += h * h;
    }
    const double mean = s / n;
    hp.mean.push_back(mean);
    hp.se.push_back(samples.size() > 1 ? std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1)) : 0.0);
  }
  return hp;
}

std::vector<CumulantEstimate> empirical_cumulants(const std::vector<std::vector<double>>& rows,
                                                  const std::vector<CumulantRequest>& requests, int blocks) {
  const std::size_t n = rows.size();
  if (n < 2) throw std::invalid_argument("need at least two draws");
  const std::size_t B = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(2, blocks)));
  const std::size_t b = n / B;
  std::vector<CumulantEstimate> out;
  for (const auto& req : requests) {
    CumulantEstimate e;
    e.value = sample_cumulant(rows, req);
    std::vector<double> th;
    for (std::size_t k = 0; k < B; ++k) {
      std::vector<std::vector<double>> rest;
      rest.reserve(n - b);
      for (std::size_t a = 0; a < B * b; ++a)
        if (a / b != k) rest.push_back(rows[a]);
      th.push_back(sample_cumulant(rest, req));
    }
    const double mean = std::accumulate(th.begin(), th.end(), 0.0) / static_cast<double>(B);
    double v = 0.0;
    for (double t : th) v += (t - mean) * (t - mean);
    e.se = std::sqrt(v * static_cast<double>(B - 1) / static_cast<double>(B));
    out.push_back(e);
  }
  return out;
}

}  // namespace mpp
