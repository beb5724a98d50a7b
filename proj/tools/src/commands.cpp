#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "mpp/backwall.hpp"
#include "mpp/frozen.hpp"
#include "mpp/gff.hpp"
#include "mpp/limitshape.hpp"
#include "mpp/observables.hpp"
#include "mpp/oracle.hpp"
#include "mpp/sampler.hpp"

namespace mpp::cli {

using io::ConfigError;
using io::CsvTable;
using io::Point2;
using io::Svg;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string, double> kDefaultTolerances{
    {"quadrature", 1e-10},  // contour trapezoid Cauchy criterion
    {"pullback", 1e-5},     // log-kernel double integral
    {"height", 1e-7},       // H quadrature
    {"oracle", 1e-9},       // two weight definitions, max ratio discrepancy
};

template <class F>
void parallel_for(int n, int threads, F f) {
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::max(1, std::min(nt, n));
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex m;
  const auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!err) err = std::current_exception();
      }
    }
  };
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

const json* find(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double num_or(const json& j, const std::string& key, double def, const std::string& ptr) {
  const json* v = find(j, key);
  if (!v) return def;
  return io::real_from_json(*v, ptr + "/" + key);
}

long int_or(const json& j, const std::string& key, long def, const std::string& ptr) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_number_integer()) throw ConfigError(ptr + "/" + key, "expected an integer");
  return v->get<long>();
}

const json& section(const Context& ctx, const std::string& key) {
  static const json empty = json::object();
  const json* v = find(ctx.cfg, key);
  if (!v) return empty;
  if (!v->is_object()) throw ConfigError("/" + key, "expected an object");
  return *v;
}

WeightSpec weights(const Context& ctx) {
  const json* w = find(ctx.cfg, "weights");
  if (!w) return WeightSpec{};
  json j = *w;
  if (j.is_object() && !j.contains("r") && ctx.cfg.contains("epsilon"))
    j["r"] = std::exp(-io::real_from_json(ctx.cfg["epsilon"], "/epsilon"));
  if (j.is_object() && !j.contains("r")) j["r"] = 0.5;
  return io::weight_spec_from_json(j, "/weights");
}

LimitBackWall limit_wall(const Context& ctx) {
  const json* w = find(ctx.cfg, "wall");
  if (!w) throw ConfigError("/wall", "required field is missing");
  return io::limit_wall_from_json(*w, "/wall");
}

LimitModel model(const Context& ctx) {
  const LimitBackWall bw = limit_wall(ctx);
  const WeightSpec spec = weights(ctx);
  try {
    bw.validate_structure(spec.p);
    return LimitModel(bw, spec.s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/wall", e.what());
  }
}

std::optional<SkewSupport> support(const Context& ctx, const std::optional<std::string>& flag) {
  if (flag) {
    try {
      return io::parse_support(*flag);
    } catch (const std::exception& e) {
      throw ConfigError("--support", e.what());
    }
  }
  if (const json* s = find(ctx.cfg, "support")) return io::support_from_json(*s, "/support");
  return std::nullopt;
}

double epsilon(const Context& ctx, std::optional<double> flag) {
  if (flag) return *flag;
  const json* e = find(ctx.cfg, "epsilon");
  if (!e) throw ConfigError("/epsilon", "required field is missing");
  const double eps = io::real_from_json(*e, "/epsilon");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("/epsilon", "must lie in (0,1)");
  return eps;
}

DiscreteBackWall discrete_wall(const Context& ctx, const std::optional<SkewSupport>& sup, const WeightSpec& spec,
                               std::optional<double> eps_flag = std::nullopt) {
  if (sup) return wall_from_support(*sup);
  const LimitBackWall bw = limit_wall(ctx);
  DiscretizeOptions opt;
  opt.window = static_cast<int>(int_or(ctx.cfg, "window", 0, ""));
  return discretize(bw, spec.s, epsilon(ctx, eps_flag), opt);
}

void announce(const std::filesystem::path& p) { std::cout << "wrote " << p.string() << "\n"; }

void write_csv(const Context& ctx, const CsvTable& t, const std::string& name, const io::Metadata& meta) {
  const auto p = ctx.file(name);
  t.write(p.string(), meta);
  announce(p);
}

void write_svg(const Context& ctx, const Svg& s, const std::string& name, const io::Metadata& meta) {
  const auto p = ctx.file(name);
  s.write(p.string(), meta);
  announce(p);
}

void write_json(const Context& ctx, json j, const std::string& name, const io::Metadata& meta) {
  j["metadata"] = {{"version", version()}, {"config_hash", meta.config_hash}, {"seed", meta.seed}};
  for (const auto& [k, v] : meta.fields) j["metadata"][k] = v;
  const auto p = ctx.file(name);
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << j.dump(2) << "\n";
  announce(p);
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> int_list(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return {j.get<int>()};
  if (!j.is_array()) throw ConfigError(ptr, "expected an integer or an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(ptr + "/" + std::to_string(i), "expected an integer");
    out.push_back(j[i].get<int>());
  }
  return out;
}

std::vector<double> real_list(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(io::real_from_json(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

// Piecewise linear wall over [a, b], clipped to finite kinks.
std::vector<Point2> wall_polyline(const LimitBackWall& bw, double a, double b) {
  std::vector<double> xs{a};
  for (double k : bw.kinks)
    if (k > a && k < b) xs.push_back(k);
  xs.push_back(b);
  std::vector<Point2> pts;
  for (double x : xs) pts.push_back({x, bw.B(x)});
  return pts;
}

std::string ramp(double u) {
  u = std::clamp(std::isfinite(u) ? u : 0.0, 0.0, 1.0);
  const double c[3][3] = {{40, 30, 110}, {40, 160, 150}, {250, 225, 60}};
  const int seg = u < 0.5 ? 0 : 1;
  const double f = u < 0.5 ? 2 * u : 2 * u - 1;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(c[seg][0] + f * (c[seg + 1][0] - c[seg][0])),
                static_cast<int>(c[seg][1] + f * (c[seg + 1][1] - c[seg][1])),
                static_cast<int>(c[seg][2] + f * (c[seg + 1][2] - c[seg][2])));
  return buf;
}

std::string lozenge_color(double vert, double left) {
  const auto ch = [](double u) { return static_cast<int>(std::lround(255 * std::clamp(u, 0.0, 1.0))); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", ch(vert), ch(left), ch(1.0 - vert - left));
  return buf;
}

struct Grid {
  double x_min = -4, x_max = 4, y_min = -4, y_max = 4;
  int nx = 41, ny = 41;
};

Grid grid(const Context& ctx, const GridFlags& flags) {
  const json& g = section(ctx, "grid");
  Grid out;
  out.x_min = num_or(g, "x_min", out.x_min, "/grid");
  out.x_max = num_or(g, "x_max", out.x_max, "/grid");
  out.y_min = num_or(g, "y_min", out.y_min, "/grid");
  out.y_max = num_or(g, "y_max", out.y_max, "/grid");
  out.nx = flags.nx.value_or(static_cast<int>(int_or(g, "nx", out.nx, "/grid")));
  out.ny = flags.ny.value_or(static_cast<int>(int_or(g, "ny", out.ny, "/grid")));
  if (!(out.x_max > out.x_min)) throw ConfigError("/grid/x_max", "must exceed x_min");
  if (!(out.y_max > out.y_min)) throw ConfigError("/grid/y_max", "must exceed y_min");
  if (out.nx < 2 || out.ny < 2) throw ConfigError("/grid", "nx and ny must be at least 2");
  return out;
}

void limit_shape(const Context& ctx, const LimitModel& m, const Grid& g, const std::string& prefix) {
  struct Row {
    double x, y, H, dx, dy;
    std::string error;
  };
  std::vector<Row> rows(static_cast<std::size_t>(g.nx * g.ny));
  const double tol = ctx.tolerance("height");
  parallel_for(g.nx, ctx.threads, [&](int i) {
    const double x = g.x_min + (g.x_max - g.x_min) * i / (g.nx - 1);
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.y_min + (g.y_max - g.y_min) * j / (g.ny - 1);
      Row r{x, y, kNaN, kNaN, kNaN, {}};
      try {
        r.H = H(m, x, y, tol);
        const Gradient gr = grad_H(m, x, y);
        r.dx = gr.dH_dx;
        r.dy = gr.dH_dy;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      rows[static_cast<std::size_t>(i * g.ny + j)] = r;
    }
  });
  CsvTable t({"x", "y", "H", "dHdx", "dHdy", "p_vert", "p_left", "p_right"});
  double hmax = 0.0;
  int failed = 0;
  for (const auto& r : rows) {
    const double pv = 1.0 - r.dy, pl = -r.dx;
    t.add_row(std::vector<double>{r.x, r.y, r.H, r.dx, r.dy, pv, pl, 1.0 - pv - pl});
    if (std::isfinite(r.H)) hmax = std::max(hmax, r.H);
    if (!r.error.empty() && failed++ == 0) std::cerr << "warning: " << r.error << "\n";
  }
  if (failed > 1) std::cerr << "warning: " << failed << " grid points could not be evaluated\n";
  auto meta = ctx.meta();
  meta.add("grid", std::to_string(g.nx) + "x" + std::to_string(g.ny));
  meta.add("failed_points", std::to_string(failed));
  write_csv(ctx, t, prefix + "limit_shape.csv", meta);

  Svg svg(g.x_min, g.x_max, g.y_min, g.y_max, "rescaled lattice unit (x, y)");
  Svg mix(g.x_min, g.x_max, g.y_min, g.y_max, "rescaled lattice unit (x, y)");
  const double hx = (g.x_max - g.x_min) / (g.nx - 1), hy = (g.y_max - g.y_min) / (g.ny - 1);
  for (const auto& r : rows) {
    const double x0 = std::max(g.x_min, r.x - hx / 2), x1 = std::min(g.x_max, r.x + hx / 2);
    const double y0 = std::max(g.y_min, r.y - hy / 2), y1 = std::min(g.y_max, r.y + hy / 2);
    const std::vector<Point2> cell{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    const std::string c = std::isfinite(r.H) ? ramp(r.H / hmax) : "#cccccc";
    svg.polygon(cell, c, c);
    const std::string pc = std::isfinite(r.dx) ? lozenge_color(1.0 - r.dy, -r.dx) : "#cccccc";
    mix.polygon(cell, pc, pc);
  }
  svg.polyline(wall_polyline(m.wall(), g.x_min, g.x_max), "#ffffff", 2.0);
  mix.polyline(wall_polyline(m.wall(), g.x_min, g.x_max), "#000000", 2.0);
  auto hmeta = meta;
  hmeta.add("color", "H from 0 (dark) to " + io::format_real(hmax) + " (light)");
  write_svg(ctx, svg, prefix + "limit_shape.svg", hmeta);
  meta.add("color", "lozenge proportions mixed as vertical red, left green, right blue");
  write_svg(ctx, mix, prefix + "proportions.svg", meta);
}

FrozenOptions frozen_options(const Context& ctx) {
  const json& f = section(ctx, "frozen");
  FrozenOptions o;
  o.samples = static_cast<int>(int_or(f, "samples", o.samples, "/frozen"));
  o.x_min = num_or(f, "x_min", o.x_min, "/frozen");
  o.x_max = num_or(f, "x_max", o.x_max, "/frozen");
  o.y_min = num_or(f, "y_min", o.y_min, "/frozen");
  o.y_max = num_or(f, "y_max", o.y_max, "/frozen");
  o.refine_fraction = num_or(f, "refine_fraction", o.refine_fraction, "/frozen");
  o.max_points = static_cast<int>(int_or(f, "max_points", o.max_points, "/frozen"));
  if (!(o.x_max > o.x_min)) throw ConfigError("/frozen/x_max", "must exceed x_min");
  if (!(o.y_max > o.y_min)) throw ConfigError("/frozen/y_max", "must exceed y_min");
  return o;
}

FrozenBoundary frozen(const Context& ctx, const LimitModel& m, const std::string& prefix) {
  const FrozenOptions opt = frozen_options(ctx);
  const FrozenBoundary fb = frozen_boundary(m, opt);
  CsvTable t({"zeta", "x", "y", "component", "endpoint_kind", "residual"});
  Svg svg(opt.x_min, opt.x_max, opt.y_min, opt.y_max, "rescaled lattice unit (x, y)");
  svg.polyline(wall_polyline(m.wall(), opt.x_min, opt.x_max), "#888888", 2.0);
  const auto inside = [&](const FrozenPoint& p) {
    return p.x >= opt.x_min && p.x <= opt.x_max && p.y >= opt.y_min && p.y <= opt.y_max;
  };
  for (const auto& s : fb.segments) {
    std::vector<Point2> run;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      std::string kind = "interior";
      if (i == 0) kind = to_string(s.lo_kind);
      if (i + 1 == s.points.size()) kind = to_string(s.hi_kind);
      t.add_row(std::vector<std::string>{io::format_real(p.zeta), io::format_real(p.x), io::format_real(p.y),
                                         std::to_string(s.component), kind, io::format_real(p.residual)});
      if (inside(p)) {
        run.push_back({p.x, p.y});
      } else if (!run.empty()) {
        if (run.size() > 1) svg.polyline(run, "#c0392b", 1.5);
        run.clear();
      }
    }
    if (run.size() > 1) svg.polyline(run, "#c0392b", 1.5);
  }
  for (const auto& tn : fb.tentacles) svg.polyline({{tn.x, opt.y_min}, {tn.x, opt.y_max}}, "#2e86c1", 0.5);

  const auto sp = is_regular(m.wall(), m.S()) ? singular_points(m.wall(), m.S()) : std::vector<double>{};
  CsvTable tt({"junction", "x", "nearest_singular_point", "abs_diff", "extrapolation_error"});
  for (const auto& tn : fb.tentacles) {
    double best = kNaN;
    for (double s : sp)
      if (!std::isfinite(best) || std::abs(s - tn.x) < std::abs(best - tn.x)) best = s;
    tt.add_row(std::vector<double>{tn.junction, tn.x, best, std::abs(best - tn.x), tn.extrapolation_error});
  }
  auto meta = ctx.meta();
  meta.add("segments", std::to_string(fb.segments.size()));
  meta.add("tentacles", std::to_string(fb.tentacles.size()));
  write_csv(ctx, t, prefix + "frozen_boundary.csv", meta);
  write_csv(ctx, tt, prefix + "tentacles.csv", meta);
  write_svg(ctx, svg, prefix + "frozen_boundary.svg", meta);
  std::cout << (prefix.empty() ? "" : prefix.substr(0, prefix.size() - 1) + ": ") << "frozen boundary: " << fb.segments.size() << " segments, " << fb.tentacles.size()
            << " tentacles, " << sp.size() << " singular points\n";
  return fb;
}

json figure_config(const std::string& which) {
  if (which == "fb1")
    return json::parse(R"({"wall":{"kinks":["-inf",-2,0,2,"+inf"],"slopes":[1,0.6666666666666666,0.3333333333333333,0],
                            "anchor":[0,0]},"weights":{"s":[2,2,0.25],"r":0.5}})");
  if (which == "fb2")
    return json::parse(R"({"wall":{"kinks":["-inf","+inf"],"slopes":[0.5],"anchor":[0,0]},
                            "weights":{"s":[4,0.25,2,0.5,1.25,0.8],"r":0.5}})");
  throw ConfigError("--which", "expected fb1, fb2 or all");
}

}  // namespace

io::Metadata Context::meta() const {
  io::Metadata m;
  m.config_hash = hash;
  m.seed = seed;
  m.add("command", command);
  for (const auto& [k, v] : tol) m.add("tolerance." + k, v);
  return m;
}

std::filesystem::path Context::file(const std::string& name) const {
  std::filesystem::create_directories(out_dir);
  return out_dir / name;
}

std::map<std::string, double> tolerances(const std::vector<std::string>& overrides) {
  auto out = kDefaultTolerances;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const std::string key = o.substr(0, eq);
    if (eq == std::string::npos || !out.count(key)) {
      std::string keys;
      for (const auto& [k, v] : kDefaultTolerances) keys += (keys.empty() ? "" : ", ") + k;
      throw ConfigError("--tolerance", "expected key=value with key in {" + keys + "}, got \"" + o + "\"");
    }
    try {
      out[key] = std::stod(o.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--tolerance", "value of " + key + " is not a number");
    }
    if (!(out[key] > 0.0)) throw ConfigError("--tolerance", key + " must be positive");
  }
  return out;
}

int cmd_validate(const Context& ctx) {
  const WeightSpec spec = weights(ctx);
  json report = json::object();
  bool ok = true;
  if (find(ctx.cfg, "wall")) {
    const LimitBackWall bw = limit_wall(ctx);
    const auto S = SMultiset::from_s(spec.s);
    MembershipReport r;
    try {
      r = validate_limit_backwall(bw, S);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/wall", e.what());
    }
    json v = json::array();
    for (const auto& w : r.violations) v.push_back({{"V", w.V}, {"W", w.W}, {"product", w.product}});
    report["wall"] = {{"member", r.member}, {"structural", r.structural}, {"violations", v}};
    if (r.member) {
      const bool regular = is_regular(bw, S);
      report["wall"]["regular"] = regular;
      if (regular) {
        json sp = json::array();
        for (double x : singular_points(bw, S)) sp.push_back(io::real_to_json(x));
        report["wall"]["singular_points"] = sp;
      }
    }
    std::cout << "wall: " << (r.member ? "member" : "NOT a member") << "\n";
    for (const auto& s : r.structural) std::cout << "  structural: " << s << "\n";
    for (const auto& w : r.violations)
      std::cout << "  violation: V = " << w.V << ", W = " << w.W << ", product = " << w.product << " > 1\n";
    ok = ok && r.member;
  }
  const auto sup = support(ctx, std::nullopt);
  if (sup || find(ctx.cfg, "epsilon")) {
    const DiscreteBackWall w = discrete_wall(ctx, sup, spec);
    const auto s = summability_check(w, spec);
    report["summability"] = {{"ok", s.ok}, {"k1", s.k1}, {"k2", s.k2}, {"ratio", s.ratio}};
    std::cout << "summability: " << (s.ok ? "ok" : "fails") << " (sup ratio " << s.ratio << ")\n";
    ok = ok && s.ok;
  }
  if (report.empty()) throw ConfigError("/", "nothing to validate: give a wall, a support or an epsilon");
  report["weights"] = io::to_json(spec);
  report["ok"] = ok;
  write_json(ctx, report, "validation.json", ctx.meta());
  return ok ? 0 : kExitCheckFailed;
}

int cmd_discretize(const Context& ctx, std::optional<double> eps_flag) {
  const WeightSpec spec = weights(ctx);
  const LimitBackWall bw = limit_wall(ctx);
  const double eps = epsilon(ctx, eps_flag);
  const DiscreteBackWall w = discrete_wall(ctx, std::nullopt, spec, eps);
  const LimitBackWall prof = rescaled_profile(bw, w, eps);
  CsvTable t({"v", "B", "x", "epsilon_B", "limit_B", "profile_B"});
  for (int v = w.v_min; v <= w.v_max; ++v)
    t.add_row(std::vector<double>{double(v), w.B(v), eps * v, eps * w.B(v), bw.B(eps * v), prof.B(eps * v)});
  auto meta = ctx.meta();
  meta.add("epsilon", eps);
  json j = io::to_json(w);
  j["epsilon"] = eps;
  write_json(ctx, j, "discrete_wall.json", meta);
  write_csv(ctx, t, "discrete_wall.csv", meta);
  std::cout << "diagonals " << w.v_min << ".." << w.v_max << ", " << w.edge_count() << " edges\n";
  return 0;
}

int cmd_moments(const Context& ctx, const MomentFlags& flags, std::optional<std::string> sup_flag) {
  const WeightSpec spec = weights(ctx);
  const auto sup = support(ctx, sup_flag);
  const DiscreteBackWall w = discrete_wall(ctx, sup, spec);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> req;
  if (!flags.x.empty()) {
    if (flags.k.size() > 1 && flags.k.size() != flags.x.size())
      throw ConfigError("--k", "give one k or one k per --x");
    for (std::size_t i = 0; i < flags.x.size(); ++i)
      req.push_back({{flags.x[i]}, {flags.k.empty() ? 1 : flags.k[flags.k.size() == 1 ? 0 : i]}});
  } else if (const json* ms = find(ctx.cfg, "moments")) {
    if (!ms->is_array()) throw ConfigError("/moments", "expected an array");
    for (std::size_t i = 0; i < ms->size(); ++i) {
      const std::string p = "/moments/" + std::to_string(i);
      const json& e = (*ms)[i];
      if (!e.is_object() || !e.contains("x")) throw ConfigError(p + "/x", "required field is missing");
      const auto xs = int_list(e["x"], p + "/x");
      const auto ks = e.contains("k") ? int_list(e["k"], p + "/k") : std::vector<int>(xs.size(), 1);
      if (ks.size() != xs.size()) throw ConfigError(p + "/k", "needs one entry per x");
      req.push_back({xs, ks});
    }
  } else {
    for (int x = w.v_min + 1; x < w.v_max && req.size() < 64; ++x) req.push_back({{x}, {1}});
  }
  QuadratureOptions qo;
  qo.tolerance = ctx.tolerance("quadrature");
  const int cap = static_cast<int>(int_or(section(ctx, "oracle"), "cap", 10, "/oracle"));

  struct Out {
    double contour = kNaN, oracle = kNaN, tail = kNaN;
    std::string error;
  };
  std::vector<Out> out(req.size());
  parallel_for(static_cast<int>(req.size()), ctx.threads, [&](int i) {
    const auto& [xs, ks] = req[static_cast<std::size_t>(i)];
    auto& o = out[static_cast<std::size_t>(i)];
    try {
      o.contour = (xs.size() == 1 && ks[0] == 1) ? moment_k1(w, spec, xs[0], qo).value
                                                 : moment_multi(w, spec, xs, ks, qo).value;
    } catch (const std::domain_error& e) {
      o.error = e.what();
    }
  });
  if (sup) {
    std::vector<Observable> obs;
    for (const auto& [xs, ks] : req)
      obs.push_back([xs = xs, ks = ks, q = spec.q(), t = spec.t()](const SkewPlanePartition& pp) {
        double v = 1.0;
        for (std::size_t a = 0; a < xs.size(); ++a) v *= wp(ks[a], pp.diagonal(xs[a]), q, t);
        return v;
      });
    try {
      const auto res = exact_expectations(*sup, spec, obs, cap, EnumerationBudget{1L << 20});
      for (std::size_t i = 0; i < req.size(); ++i) {
        out[i].oracle = res.values[i];
        out[i].tail = res.tail_mass;
      }
    } catch (const BudgetExceeded& e) {
      std::cerr << "note: enumeration oracle skipped: " << e.what() << "\n";
    }
  }
  CsvTable t({"x", "k", "contour_value", "oracle_value", "abs_diff", "oracle_tail_mass", "error"});
  int failed = 0;
  const auto opt = [](double v) { return std::isnan(v) ? std::string() : io::format_real(v); };
  for (std::size_t i = 0; i < req.size(); ++i) {
    const auto& o = out[i];
    t.add_row(std::vector<std::string>{join(req[i].first), join(req[i].second), opt(o.contour), opt(o.oracle),
                                       opt(std::abs(o.contour - o.oracle)), opt(o.tail), o.error});
    if (!o.error.empty()) {
      ++failed;
      std::cerr << "error: x = " << join(req[i].first) << ", k = " << join(req[i].second) << ": " << o.error << "\n";
    }
  }
  auto meta = ctx.meta();
  meta.add("oracle_cap", std::to_string(cap));
  write_csv(ctx, t, "moments.csv", meta);
  return failed ? kExitModule : 0;
}

int cmd_sample(const Context& ctx, const SampleFlags& flags, std::optional<std::string> sup_flag) {
  const WeightSpec spec = weights(ctx);
  const auto sup = support(ctx, sup_flag);
  const json& sc = section(ctx, "sample");
  ChainConfig cfg;
  cfg.seed = ctx.seed;
  cfg.spec = spec;
  cfg.wall = discrete_wall(ctx, sup, spec);
  cfg.burn_in = flags.burn_in.value_or(int_or(sc, "burn_in", 5000, "/sample"));
  cfg.steps = flags.steps.value_or(int_or(sc, "steps", 50000, "/sample"));
  cfg.thin = flags.thin.value_or(int_or(sc, "thin", 10, "/sample"));
  const int chains = flags.chains.value_or(static_cast<int>(int_or(sc, "chains", 4, "/sample")));
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/sample", e.what());
  }
  if (chains < 2) throw ConfigError("/sample/chains", "need at least two chains for R-hat");
  std::vector<int> xs;
  if (const json* o = find(sc, "observe")) xs = int_list(*o, "/sample/observe");
  else xs.push_back(cfg.wall.contains_diagonal(0) ? 0 : (cfg.wall.v_min + cfg.wall.v_max) / 2);
  std::vector<std::string> names{"volume"};
  std::vector<Observable> obs{[](const SkewPlanePartition& pp) { return static_cast<double>(pp.volume()); }};
  for (int x : xs) {
    if (!cfg.wall.contains_diagonal(x)) throw ConfigError("/sample/observe", "diagonal " + std::to_string(x) + " is outside the wall");
    names.push_back("wp1(" + std::to_string(x) + ")");
    obs.push_back([x, q = spec.q(), t = spec.t()](const SkewPlanePartition& pp) { return wp(1, pp.diagonal(x), q, t); });
  }
  const SampleStats st = run_chains(cfg, chains, obs, ctx.threads);
  double acc = 0.0;
  for (const auto& c : st.chains) acc += c.acceptance / chains;

  auto meta = ctx.meta();
  meta.add("chains", std::to_string(chains));
  meta.add("burn_in", std::to_string(cfg.burn_in));
  meta.add("steps", std::to_string(cfg.steps));
  meta.add("thin", std::to_string(cfg.thin));
  meta.add("acceptance", acc);
  meta.add("converged", st.converged ? "true" : "false");
  CsvTable t({"observable", "mean", "se", "rhat"});
  for (std::size_t k = 0; k < names.size(); ++k) {
    t.add_row(std::vector<std::string>{names[k], io::format_real(st.mean[k]), io::format_real(st.se[k]),
                                       io::format_real(st.rhat[k])});
    std::cout << names[k] << ": " << st.mean[k] << " +- " << st.se[k] << " (R-hat " << st.rhat[k] << ")\n";
  }
  write_csv(ctx, t, "sample_summary.csv", meta);
  if (!st.converged) std::cerr << "warning: not converged, R-hat above 1.05\n";
  if (flags.emit_csv) {
    std::vector<std::string> header{"chain", "draw"};
    header.insert(header.end(), names.begin(), names.end());
    CsvTable d(header);
    for (std::size_t c = 0; c < st.chains.size(); ++c)
      for (std::size_t i = 0; i < st.chains[c].rows.size(); ++i) {
        std::vector<double> row{double(c), double(i)};
        row.insert(row.end(), st.chains[c].rows[i].begin(), st.chains[c].rows[i].end());
        d.add_row(row);
      }
    write_csv(ctx, d, "sample_draws.csv", meta);
  }
  if (flags.emit_svg) {
    Chain ch(SkewPlanePartition::empty(cfg.wall), spec, cfg.seed, 0);
    ch.run(cfg.steps);
    const auto pp = ch.state();
    write_json(ctx, io::to_json(pp), "final_state.json", meta);
    write_svg(ctx, io::plane_partition_svg(pp), "final_state.svg", meta);
    write_svg(ctx, io::alpha_coordinates_svg(pp, spec.alpha), "final_state_alpha.svg", meta);
  }
  return 0;
}

int cmd_limit_shape(const Context& ctx, const GridFlags& flags) {
  limit_shape(ctx, model(ctx), grid(ctx, flags), "");
  return 0;
}

int cmd_frozen_boundary(const Context& ctx) {
  frozen(ctx, model(ctx), "");
  return 0;
}

int cmd_covariance(const Context& ctx, const CovarianceFlags& flags) {
  const LimitModel m = model(ctx);
  const WeightSpec spec = weights(ctx);
  const json& cs = section(ctx, "covariance");
  struct Pt {
    double x1;
    int k1;
    double x2;
    int k2;
  };
  std::vector<Pt> pts;
  if (flags.x1 || flags.x2) {
    if (!flags.x1 || !flags.x2) throw ConfigError("--x1", "give both --x1 and --x2");
    pts.push_back({*flags.x1, flags.k1.value_or(1), *flags.x2, flags.k2.value_or(1)});
  } else if (const json* ps = find(cs, "points")) {
    if (!ps->is_array()) throw ConfigError("/covariance/points", "expected an array");
    for (std::size_t i = 0; i < ps->size(); ++i) {
      const std::string p = "/covariance/points/" + std::to_string(i);
      const json& e = (*ps)[i];
      for (const char* key : {"x1", "x2"})
        if (!find(e, key)) throw ConfigError(p + "/" + key, "required field is missing");
      pts.push_back({io::real_from_json(e["x1"], p + "/x1"), static_cast<int>(int_or(e, "k1", 1, p)),
                     io::real_from_json(e["x2"], p + "/x2"), static_cast<int>(int_or(e, "k2", 1, p))});
    }
  } else {
    throw ConfigError("/covariance/points", "required field is missing");
  }
  std::vector<double> eps = flags.epsilons;
  if (eps.empty())
    if (const json* e = find(cs, "epsilons")) eps = real_list(*e, "/covariance/epsilons");
  const double window = num_or(cs, "window_length", 8.0, "/covariance");
  QuadratureOptions qo;
  qo.tolerance = ctx.tolerance("quadrature");
  PullbackOptions po;
  po.tolerance = ctx.tolerance("pullback");

  struct Out {
    double contour = kNaN, pullback = kNaN, order = kNaN;
    std::vector<double> pre;
  };
  std::vector<Out> out(pts.size());
  parallel_for(static_cast<int>(pts.size()), ctx.threads, [&](int i) {
    const Pt& p = pts[static_cast<std::size_t>(i)];
    Out& o = out[static_cast<std::size_t>(i)];
    o.contour = limit_covariance_contour(m, p.x1, p.k1, p.x2, p.k2, spec.frak_t, qo).value;
    o.pullback = gff_pullback_covariance(m, p.x1, p.k1 * spec.frak_t, p.x2, p.k2 * spec.frak_t, po) /
                 pullback_contour_factor(m, p.x1, p.k1, p.x2, p.k2, spec.frak_t);
    if (!eps.empty()) {
      const auto tab = prelimit_covariance_convergence(m, p.x1, p.k1, p.x2, p.k2, spec.frak_t, spec.alpha, eps, window);
      for (const auto& r : tab.rows) o.pre.push_back(r.value);
      o.order = tab.observed_order;
    }
  });
  std::vector<std::string> header{"x1", "k1", "x2", "k2", "contour_value", "pullback_value", "abs_diff"};
  for (double e : eps) header.push_back("prelimit@" + io::format_real(e));
  if (!eps.empty()) header.push_back("observed_order");
  CsvTable t(header);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& o = out[i];
    std::vector<double> row{p.x1, double(p.k1), p.x2, double(p.k2), o.contour, o.pullback, std::abs(o.contour - o.pullback)};
    row.insert(row.end(), o.pre.begin(), o.pre.end());
    if (!eps.empty()) row.push_back(o.order);
    t.add_row(row);
  }
  auto meta = ctx.meta();
  meta.add("frak_t", spec.frak_t);
  meta.add("alpha", spec.alpha);
  meta.add("prelimit_normalization", "Cov / (alpha epsilon^2)");
  write_csv(ctx, t, "covariance.csv", meta);
  return 0;
}

int cmd_oracle(const Context& ctx, std::optional<std::string> sup_flag, std::optional<int> cap_flag) {
  const auto sup = support(ctx, sup_flag).value_or(io::parse_support("2x2"));
  const int cap = cap_flag.value_or(static_cast<int>(int_or(section(ctx, "oracle"), "cap", 3, "/oracle")));
  if (cap < 1) throw ConfigError("--cap", "must be positive");
  std::vector<WeightSpec> specs;
  if (find(ctx.cfg, "weights")) specs.push_back(weights(ctx));
  else
    for (const auto& [a, t] : {std::pair{1.0, 0.3}, std::pair{2.0, 0.4}, std::pair{0.5, 0.5}})
      specs.push_back(WeightSpec::from_qt(std::pow(t, a), t, 0.4));
  const double tol = ctx.tolerance("oracle");
  CsvTable t({"alpha", "t", "r", "configurations", "max_discrepancy", "pass"});
  bool ok = true;
  for (const auto& spec : specs) {
    const auto res = distribution_crosscheck(sup, spec, cap, EnumerationBudget{1L << 20});
    const bool pass = res.max_discrepancy < tol;
    ok = ok && pass;
    t.add_row(std::vector<std::string>{io::format_real(spec.alpha), io::format_real(spec.t()), io::format_real(spec.r),
                                       std::to_string(res.rows.size()), io::format_real(res.max_discrepancy),
                                       pass ? "true" : "false"});
    std::cout << "alpha " << spec.alpha << ", t " << spec.t() << ": " << res.rows.size()
              << " configurations, max discrepancy " << res.max_discrepancy << (pass ? "" : " ABOVE TOLERANCE") << "\n";
  }
  auto meta = ctx.meta();
  meta.add("support", std::to_string(sup.N) + "x" + std::to_string(sup.M));
  meta.add("cap", std::to_string(cap));
  write_csv(ctx, t, "oracle.csv", meta);
  return ok ? 0 : kExitCheckFailed;
}

int cmd_figures(const Context& ctx, const std::string& which, const GridFlags& flags) {
  std::vector<std::string> names;
  if (which == "all") names = {"fb1", "fb2"};
  else names = {which};
  for (const auto& n : names) {
    Context c = ctx;
    c.cfg = figure_config(n);
    if (const json* f = find(ctx.cfg, "frozen")) c.cfg["frozen"] = *f;
    if (const json* g = find(ctx.cfg, "grid")) c.cfg["grid"] = *g;
    c.hash = io::config_hash(json{{"figure", n}, {"config", c.cfg}});
    const LimitModel m = model(c);
    frozen(c, m, n + "_");
    limit_shape(c, m, grid(c, flags), n + "_");
  }
  return 0;
}

}  // namespace mpp::cli
