#include "mpp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#ifndef MPP_VERSION
#define MPP_VERSION "0.0.0"
#endif

namespace mpp {

std::string version() { return MPP_VERSION; }

namespace io {

namespace {

const json& member(const json& j, const std::string& key, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(pointer + "/" + key, "required field is missing");
  return *it;
}

double number(const json& j, const std::string& pointer) {
  if (!j.is_number()) throw ConfigError(pointer, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return j.get<int>();
}

std::vector<double> real_array(const json& j, const std::string& pointer) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real_from_json(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

std::vector<int> int_array(const json& j, const std::string& pointer) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

template <class F>
auto rethrow_at(const std::string& pointer, F f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(pointer.empty() ? "/" : pointer, e.what());
  }
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

double real_from_json(const json& j, const std::string& pointer) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError(pointer, "expected a number or \"-inf\"/\"+inf\", got \"" + s + "\"");
  }
  return number(j, pointer);
}

json real_to_json(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "+inf";
  return v;
}

WeightSpec weight_spec_from_json(const json& j, const std::string& ptr) {
  WeightSpec spec;
  spec.s = real_array(member(j, "s", ptr), ptr + "/s");
  spec.p = j.contains("p") ? integer(j["p"], ptr + "/p") : static_cast<int>(spec.s.size());
  if (static_cast<int>(spec.s.size()) != spec.p) throw ConfigError(ptr + "/s", "must hold exactly p values");
  spec.r = number(member(j, "r", ptr), ptr + "/r");
  if (j.contains("q") || j.contains("t")) {
    const double q = number(member(j, "q", ptr), ptr + "/q"), t = number(member(j, "t", ptr), ptr + "/t");
    spec = rethrow_at(ptr, [&] { return WeightSpec::from_qt(q, t, spec.r, spec.s); });
  } else {
    spec.frak_t = j.contains("frak_t") ? number(j["frak_t"], ptr + "/frak_t") : 1.0;
    spec.alpha = j.contains("alpha") ? number(j["alpha"], ptr + "/alpha") : 1.0;
  }
  if (!(spec.r > 0.0 && spec.r < 1.0)) throw ConfigError(ptr + "/r", "must lie in (0,1)");
  if (!(spec.frak_t > 0.0)) throw ConfigError(ptr + "/frak_t", "must be positive");
  if (!(spec.alpha > 0.0)) throw ConfigError(ptr + "/alpha", "must be positive");
  for (std::size_t i = 0; i < spec.s.size(); ++i)
    if (!(spec.s[i] > 0.0) || !std::isfinite(spec.s[i]))
      throw ConfigError(ptr + "/s/" + std::to_string(i), "must be positive and finite");
  rethrow_at(ptr, [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

json to_json(const WeightSpec& spec) {
  return {{"p", spec.p}, {"s", spec.s}, {"r", spec.r}, {"frak_t", spec.frak_t}, {"alpha", spec.alpha}};
}

LimitBackWall limit_wall_from_json(const json& j, const std::string& ptr) {
  LimitBackWall bw;
  bw.kinks = real_array(member(j, "kinks", ptr), ptr + "/kinks");
  bw.slopes = real_array(member(j, "slopes", ptr), ptr + "/slopes");
  if (bw.slopes.size() + 1 != bw.kinks.size())
    throw ConfigError(ptr + "/slopes", "need exactly one slope per piece (kinks - 1)");
  for (std::size_t i = 0; i + 1 < bw.kinks.size(); ++i)
    if (!(bw.kinks[i] < bw.kinks[i + 1]))
      throw ConfigError(ptr + "/kinks/" + std::to_string(i + 1), "kinks must be strictly increasing");
  if (j.contains("anchor")) {
    const auto a = real_array(j["anchor"], ptr + "/anchor");
    if (a.size() != 2) throw ConfigError(ptr + "/anchor", "expected [x0, b0]");
    bw.x0 = a[0];
    bw.b0 = a[1];
  } else {
    bw.x0 = std::isfinite(bw.kinks.front()) ? bw.kinks.front() : (std::isfinite(bw.kinks.back()) ? bw.kinks.back() : 0.0);
    bw.b0 = 0.0;
  }
  return bw;
}

json to_json(const LimitBackWall& bw) {
  json k = json::array(), s = json::array();
  for (double v : bw.kinks) k.push_back(real_to_json(v));
  for (double v : bw.slopes) s.push_back(v);
  return {{"kinks", k}, {"slopes", s}, {"anchor", {bw.x0, bw.b0}}};
}

SkewSupport support_from_json(const json& j, const std::string& ptr) {
  if (j.is_string()) return rethrow_at(ptr, [&] { return parse_support(j.get<std::string>()); });
  SkewSupport s;
  s.N = integer(member(j, "N", ptr), ptr + "/N");
  s.M = integer(member(j, "M", ptr), ptr + "/M");
  if (j.contains("mu")) s.mu = rethrow_at(ptr + "/mu", [&] { return Partition(int_array(j["mu"], ptr + "/mu")); });
  rethrow_at(ptr, [&] {
    s.validate();
    return 0;
  });
  return s;
}

json to_json(const SkewSupport& s) { return {{"N", s.N}, {"M", s.M}, {"mu", s.mu.parts()}}; }

SkewSupport parse_support(const std::string& text) {
  SkewSupport s;
  const auto slash = text.find('/');
  const std::string box = text.substr(0, slash);
  const auto x = box.find('x');
  if (x == std::string::npos) throw std::invalid_argument("support must look like NxM or NxM/mu1,mu2");
  try {
    s.N = std::stoi(box.substr(0, x));
    s.M = std::stoi(box.substr(x + 1));
    if (slash != std::string::npos) {
      std::vector<int> mu;
      std::stringstream ss(text.substr(slash + 1));
      std::string part;
      while (std::getline(ss, part, ',')) mu.push_back(std::stoi(part));
      s.mu = Partition(mu);
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("support must look like NxM or NxM/mu1,mu2, got \"" + text + "\"");
  }
  s.validate();
  return s;
}

json to_json(const SkewPlanePartition& pp) {
  const SkewSupport s = pp.support();
  json d = json::array();
  for (const auto& p : pp.diagonals()) d.push_back(p.parts());
  return {{"N", s.N}, {"M", s.M}, {"mu", s.mu.parts()}, {"diagonals", d}};
}

SkewPlanePartition plane_partition_from_json(const json& j, const std::string& ptr) {
  const SkewSupport s = support_from_json(j, ptr);
  const auto& d = member(j, "diagonals", ptr);
  if (!d.is_array()) throw ConfigError(ptr + "/diagonals", "expected an array");
  std::vector<Partition> diags;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string p = ptr + "/diagonals/" + std::to_string(i);
    diags.push_back(rethrow_at(p, [&] { return Partition(int_array(d[i], p)); }));
  }
  return rethrow_at(ptr + "/diagonals", [&] { return SkewPlanePartition(wall_from_support(s), diags); });
}

json to_json(const DiscreteBackWall& w) {
  std::string bits;
  for (auto b : w.bits) bits += b ? '1' : '0';
  return {{"v_min", w.v_min}, {"v_max", w.v_max}, {"bits", bits}, {"anchor", {w.anchor_v, w.anchor_B}}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

std::string config_hash(const json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void Metadata::add(const std::string& key, double value) { add(key, format_real(value)); }

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("row width does not match the header");
  rows_.push_back(cells);
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_real(v));
  add_row(cells);
}

void CsvTable::write(std::ostream& os, const Metadata& meta) const {
  os << "# version: " << version() << "\n# config_hash: " << meta.config_hash << "\n# seed: " << meta.seed << "\n";
  for (const auto& [k, v] : meta.fields) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << csv_cell(header_[i]);
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << "\n";
  }
}

void CsvTable::write(const std::string& path, const Metadata& meta) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out, meta);
}

Svg::Svg(double x_min, double x_max, double y_min, double y_max, std::string unit, double pixels)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), unit_(std::move(unit)) {
  if (!(x_max > x_min) || !(y_max > y_min)) throw std::invalid_argument("empty SVG extent");
  scale_ = pixels / std::max(x_max - x_min, y_max - y_min);
}

double Svg::px(double x) const { return (x - x0_) * scale_; }
double Svg::py(double y) const { return (y1_ - y) * scale_; }

namespace {
std::string points_attr(const std::vector<Point2>& pts, const std::function<double(double)>& fx,
                        const std::function<double(double)>& fy) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  for (std::size_t i = 0; i < pts.size(); ++i) s << (i ? " " : "") << fx(pts[i].x) << "," << fy(pts[i].y);
  return s.str();
}
}  // namespace

void Svg::polyline(const std::vector<Point2>& pts, const std::string& stroke, double width) {
  body_.push_back("<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + format_real(width) +
                  "\" points=\"" +
                  points_attr(pts, [this](double x) { return px(x); }, [this](double y) { return py(y); }) + "\"/>");
}

void Svg::polygon(const std::vector<Point2>& pts, const std::string& fill, const std::string& stroke) {
  body_.push_back("<polygon fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"0.5\" points=\"" +
                  points_attr(pts, [this](double x) { return px(x); }, [this](double y) { return py(y); }) + "\"/>");
}

void Svg::circle(Point2 c, double r_px, const std::string& fill) {
  body_.push_back("<circle cx=\"" + format_real(px(c.x)) + "\" cy=\"" + format_real(py(c.y)) + "\" r=\"" +
                  format_real(r_px) + "\" fill=\"" + fill + "\"/>");
}

void Svg::text(Point2 at, const std::string& s, double size_px) {
  body_.push_back("<text x=\"" + format_real(px(at.x)) + "\" y=\"" + format_real(py(at.y)) + "\" font-size=\"" +
                  format_real(size_px) + "\" font-family=\"sans-serif\">" + escape_xml(s) + "</text>");
}

std::string Svg::str(const Metadata& meta) const {
  std::ostringstream os;
  const double w = (x1_ - x0_) * scale_, h = (y1_ - y0_) * scale_;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!--\n version: " << version() << "\n config_hash: " << meta.config_hash << "\n seed: " << meta.seed
     << "\n unit: " << escape_xml(unit_) << " (1 unit = " << format_real(scale_) << " px)\n extent: x ["
     << format_real(x0_) << ", " << format_real(x1_) << "], y [" << format_real(y0_) << ", " << format_real(y1_)
     << "]\n";
  for (const auto& [k, v] : meta.fields) os << " " << escape_xml(k) << ": " << escape_xml(v) << "\n";
  os << "-->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(w) << "\" height=\"" << format_real(h)
     << "\" viewBox=\"0 0 " << format_real(w) << " " << format_real(h) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& b : body_) os << b << "\n";
  os << "</svg>\n";
  return os.str();
}

void Svg::write(const std::string& path, const Metadata& meta) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << str(meta);
}

Svg plane_partition_svg(const SkewPlanePartition& pp) {
  const SkewSupport s = pp.support();
  const auto rows = pp.grid();
  const auto at = [&](int i, int j) -> int {
    if (!s.contains(i, j)) return 0;
    return rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - s.mu.part(i) - 1)];
  };
  // Cell (i, j) covers x in [j-1, j], y in [i-1, i]; projection along (1, 1, 1).
  const double c = std::sqrt(3.0) / 2;
  const auto P = [&](double x, double y, double z) { return Point2{(x - y) * c, z - (x + y) / 2}; };
  int top = 0;
  for (const auto& r : rows)
    for (int v : r) top = std::max(top, v);
  Svg svg(-s.M * c - 0.5, s.N * c + 0.5, -(s.N + s.M) / 2.0 - 0.5, top + 0.5, "cube edge");
  for (int i = 1; i <= s.M; ++i)
    for (int j = s.mu.part(i) + 1; j <= s.N; ++j) {
      const int z = at(i, j);
      svg.polygon({P(j - 1, i - 1, z), P(j, i - 1, z), P(j, i, z), P(j - 1, i, z)}, "#f2d16b", "#333");
      for (int k = at(i + 1, j); k < z; ++k)
        svg.polygon({P(j - 1, i, k), P(j, i, k), P(j, i, k + 1), P(j - 1, i, k + 1)}, "#6b9bd1", "#333");
      for (int k = at(i, j + 1); k < z; ++k)
        svg.polygon({P(j, i - 1, k), P(j, i, k), P(j, i, k + 1), P(j, i - 1, k + 1)}, "#d16b6b", "#333");
    }
  return svg;
}

Svg alpha_coordinates_svg(const SkewPlanePartition& pp, double alpha) {
  const auto& w = pp.wall();
  double lo = 0.0, hi = 1.0;
  for (int x = w.v_min; x <= w.v_max; ++x) {
    lo = std::min(lo, w.B(x) - 1);
    hi = std::max(hi, w.B(x) + 1);
    const auto& lam = pp.diagonal(x);
    if (lam.length()) hi = std::max(hi, alpha * lam.part(1) + w.B(x) + 1);
  }
  Svg svg(w.v_min - 1.0, w.v_max + 1.0, lo, hi, "diagonal step / alpha-coordinate unit");
  std::vector<Point2> wall;
  for (int x = w.v_min; x <= w.v_max; ++x) wall.push_back({double(x), w.B(x)});
  svg.polyline(wall, "#222", 2.0);
  for (int x = w.v_min + 1; x < w.v_max; ++x) {
    const auto& lam = pp.diagonal(x);
    for (int i = 1; i <= lam.length(); ++i) {
      const double Y = alpha * lam.part(i) - i + 1 + w.B(x);
      svg.polygon({{x - 0.4, Y - 1}, {x + 0.4, Y - 1}, {x + 0.4, Y}, {x - 0.4, Y}}, "#f2d16b", "#333");
    }
  }
  return svg;
}

}  // namespace io
}  // namespace mpp
