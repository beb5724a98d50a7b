#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpp/backwall.hpp"
#include "mpp/combinatorics.hpp"
#include "mpp/macdonald.hpp"

namespace mpp {

std::string version();

namespace io {

using json = nlohmann::json;

// Schema violation; pointer is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Numbers, or the strings "-inf", "+inf", "inf".
double real_from_json(const json& j, const std::string& pointer);
json real_to_json(double v);

WeightSpec weight_spec_from_json(const json& j, const std::string& pointer = "");
json to_json(const WeightSpec& spec);

LimitBackWall limit_wall_from_json(const json& j, const std::string& pointer = "");
json to_json(const LimitBackWall& bw);

SkewSupport support_from_json(const json& j, const std::string& pointer = "");
json to_json(const SkewSupport& s);
// "NxM" or "NxM/mu1,mu2,...".
SkewSupport parse_support(const std::string& text);

json to_json(const SkewPlanePartition& pp);
SkewPlanePartition plane_partition_from_json(const json& j, const std::string& pointer = "");

json to_json(const DiscreteBackWall& w);

json load_json_file(const std::string& path);
// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_hash(const json& j);

struct Metadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> fields;  // tolerances and other settings

  void add(const std::string& key, const std::string& value) { fields.emplace_back(key, value); }
  void add(const std::string& key, double value);
};

std::string format_real(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  // Metadata lines start with '#', then the header row.
  void write(std::ostream& os, const Metadata& meta) const;
  void write(const std::string& path, const Metadata& meta) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Minimal SVG builder in user coordinates with y pointing up.
class Svg {
 public:
  Svg(double x_min, double x_max, double y_min, double y_max, std::string unit, double pixels = 800.0);
  void polyline(const std::vector<Point2>& pts, const std::string& stroke, double width = 1.5);
  void polygon(const std::vector<Point2>& pts, const std::string& fill, const std::string& stroke = "none");
  void circle(Point2 c, double r_px, const std::string& fill);
  void text(Point2 at, const std::string& s, double size_px = 12.0);
  std::string str(const Metadata& meta) const;
  void write(const std::string& path, const Metadata& meta) const;

 private:
  double px(double x) const;
  double py(double y) const;
  double x0_, x1_, y0_, y1_, scale_;
  std::string unit_;
  std::vector<std::string> body_;
};

// Stepped surface in the projected (isometric) coordinates of the tiling.
Svg plane_partition_svg(const SkewPlanePartition& pp);
// Horizontal lozenges in alpha-coordinates: diagonal x, segment [Y_i - 1, Y_i].
Svg alpha_coordinates_svg(const SkewPlanePartition& pp, double alpha);

}  // namespace io
}  // namespace mpp
