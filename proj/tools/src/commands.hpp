#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpp/io.hpp"

namespace mpp::cli {

using io::json;

// A check ran to completion and failed (non-member wall, discrepancy above tolerance).
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitModule = 3;

struct Context {
  std::string command;
  json cfg = json::object();
  std::filesystem::path out_dir = ".";
  std::map<std::string, double> tol;
  int threads = 0;
  std::uint64_t seed = 1;
  std::string hash;

  io::Metadata meta() const;
  std::filesystem::path file(const std::string& name) const;
  double tolerance(const std::string& key) const { return tol.at(key); }
};

// Parses "key=value" overrides on top of the defaults; unknown keys are config errors.
std::map<std::string, double> tolerances(const std::vector<std::string>& overrides);

struct SampleFlags {
  std::optional<int> chains;
  std::optional<long> steps, burn_in, thin;
  bool emit_svg = false;
  bool emit_csv = false;
};

struct MomentFlags {
  std::vector<int> x;
  std::vector<int> k;
};

struct CovarianceFlags {
  std::optional<double> x1, x2;
  std::optional<int> k1, k2;
  std::vector<double> epsilons;
};

struct GridFlags {
  std::optional<int> nx, ny;
};

int cmd_validate(const Context& ctx);
int cmd_discretize(const Context& ctx, std::optional<double> epsilon);
int cmd_moments(const Context& ctx, const MomentFlags& flags, std::optional<std::string> support);
int cmd_sample(const Context& ctx, const SampleFlags& flags, std::optional<std::string> support);
int cmd_limit_shape(const Context& ctx, const GridFlags& flags);
int cmd_frozen_boundary(const Context& ctx);
int cmd_covariance(const Context& ctx, const CovarianceFlags& flags);
int cmd_oracle(const Context& ctx, std::optional<std::string> support, std::optional<int> cap);
int cmd_figures(const Context& ctx, const std::string& which, const GridFlags& flags);

}  // namespace mpp::cli
