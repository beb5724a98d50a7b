#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mpp/combinatorics.hpp"

using namespace mpp;
using namespace mpp::cli;

namespace {

struct Common {
  std::string config;
  std::string out_dir = ".";
  std::vector<std::string> tolerance;
  int threads = 0;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON configuration file");
  sub->add_option("--out-dir", c.out_dir, "Directory for artifacts")->capture_default_str();
  sub->add_option("--tolerance", c.tolerance, "Override key=value (quadrature, pullback, height, oracle)");
  sub->add_option("--threads", c.threads, "Worker threads, 0 for all cores")->capture_default_str();
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

// Arguments that change results, for the config hash.
json hashed_args(int argc, char** argv) {
  json a = json::array();
  for (int i = 1; i < argc; ++i) {
    const std::string s = argv[i];
    if (s == "--out-dir" || s == "--threads") {
      ++i;
      continue;
    }
    if (s.rfind("--out-dir=", 0) == 0 || s.rfind("--threads=", 0) == 0) continue;
    a.push_back(s);
  }
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodically weighted Macdonald plane partitions"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Common common;

  auto* validate = app.add_subcommand("validate", "Check back wall membership, summability and weights");
  auto* discretize = app.add_subcommand("discretize", "Discretize a limit back wall at scale epsilon");
  auto* moments = app.add_subcommand("moments", "Contour-integral moments against the enumeration oracle");
  auto* sample = app.add_subcommand("sample", "Metropolis-Hastings sampling with diagnostics");
  auto* limit = app.add_subcommand("limit-shape", "Limit height function and lozenge proportions on a grid");
  auto* frozen = app.add_subcommand("frozen-boundary", "Frozen boundary curve, tentacles and cusps");
  auto* cov = app.add_subcommand("covariance", "Limiting fluctuation covariances");
  auto* oracle = app.add_subcommand("oracle", "Cross-check the two definitions of the measure");
  auto* figures = app.add_subcommand("figures", "Frozen boundary and limit shape figures");
  for (auto* s : {validate, discretize, moments, sample, limit, frozen, cov, oracle, figures}) add_common(s, common);

  std::optional<double> eps;
  discretize->add_option("--epsilon", eps, "Lattice scale");

  std::optional<std::string> support;
  MomentFlags mflags;
  moments->add_option("--support", support, "Finite support NxM or NxM/mu1,mu2");
  moments->add_option("--x", mflags.x, "Diagonal(s)");
  moments->add_option("--k", mflags.k, "Power(s) of the observable");

  SampleFlags sflags;
  sample->add_option("--support", support, "Finite support NxM or NxM/mu1,mu2");
  sample->add_option("--chains", sflags.chains, "Independent chains");
  sample->add_option("--steps", sflags.steps, "Total steps per chain, burn-in included");
  sample->add_option("--burn-in", sflags.burn_in, "Discarded steps per chain");
  sample->add_option("--thin", sflags.thin, "Steps between recorded draws");
  sample->add_flag("--emit-svg", sflags.emit_svg, "Write the final state of chain 0 as JSON and SVG");
  sample->add_flag("--emit-csv", sflags.emit_csv, "Write every recorded draw");

  GridFlags gflags;
  for (auto* s : {limit, figures}) {
    s->add_option("--nx", gflags.nx, "Grid points in x");
    s->add_option("--ny", gflags.ny, "Grid points in y");
  }

  CovarianceFlags cflags;
  cov->add_option("--x1", cflags.x1);
  cov->add_option("--k1", cflags.k1);
  cov->add_option("--x2", cflags.x2);
  cov->add_option("--k2", cflags.k2);
  cov->add_option("--epsilons", cflags.epsilons, "Prelimit scales");

  std::optional<int> cap;
  oracle->add_option("--support", support, "Finite support NxM or NxM/mu1,mu2");
  oracle->add_option("--cap", cap, "Height cap for enumeration");

  std::string which = "all";
  figures->add_option("--which", which, "fb1, fb2 or all")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    Context ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    if (!common.config.empty()) ctx.cfg = io::load_json_file(common.config);
    if (!ctx.cfg.is_object()) throw io::ConfigError("/", "the configuration must be a JSON object");
    ctx.out_dir = common.out_dir;
    ctx.tol = tolerances(common.tolerance);
    ctx.threads = common.threads;
    ctx.seed = common.seed;
    ctx.hash = io::config_hash(json{{"config", ctx.cfg}, {"args", hashed_args(argc, argv)}});

    if (validate->parsed()) return cmd_validate(ctx);
    if (discretize->parsed()) return cmd_discretize(ctx, eps);
    if (moments->parsed()) return cmd_moments(ctx, mflags, support);
    if (sample->parsed()) return cmd_sample(ctx, sflags, support);
    if (limit->parsed()) return cmd_limit_shape(ctx, gflags);
    if (frozen->parsed()) return cmd_frozen_boundary(ctx);
    if (cov->parsed()) return cmd_covariance(ctx, cflags);
    if (oracle->parsed()) return cmd_oracle(ctx, support, cap);
    if (figures->parsed()) return cmd_figures(ctx, which, gflags);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitModule;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitModule;
  }
  return 0;
}
