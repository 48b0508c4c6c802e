// warped-limit-lab: runs one named experiment and writes its artifacts.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wlab/experiments.hpp"
#include "wlab/parallel.hpp"

namespace {

using wlab::ExperimentConfig;

struct Flags {
  ExperimentConfig cfg;
  std::string p = "auto";
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--alpha", f.cfg.alpha, "circle-factor decay exponent (> 0)")->capture_default_str();
  sub->add_option("--p", f.p, "sphere parameter p, or 'auto' for the dimension threshold")->capture_default_str();
  sub->add_option("--jobs", f.cfg.jobs, "worker threads")->capture_default_str();
  sub->add_option("--out-dir", f.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", f.cfg.seed, "seed for sampled experiments")->capture_default_str();
  sub->add_option("--config", "flat key = value file; command-line flags override it");
}

template <class T>
CLI::Option* list_option(CLI::App* sub, const std::string& name, std::vector<T>& v, const std::string& help) {
  return sub->add_option(name, v, help)->delimiter(',')->capture_default_str();
}

void add_specific(const std::string& name, CLI::App* sub, Flags& f) {
  auto& c = f.cfg;
  if (name == "curvature-scan") {
    sub->add_option("--r-min", c.r_min)->capture_default_str();
    sub->add_option("--r-max", c.r_max)->capture_default_str();
    sub->add_option("--grid-points", c.grid_points)->capture_default_str();
  } else if (name == "growth" || name == "lemma-bounds") {
    sub->add_option("--l-min", c.l_min)->capture_default_str();
    sub->add_option("--l-max", c.l_max)->capture_default_str();
    if (name == "growth") {
      sub->add_option("--per-decade", c.per_decade)->capture_default_str();
      sub->add_option("--fit-min", c.fit_min)->capture_default_str();
      sub->add_option("--fit-max", c.fit_max)->capture_default_str();
      sub->add_option("--slope-tol", c.slope_tol)->capture_default_str();
    }
  } else if (name == "far-loop") {
    list_option(sub, "--s-list", c.s_list, "basepoint radii");
    list_option(sub, "--eps-list", c.eps_list, "winding fractions in (0, 1)");
  } else if (name == "orbit-dimension") {
    sub->add_option("--l-ref", c.L_ref, "normalization winding")->capture_default_str();
    sub->add_option("--n-samples", c.n_samples)->capture_default_str();
    sub->add_option("--n-deltas", c.n_deltas)->capture_default_str();
    sub->add_option("--delta-max", c.delta_max)->capture_default_str();
    sub->add_option("--dimension-tol", c.dimension_tol)->capture_default_str();
    sub->add_option("--stability", c.stability, "also build the table at 2 L_ref")->capture_default_str();
  } else if (name == "halfline") {
    list_option(sub, "--scales", c.scales, "increasing scales s");
    list_option(sub, "--radii", c.halfline.radii, "radii as fractions of s");
    list_option(sub, "--angles", c.halfline.angles, "fiber angles");
    sub->add_option("--halfline-tol", c.halfline_tol)->capture_default_str();
  } else if (name == "flatness") {
    sub->add_option("--s", c.flat_s, "ball center radius")->capture_default_str();
    list_option(sub, "--rho-list", c.rho_list, "relative ball radii in (0, 0.2)");
    sub->add_option("--points", c.flat_points)->capture_default_str();
  } else if (name == "oracle-check") {
    list_option(sub, "--oracle-l", c.oracle_l, "winding numbers");
    sub->add_option("--oracle-nodes", c.oracle_nodes)->capture_default_str();
    sub->add_option("--stencil", c.stencil, "8, 16 or 32")->capture_default_str();
    sub->add_option("--oracle-tol", c.oracle_tol)->capture_default_str();
  }
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Splices the keys of a flat config file into the argument list right after
// the subcommand, skipping keys that the command line already sets.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;

  const auto items = CLI::ConfigINI().from_file(path);
  const auto& names = wlab::experiment_names();
  auto is_sub = [&](const std::string& a) { return std::find(names.begin(), names.end(), a) != names.end(); };
  auto sub_it = std::find_if(args.begin(), args.end(), is_sub);

  std::vector<std::string> extra;
  std::string experiment;
  for (const auto& item : items) {
    if (!item.parents.empty()) throw CLI::ConversionError(fmt::format("{}: nested keys are not supported", path));
    if (item.name == "experiment") {
      if (!item.inputs.empty()) experiment = item.inputs.front();
      continue;
    }
    if (given_on_command_line(args, item.name)) continue;
    extra.push_back("--" + item.name);
    std::string joined;
    for (const auto& in : item.inputs) joined += (joined.empty() ? "" : ",") + in;
    extra.push_back(joined);
  }
  if (sub_it == args.end()) {
    if (experiment.empty()) throw CLI::RequiredError("an experiment subcommand (or 'experiment' in the config)");
    args.insert(args.begin(), experiment);
    sub_it = args.begin();
  }
  args.insert(sub_it + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for doubly warped products with collapsing circle factor"};
  app.name("warped-limit-lab");
  app.require_subcommand(1);

  Flags flags;
  flags.cfg.jobs = wlab::default_jobs();
  const std::vector<std::pair<std::string, std::string>> subs{
      {"curvature-scan", "Ricci positivity and displayed lower bounds on a radial grid"},
      {"growth", "cover distances at the axis and the growth exponent"},
      {"lemma-bounds", "two-sided bounds on cover distances, one l per decade"},
      {"far-loop", "loop length and size at far basepoints"},
      {"orbit-dimension", "rescaled orbit metric, Hoelder constants and box-counting dimension"},
      {"halfline", "rescaled quotient distances against the half-line"},
      {"flatness", "chart distortion of small balls away from the orbit"},
      {"oracle-check", "solver against the grid shortest-path oracle"}};
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    add_specific(name, sub, flags);
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wlab::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wlab::kExitUsage;
  }

  ExperimentConfig& cfg = flags.cfg;
  cfg.experiment = app.get_subcommands().front()->get_name();
  cfg.out_dir = flags.out_dir;
  try {
    if (flags.p != "auto") {
      std::size_t used = 0;
      cfg.p = std::stoi(flags.p, &used);
      if (used != flags.p.size()) throw std::invalid_argument(flags.p);
    }
  } catch (const std::exception&) {
    std::cerr << "error: --p must be an integer or 'auto', got '" << flags.p << "'\n";
    return wlab::kExitUsage;
  }

  try {
    const wlab::ExperimentResult res = wlab::run_experiment(cfg);
    fmt::print("{} alpha={} p={}\n", cfg.experiment, cfg.alpha, cfg.resolved_p());
    for (const auto& a : res.assertions) fmt::print("  {} {}\n", a.pass ? "PASS" : "FAIL", a.claim);
    for (const auto& f : res.files) fmt::print("  wrote {}\n", f.string());
    return res.pass() ? wlab::kExitPass : wlab::kExitAssertion;
  } catch (const wlab::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return wlab::kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return wlab::kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return wlab::kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return wlab::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return wlab::kExitSolver;
  }
}
