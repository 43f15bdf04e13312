//
// Copyright 2026 The DP Composer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end for the toolkit.
//
//   dpcomposer [--format csv|json] [--output FILE] [--config FILE] <command>
//
// Commands: stats, sensitivity, bias, mechanism, clip-user, synth,
// montecarlo, mae, scaling. Randomized commands require --seed. The config
// file holds flat key=value lines naming flags of the chosen command; flags
// given on the command line take precedence.
//
// Exit codes: 0 success, 1 toolkit error, 2 usage error, 3 I/O error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "dpcomposer/composition.h"
#include "dpcomposer/dataset.h"
#include "dpcomposer/harness.h"
#include "dpcomposer/mechanisms.h"
#include "dpcomposer/output.h"
#include "dpcomposer/sensitivity.h"
#include "dpcomposer/status_macros.h"
#include "dpcomposer/synth.h"
#include "dpcomposer/worst_case_bias.h"

namespace dpcomposer {
namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

absl::Status UsageError(absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("UsageError: ", message));
}

absl::Status IoError(absl::string_view message) {
  return absl::UnavailableError(absl::StrCat("IoError: ", message));
}

int ExitCodeFor(const absl::Status& status) {
  const absl::string_view msg = status.message();
  if (absl::StartsWith(msg, "UsageError")) return kExitUsage;
  if (absl::StartsWith(msg, "IoError")) return kExitIo;
  return kExitError;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return IoError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::StatusOr<std::vector<int64_t>> ParseIntList(const std::string& text,
                                                  absl::string_view flag) {
  std::vector<int64_t> out;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    int64_t v = 0;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(part), &v)) {
      return UsageError(absl::StrCat("--", flag, ": bad integer '",
                                     std::string(part), "'"));
    }
    out.push_back(v);
  }
  if (out.empty()) return UsageError(absl::StrCat("--", flag, " is empty"));
  return out;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(const std::string& text,
                                                    absl::string_view flag) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v = 0.0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(part), &v)) {
      return UsageError(absl::StrCat("--", flag, ": bad number '",
                                     std::string(part), "'"));
    }
    out.push_back(v);
  }
  if (out.empty()) return UsageError(absl::StrCat("--", flag, " is empty"));
  return out;
}

absl::StatusOr<GroupingStrategy> ParseStrategy(const std::string& name) {
  if (name == "wrap") return GroupingStrategy::kWrapAround;
  if (name == "best") return GroupingStrategy::kBestFit;
  return UsageError(absl::StrCat("unknown strategy '", name, "'"));
}

absl::StatusOr<MubChoice> ParseMub(const std::string& name) {
  if (name == "median") return MubChoice::kMedian;
  if (name == "optimized") return MubChoice::kOptimized;
  return UsageError(absl::StrCat("unknown m_UB choice '", name, "'"));
}

// Flag values shared by the command handlers.
struct Flags {
  std::string format = "csv";
  std::string output;
  double bound_u = 1.0;
  double epsilon = 1.0;
  uint64_t seed = 0;
  std::string data;
  std::string occupancy;
  std::string grid;
  std::string counts;
  std::string retained;
  int64_t mub = 0;
  std::string mechanism = "baseline";
  std::string strategy = "best";
  std::string mub_choice = "optimized";
  double gamma = 0.2;
  bool protect = false;
  bool pseudo_user = false;
  int64_t grids = 12;
  int64_t users = 4095;
  double geo_q = 0.01;
  double heavy_gamma = 0.0;
  bool values = false;
  double mu = 20.66769;
  double sigma = std::sqrt(115.135);
  std::string kind = "privacy";
  int64_t trials = 0;
  std::string eps_list;
  std::string lambdas = "2,3,10";
};

absl::StatusOr<Dataset> LoadDataset(const Flags& f) {
  if (f.data.empty()) return UsageError("--data is required");
  DPC_ASSIGN_OR_RETURN(const std::string text, ReadFile(f.data));
  return ParseDataset(text, f.bound_u);
}

absl::StatusOr<OccupancyArray> LoadOccupancy(const Flags& f) {
  if (f.occupancy.empty()) return UsageError("--occupancy is required");
  DPC_ASSIGN_OR_RETURN(const std::string text, ReadFile(f.occupancy));
  return ParseOccupancy(text);
}

absl::StatusOr<std::vector<std::string>> SelectedGrids(const Dataset& data,
                                                       const Flags& f) {
  if (f.grid.empty()) return data.GridIds();
  if (!data.occupancy().HasGrid(f.grid)) {
    return absl::NotFoundError(absl::StrCat("UnknownGrid: ", f.grid));
  }
  return std::vector<std::string>{f.grid};
}

absl::StatusOr<Table> RunStats(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const Dataset data, LoadDataset(f));
  DPC_ASSIGN_OR_RETURN(const std::vector<std::string> grids,
                       SelectedGrids(data, f));
  Table t;
  t.columns = {"grid", "n", "users", "mean", "variance"};
  for (const std::string& g : grids) {
    DPC_ASSIGN_OR_RETURN(const GridStats s, ComputeGridStats(data, g));
    t.AddRow({g, s.n, data.occupancy().UsersInGrid(g), s.mean, s.variance});
  }
  return t;
}

absl::StatusOr<Table> RunSensitivity(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const std::vector<int64_t> counts,
                       ParseIntList(f.counts, "counts"));
  Table t;
  t.columns = {"quantity", "value"};
  SensitivityReport r;
  if (f.retained.empty()) {
    DPC_ASSIGN_OR_RETURN(r, VarianceSensitivity(counts, f.bound_u));
  } else {
    DPC_ASSIGN_OR_RETURN(const std::vector<int64_t> retained,
                         ParseIntList(f.retained, "retained"));
    DPC_ASSIGN_OR_RETURN(r, ClippedVarianceSensitivity(retained, f.bound_u));
  }
  t.AddRow({std::string("delta_mu"), r.delta_mu});
  t.AddRow({std::string("delta_var"), r.delta_var});
  t.AddRow({std::string("branch"), std::string(VarianceBranchName(r.branch))});
  if (f.mub > 0) {
    const GainReport g = ComputeGainReport(counts, f.mub, f.bound_u);
    t.AddRow({std::string("delta_f"), g.delta_f});
    t.AddRow({std::string("delta_tilde"), g.delta_tilde});
    t.AddRow({std::string("opt"), g.opt});
    t.AddRow({std::string("gain"), g.gain});
  }
  return t;
}

absl::StatusOr<Table> RunBias(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const std::vector<int64_t> counts,
                       ParseIntList(f.counts, "counts"));
  DPC_ASSIGN_OR_RETURN(const std::vector<int64_t> retained,
                       ParseIntList(f.retained, "retained"));
  DPC_ASSIGN_OR_RETURN(const BiasReport r,
                       VarianceBias(counts, retained, f.bound_u));
  Table t;
  t.columns = {"quantity", "value"};
  t.AddRow({std::string("e_mu"), r.e_mu});
  t.AddRow({std::string("e_var"), r.e_var});
  t.AddRow({std::string("branch"), std::string(BiasBranchName(r.var_branch))});
  return t;
}

absl::StatusOr<MechanismSpec> SpecFromFlags(const Flags& f) {
  MechanismSpec spec;
  DPC_ASSIGN_OR_RETURN(spec.kind, ParseMechanismKind(f.mechanism));
  DPC_ASSIGN_OR_RETURN(spec.strategy, ParseStrategy(f.strategy));
  DPC_ASSIGN_OR_RETURN(spec.mub, ParseMub(f.mub_choice));
  spec.gamma = f.gamma;
  return spec;
}

absl::StatusOr<Table> RunMechanismCommand(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const MechanismSpec spec, SpecFromFlags(f));
  DPC_ASSIGN_OR_RETURN(const Dataset data, LoadDataset(f));
  DPC_ASSIGN_OR_RETURN(const std::vector<std::string> grids,
                       SelectedGrids(data, f));
  const RngStream root(f.seed);
  Table t;
  t.columns = {"grid",          "mechanism", "noisy_mean", "mean_estimate",
               "noise_scale",   "noisy_variance", "interval_lo",
               "interval_hi",   "num_arrays", "m_ub"};
  for (const std::string& g : grids) {
    RngStream rng = root.Split(g);
    DPC_ASSIGN_OR_RETURN(
        const MechanismOutput out,
        RunMechanism(spec, data.GridSamples(g), f.epsilon, f.bound_u, rng));
    const std::string none;
    t.AddRow({g, MechanismLabel(spec), out.noisy_mean, out.mean_estimate,
              out.noise_scale_mean,
              out.noisy_variance ? Cell(*out.noisy_variance) : Cell(none),
              out.interval ? Cell(out.interval->lo) : Cell(none),
              out.interval ? Cell(out.interval->hi) : Cell(none),
              out.num_arrays, out.m_ub});
  }
  return t;
}

absl::StatusOr<Table> RunClipUser(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const OccupancyArray occ, LoadOccupancy(f));
  ClipUserOptions options;
  options.protect_min_error_grid = f.protect;
  DPC_ASSIGN_OR_RETURN(const ClipUserResult r,
                       ClipUser(occ, f.bound_u, f.epsilon, options));
  Table t;
  t.columns = {"record", "stage", "user", "grid", "value"};
  const std::string none;
  t.AddRow({std::string("K"), none, none, none, r.k_factor});
  t.AddRow({std::string("E"), none, none, none, r.error_cap});
  t.AddRow({std::string("G1"), none, none, none, r.initial_g1});
  t.AddRow({std::string("composed_loss"), none, none, none,
            static_cast<double>(r.k_factor) * f.epsilon});
  for (const SuppressionEvent& e : r.trace) {
    t.AddRow({std::string("suppress"), e.stage, e.user, e.grid, e.error});
  }
  for (const ErrorBudget& b : r.per_grid_errors) {
    t.AddRow({std::string("grid_error"), none, none, b.grid, b.total});
  }
  if (f.pseudo_user) {
    DPC_ASSIGN_OR_RETURN(const PseudoUserResult p,
                         PseudoUserOptimize(occ, r.plan, f.bound_u, f.epsilon));
    for (const ErrorBudget& b : p.per_grid_errors) {
      t.AddRow({std::string("pseudo_user_m"), none, none, b.grid,
                p.per_grid_m.at(b.grid)});
      t.AddRow({std::string("pseudo_user_error"), none, none, b.grid,
                b.total});
    }
    t.AddRow({std::string("E_bar"), none, none, none, p.new_error});
  }
  return t;
}

SynthParams SynthFromFlags(const Flags& f) {
  SynthParams p;
  p.num_grids = f.grids;
  p.num_users = f.users;
  p.geo_q = f.geo_q;
  p.heavy_gamma = f.heavy_gamma;
  p.seed = f.seed;
  p.bound_u = f.bound_u;
  return p;
}

absl::StatusOr<Table> RunSynth(const Flags& f) {
  const SynthParams params = SynthFromFlags(f);
  RngStream rng(f.seed);
  RngStream occ_rng = rng.Split("occupancy");
  DPC_ASSIGN_OR_RETURN(const SynthOccupancy occ,
                       GenerateOccupancy(params, occ_rng));
  Table t;
  if (!f.values) {
    t.columns = {"user", "grid", "count"};
    for (const auto& [grid, row] : occ.occupancy.grids()) {
      for (const auto& [user, count] : row) t.AddRow({user, grid, count});
    }
    return t;
  }
  RngStream value_rng = rng.Split("values");
  DPC_ASSIGN_OR_RETURN(
      const Dataset data,
      GenerateValues(occ.occupancy, ValueModel{f.mu, f.sigma}, f.bound_u,
                     value_rng));
  t.columns = {"user", "grid", "value"};
  for (const Record& r : data.records()) t.AddRow({r.user, r.grid, r.value});
  return t;
}

absl::StatusOr<ExperimentConfig> ConfigFromFlags(const Flags& f,
                                                 int64_t default_trials) {
  ExperimentConfig config;
  config.seed = f.seed;
  config.trials = f.trials > 0 ? f.trials : default_trials;
  if (!f.eps_list.empty()) {
    DPC_ASSIGN_OR_RETURN(config.epsilons, ParseDoubleList(f.eps_list, "eps-list"));
  }
  DPC_RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

absl::StatusOr<Table> RunMonteCarlo(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const ExperimentConfig config, ConfigFromFlags(f, 10));
  ClipUserOptions options;
  options.protect_min_error_grid = f.protect;
  const SynthParams params = SynthFromFlags(f);
  std::vector<CurvePoint> points;
  if (f.kind == "privacy") {
    DPC_ASSIGN_OR_RETURN(points, MonteCarloPrivacy(params, config, options));
  } else if (f.kind == "error") {
    DPC_ASSIGN_OR_RETURN(points, MonteCarloError(params, config, options));
  } else {
    return UsageError(absl::StrCat("unknown --kind '", f.kind, "'"));
  }
  return CurveTable(points);
}

absl::StatusOr<Table> RunMae(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const MechanismSpec spec, SpecFromFlags(f));
  DPC_ASSIGN_OR_RETURN(const ExperimentConfig config, ConfigFromFlags(f, 10000));
  DPC_ASSIGN_OR_RETURN(const Dataset data, LoadDataset(f));
  DPC_ASSIGN_OR_RETURN(const std::vector<std::string> grids,
                       SelectedGrids(data, f));
  Table t;
  t.columns = {"grid", "epsilon", "value", "label"};
  for (const std::string& g : grids) {
    ExperimentConfig grid_config = config;
    grid_config.seed = RngStream(f.seed).Split(g).NextU64();
    DPC_ASSIGN_OR_RETURN(
        const std::vector<CurvePoint> points,
        MaeEval(spec, data.GridSamples(g), f.bound_u, grid_config));
    for (const CurvePoint& p : points) {
      t.AddRow({g, p.epsilon, p.value, p.label});
    }
  }
  return t;
}

absl::StatusOr<Table> RunScaling(const Flags& f) {
  DPC_ASSIGN_OR_RETURN(const std::vector<int64_t> counts,
                       ParseIntList(f.counts, "counts"));
  DPC_ASSIGN_OR_RETURN(const std::vector<int64_t> lambdas,
                       ParseIntList(f.lambdas, "lambdas"));
  DPC_ASSIGN_OR_RETURN(const ScalingReport report,
                       CheckScalingLaws(counts, lambdas, f.bound_u, f.gamma));
  return ScalingTable(report);
}

// Appends "--key value" for config entries whose flag is absent from args.
absl::Status MergeConfigFile(const std::string& path,
                             std::vector<std::string>& args) {
  DPC_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> kv = absl::StrSplit(line, absl::MaxSplits('=', 1));
    if (kv.size() != 2) {
      return UsageError(absl::StrCat("config line ", line_number,
                                     " is not key=value"));
    }
    const std::string key(absl::StripAsciiWhitespace(kv[0]));
    const std::string value(absl::StripAsciiWhitespace(kv[1]));
    const std::string flag = absl::StrCat("--", key);
    bool present = false;
    for (const std::string& a : args) {
      if (a == flag || absl::StartsWith(a, flag + "=")) present = true;
    }
    if (present) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value != "false") {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return absl::OkStatus();
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // --config is handled before CLI11 sees the arguments.
  for (size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (absl::StartsWith(args[i], "--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    if (absl::Status s = MergeConfigFile(path, args); !s.ok()) {
      std::cerr << s.message() << "\n";
      return ExitCodeFor(s);
    }
    break;
  }

  Flags f;
  CLI::App app{"User-level differential privacy toolkit for gridded data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", f.format, "Output format: csv or json");
  app.add_option("--output", f.output, "Write output to this file");

  auto* stats = app.add_subcommand("stats", "Per-grid mean and variance");
  stats->add_option("--data", f.data, "user,grid,value CSV")->required();
  stats->add_option("--u", f.bound_u, "Value bound U");
  stats->add_option("--grid", f.grid, "Single grid");

  auto* sens = app.add_subcommand("sensitivity", "Mean/variance sensitivity");
  sens->add_option("--counts", f.counts, "Comma-separated counts")->required();
  sens->add_option("--retained", f.retained, "Retained counts (clipped)");
  sens->add_option("--u", f.bound_u, "Value bound U");
  sens->add_option("--mub", f.mub, "Array capacity for the gain report");

  auto* bias = app.add_subcommand("bias", "Worst-case clipping bias");
  bias->add_option("--counts", f.counts, "Comma-separated counts")->required();
  bias->add_option("--retained", f.retained, "Retained counts")->required();
  bias->add_option("--u", f.bound_u, "Value bound U");

  auto add_mechanism_flags = [&f](CLI::App* cmd) {
    cmd->add_option("--mechanism", f.mechanism,
                    "baseline|array_average|levy|fixed_quantile|"
                    "optimized_quantile");
    cmd->add_option("--strategy", f.strategy, "wrap|best");
    cmd->add_option("--mub-choice", f.mub_choice, "median|optimized");
    cmd->add_option("--gamma", f.gamma, "Levy concentration parameter");
  };

  std::vector<std::pair<CLI::App*, CLI::Option*>> seed_opts;
  auto add_seed = [&](CLI::App* cmd) {
    seed_opts.emplace_back(
        cmd, cmd->add_option("--seed", f.seed, "Random seed (required)"));
  };

  auto* mech = app.add_subcommand("mechanism", "One private release per grid");
  mech->add_option("--data", f.data, "user,grid,value CSV")->required();
  mech->add_option("--u", f.bound_u, "Value bound U");
  mech->add_option("--eps", f.epsilon, "Privacy budget per grid");
  mech->add_option("--grid", f.grid, "Single grid");
  add_mechanism_flags(mech);
  add_seed(mech);

  auto* clip = app.add_subcommand("clip-user", "Clip-User suppression");
  clip->add_option("--occupancy", f.occupancy, "user,grid,count CSV")
      ->required();
  clip->add_option("--u", f.bound_u, "Value bound U");
  clip->add_option("--eps", f.epsilon, "Privacy budget per grid");
  clip->add_flag("--protect-min-error-grid", f.protect,
                 "Never suppress in the lowest-error grid");
  clip->add_flag("--pseudo-user", f.pseudo_user,
                 "Also report the pseudo-user re-optimization");

  auto add_synth_flags = [&f](CLI::App* cmd) {
    cmd->add_option("--grids", f.grids, "Number of grids G");
    cmd->add_option("--users", f.users, "Number of users L");
    cmd->add_option("--q", f.geo_q, "Geometric parameter q");
    cmd->add_option("--heavy-gamma", f.heavy_gamma, "Heavy-hitter boost");
    cmd->add_option("--u", f.bound_u, "Value bound U");
  };

  auto* synth = app.add_subcommand("synth", "Synthetic occupancy or dataset");
  add_synth_flags(synth);
  synth->add_flag("--values", f.values, "Emit a dataset instead of counts");
  synth->add_option("--mu", f.mu, "Gaussian mean");
  synth->add_option("--sigma", f.sigma, "Gaussian standard deviation");
  add_seed(synth);

  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo curves");
  add_synth_flags(mc);
  mc->add_option("--kind", f.kind, "privacy|error");
  mc->add_option("--trials", f.trials, "Number of occupancies");
  mc->add_option("--eps-list", f.eps_list, "Comma-separated epsilons");
  mc->add_flag("--protect-min-error-grid", f.protect,
               "Never suppress in the lowest-error grid");
  add_seed(mc);

  auto* mae = app.add_subcommand("mae", "Mean absolute error curves");
  mae->add_option("--data", f.data, "user,grid,value CSV")->required();
  mae->add_option("--u", f.bound_u, "Value bound U");
  mae->add_option("--grid", f.grid, "Single grid");
  mae->add_option("--trials", f.trials, "Releases per epsilon");
  mae->add_option("--eps-list", f.eps_list, "Comma-separated epsilons");
  add_mechanism_flags(mae);
  add_seed(mae);

  auto* scaling = app.add_subcommand("scaling", "Scaling-law checks");
  scaling->add_option("--counts", f.counts, "Comma-separated counts")
      ->required();
  scaling->add_option("--lambdas", f.lambdas, "Comma-separated factors");
  scaling->add_option("--u", f.bound_u, "Value bound U");
  scaling->add_option("--gamma", f.gamma, "Levy concentration parameter");

  std::vector<const char*> cargs;
  cargs.push_back(argv[0]);
  for (const std::string& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "UsageError: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  for (const auto& [owner, opt] : seed_opts) {
    if (owner == cmd && opt->count() == 0) {
      std::cerr << "UsageError: --seed is required for " << cmd->get_name()
                << "\n";
      return kExitUsage;
    }
  }

  absl::StatusOr<OutputFormat> format = ParseOutputFormat(f.format);
  absl::StatusOr<Table> table = absl::InvalidArgumentError("UsageError");
  if (!format.ok()) {
    table = format.status();
  } else {
    const std::string& name = cmd->get_name();
    if (name == "stats") table = RunStats(f);
    if (name == "sensitivity") table = RunSensitivity(f);
    if (name == "bias") table = RunBias(f);
    if (name == "mechanism") table = RunMechanismCommand(f);
    if (name == "clip-user") table = RunClipUser(f);
    if (name == "synth") table = RunSynth(f);
    if (name == "montecarlo") table = RunMonteCarlo(f);
    if (name == "mae") table = RunMae(f);
    if (name == "scaling") table = RunScaling(f);
  }
  if (!table.ok()) {
    std::cerr << table.status().message() << "\n";
    return ExitCodeFor(table.status());
  }
  const std::string text = FormatTable(*table, *format);
  if (f.output.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(f.output, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "IoError: cannot write " << f.output << "\n";
    return kExitIo;
  }
  return 0;
}

}  // namespace
}  // namespace dpcomposer

int main(int argc, char** argv) { return dpcomposer::Main(argc, argv); }
