#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zed/config.hpp"
#include "zed/error.hpp"
#include "zed/presets.hpp"
#include "zed/report.hpp"
#include "zed/sim.hpp"
#include "zed/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kInvalid = 2;

/// Writes to the named file, or stdout when the name is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int report_config_error(const zed::ConfigError& e) {
  std::cerr << "invalid configuration:\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
  return kInvalid;
}

zed::sim::ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw zed::ConfigError({path + ": cannot open config file"});
  return zed::config::parse(in);
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string trace;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  auto cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  else if (auto env = zed::config::seed_from_env()) cfg.seed = *env;
  if (!a.trace.empty()) cfg.trace = true;

  const auto metrics = zed::sim::run(cfg);
  Output out(a.out);
  out.stream() << zed::report::summary(cfg, metrics).dump(2) << '\n';
  if (!a.trace.empty()) {
    Output trace(a.trace);
    zed::report::write_trace_csv(trace.stream(), metrics);
  }
  return kOk;
}

struct SweepArgs {
  std::string config;
  std::vector<std::string> axes;
  std::string seeds = "1";
  std::string out;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepArgs& a) {
  auto cfg = load_config(a.config);
  std::vector<zed::sweep::Axis> axes;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> issues;
  for (const auto& spec : a.axes) {
    try {
      axes.push_back(zed::sweep::parse_axis(spec));
    } catch (const zed::ContractViolation& e) {
      issues.emplace_back(e.what());
    }
  }
  try {
    seeds = zed::sweep::parse_seeds(a.seeds);
  } catch (const zed::ContractViolation& e) {
    issues.emplace_back(e.what());
  }
  if (!issues.empty()) throw zed::ConfigError(issues);

  const auto table = zed::sweep::run(cfg, axes, seeds, a.jobs);
  Output out(a.out);
  zed::report::write_sweep_csv(out.stream(), table);
  return kOk;
}

int cmd_preset_list() {
  for (const auto& p : zed::presets::all()) std::cout << p.name << "\t" << p.description << '\n';
  return kOk;
}

struct PresetArgs {
  std::string name;
  std::string out;
  unsigned jobs = 1;
  bool quick = false;
};

int cmd_preset_run(const PresetArgs& a) {
  const auto* preset = zed::presets::find(a.name);
  if (preset == nullptr) {
    std::cerr << "unknown preset '" << a.name << "'; available:";
    for (const auto& n : zed::presets::names()) std::cerr << ' ' << n;
    std::cerr << '\n';
    return kInvalid;
  }
  const auto chosen = a.quick ? zed::presets::quick(*preset) : *preset;
  const auto results = zed::presets::run(chosen, a.jobs);
  Output out(a.out);
  zed::presets::write_csv(out.stream(), chosen, results);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware zero-energy-device simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one scenario and print a JSON summary");
  run->add_option("config", run_args.config, "Scenario config (JSON)")->required();
  run->add_option("--seed", run_args.seed, "Override the config seed (else SEED env, else config)");
  run->add_option("--trace", run_args.trace, "Write a per-slot trace CSV to this file");
  run->add_option("--out", run_args.out, "Summary output file (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Sweep config fields over a Cartesian grid and seeds");
  sweep->add_option("config", sweep_args.config, "Base scenario config (JSON)")->required();
  sweep->add_option("--axis,--axes", sweep_args.axes, "path=v1,v2,... or path=lo:hi[:step]; repeatable");
  sweep->add_option("--seeds", sweep_args.seeds, "Seed list a,b,c, range lo:hi, or count N (1..N)");
  sweep->add_option("--out", sweep_args.out, "CSV output file (default stdout)");
  sweep->add_option("--jobs", sweep_args.jobs, "Parallel runs")->check(CLI::PositiveNumber);

  auto* preset = app.add_subcommand("preset", "List or run the built-in presets");
  preset->require_subcommand(1);
  preset->add_subcommand("list", "Print preset names and descriptions");
  PresetArgs preset_args;
  auto* preset_run = preset->add_subcommand("run", "Run a preset and write its CSV");
  preset_run->add_option("name", preset_args.name, "Preset name")->required();
  preset_run->add_option("--out", preset_args.out, "CSV output file (default stdout)");
  preset_run->add_option("--jobs", preset_args.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  preset_run->add_flag("--quick", preset_args.quick, "Reduced seeds and horizons for a fast smoke run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (preset_run->parsed()) return cmd_preset_run(preset_args);
    return cmd_preset_list();
  } catch (const zed::ConfigError& e) {
    return report_config_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
