#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "forkimpact/commands.hpp"

namespace {

using namespace forkimpact;

struct CommonFlags {
  std::string config_path;
  std::string format = "human";
  std::map<std::string, std::string> overrides;  // config key -> raw value
  std::uint64_t seed = 1;
};

std::string flag_name(std::string_view key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

void add_config_flags(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config_path, "key = value config file");
  cmd.add_option("--format", flags.format, "report format")->check(CLI::IsMember({"human", "machine"}));
  cmd.add_option_function<std::string>(
      "--front-node", [&](const std::string& v) { flags.overrides["front_node_id"] = v; }, "node id of the front sensor");
  cmd.add_option_function<std::string>(
      "--back-node", [&](const std::string& v) { flags.overrides["back_node_id"] = v; }, "node id of the back sensor");
  for (auto key : AnalysisConfig::keys()) {
    if (key.ends_with("_node_id")) continue;
    const std::string k(key);
    cmd.add_option_function<std::string>(
        flag_name(key), [&flags, k](const std::string& v) { flags.overrides[k] = v; }, "override " + k);
  }
}

AnalysisConfig effective_config(const CommonFlags& flags) {
  AnalysisConfig cfg = load_config(flags.config_path);
  for (const auto& key : AnalysisConfig::keys()) {
    auto it = flags.overrides.find(std::string(key));
    if (it != flags.overrides.end()) cfg.set(key, it->second, "cli");
  }
  cfg.validate();
  return cfg;
}

ReportFormat format_of(const CommonFlags& f) { return f.format == "machine" ? ReportFormat::Machine : ReportFormat::Human; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forklift impact detection from dual-node accelerometer logs"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string log_path;

  auto* analyze = app.add_subcommand("analyze", "detect, classify and localize events in a log");
  analyze->add_option("log", log_path, "CSV log file")->required();
  add_config_flags(*analyze, flags);

  auto* calibrate = app.add_subcommand("calibrate", "report mounting angles of each node");
  calibrate->add_option("log", log_path, "CSV log file")->required();
  add_config_flags(*calibrate, flags);

  cli::PowerArgs power_args;
  double p_sleep_uw = power_args.profile.p_sleep_w * 1e6;
  double p_active_mw = power_args.profile.p_active_w * 1e3;
  double solve_years = 0.0;
  auto* power = app.add_subcommand("power", "battery autonomy under wake-on-motion");
  power->add_option("--triggers", power_args.triggers, "wake-ups per day (repeatable)")->check(CLI::PositiveNumber);
  power->add_option("--active-s", power_args.active_s, "active seconds per wake-up")->check(CLI::NonNegativeNumber);
  power->add_option("--battery-wh", power_args.profile.battery_wh, "battery capacity")->check(CLI::PositiveNumber);
  power->add_option("--p-sleep-uw", p_sleep_uw, "sleep power in microwatts")->check(CLI::PositiveNumber);
  power->add_option("--p-active-mw", p_active_mw, "active power in milliwatts")->check(CLI::PositiveNumber);
  auto* solve_opt = power->add_option("--solve-years", solve_years, "solve the active time for this autonomy")
                        ->check(CLI::PositiveNumber);

  synth::SuiteOptions suite_opts;
  double roll_deg = 0.0, pitch_deg = 0.0, yaw_deg = 0.0;
  bool short_run = false;
  auto add_suite_flags = [&](CLI::App& cmd) {
    add_config_flags(cmd, flags);
    cmd.add_option("--seed", flags.seed, "generator seed");
    cmd.add_option("--roll-deg", roll_deg, "injected roll misalignment");
    cmd.add_option("--pitch-deg", pitch_deg, "injected pitch misalignment");
    cmd.add_option("--yaw-deg", yaw_deg, "injected yaw misalignment");
    cmd.add_flag("--no-long-run", short_run, "skip the hour of benign traffic");
  };

  auto* suite = app.add_subcommand("suite", "run the synthetic scenario suite");
  add_suite_flags(*suite);

  std::string sweep_param;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "rerun the suite across values of one parameter");
  sweep->add_option("--param", sweep_param, "config key or 'yaw'")->required();
  sweep->add_option("--values", sweep_values, "values to try")->required();
  add_suite_flags(*sweep);

  std::string scenario, out_path, truth_path;
  auto* generate = app.add_subcommand("generate", "write a suite scenario as a log fixture");
  generate->add_option("--scenario", scenario, "scenario name, e.g. collision_rb")->required();
  generate->add_option("--out", out_path, "output log path")->required();
  generate->add_option("--truth", truth_path, "optional ground-truth table path");
  add_suite_flags(*generate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitInputError;
  }

  AnalysisConfig cfg;
  try {
    cfg = effective_config(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitInputError;
  }
  suite_opts.seed = flags.seed;
  suite_opts.include_long_run = !short_run;
  suite_opts.generator.front_mount = {deg2rad(roll_deg), deg2rad(pitch_deg), deg2rad(yaw_deg)};
  suite_opts.generator.back_mount = suite_opts.generator.front_mount;

  if (*analyze) return cli::cmd_analyze(log_path, cfg, format_of(flags), std::cout, std::cerr);
  if (*calibrate) return cli::cmd_calibrate(log_path, cfg, std::cout, std::cerr);
  if (*power) {
    power_args.profile.p_sleep_w = p_sleep_uw * 1e-6;
    power_args.profile.p_active_w = p_active_mw * 1e-3;
    if (*solve_opt) power_args.solve_years = solve_years;
    return cli::cmd_power(power_args, std::cout, std::cerr);
  }
  if (*suite) return cli::cmd_suite(cfg, suite_opts, format_of(flags), std::cout, std::cerr);
  if (*sweep) return cli::cmd_sweep(sweep_param, sweep_values, cfg, suite_opts, std::cout, std::cerr);
  if (*generate) return cli::cmd_generate(scenario, out_path, truth_path, cfg, suite_opts, std::cerr);
  return cli::kExitInputError;
}
