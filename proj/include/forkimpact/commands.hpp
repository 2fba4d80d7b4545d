#pragma once

// Subcommand bodies, kept apart from argument parsing so they can be driven
// in-process. Exit codes: 0 ok, 1 suite failure, 2 input error,
// 3 calibration failure.

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "forkimpact/forkimpact.hpp"

namespace forkimpact::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSuiteFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCalibrationFailure = 3;

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotStationary:
    case ErrorCode::TiltOutOfRange: return kExitCalibrationFailure;
    default: return kExitInputError;
  }
}

inline int cmd_analyze(const std::string& log_path, const AnalysisConfig& cfg, ReportFormat format, std::ostream& out,
                       std::ostream& err) {
  try {
    const auto traces = parse_log_file(log_path, NodeMapping::from(cfg), cfg.sample_rate);
    if (traces.empty()) {
      emit_config_echo(out, cfg);
      emit_report(out, {}, format);
      return kExitOk;
    }
    const auto [front, back] = select_pair(traces);
    const AnalysisResult res = analyze(front, back, cfg);
    emit_run_report(out, res, cfg, format);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

inline int cmd_calibrate(const std::string& log_path, const AnalysisConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto traces = parse_log_file(log_path, NodeMapping::from(cfg), cfg.sample_rate);
    if (traces.empty()) throw Error(ErrorCode::MissingNode, log_path + ": log has no samples");
    for (const auto& tr : traces) {
      NodeCalibration cal;
      (void)calibrate_node(tr, cfg, cal);
      out << tr.node_id << " (" << to_string(tr.position) << "): roll " << fixed(rad2deg(cal.params.roll), 3)
          << " deg, pitch " << fixed(rad2deg(cal.params.pitch), 3) << " deg, yaw "
          << (cal.params.yaw_estimate ? fixed(rad2deg(*cal.params.yaw_estimate), 3) + " deg" : std::string("n/a"))
          << ", gross yaw misalignment " << (cal.params.yaw_gross_misalignment ? "YES" : "no") << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

struct PowerArgs {
  std::vector<double> triggers{720.0, 5000.0};
  double active_s = 0.5;
  std::optional<double> solve_years;
  PowerProfile profile;
};

inline int cmd_power(const PowerArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.solve_years) {
      for (double n : args.triggers) {
        const double t = solve_active_time(*args.solve_years, n, args.profile);
        out << "triggers/day " << forkimpact::detail::format_double(n) << ": active_s_per_trigger " << fixed(t, 6)
            << " s for " << fixed(*args.solve_years, 2) << " years\n";
      }
      return kExitOk;
    }
    out << "triggers/day\tactive_s\tWh/day\tyears\n";
    for (double n : args.triggers) {
      PowerProfile p = args.profile;
      p.triggers_per_day = n;
      p.active_s_per_trigger = args.active_s;
      out << forkimpact::detail::format_double(n) << '\t' << fixed(args.active_s, 3) << '\t'
          << fixed(daily_energy(p), 6) << '\t' << fixed(autonomy_years(p), 1) << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

inline int cmd_suite(const AnalysisConfig& cfg, const synth::SuiteOptions& opt, ReportFormat format, std::ostream& out,
                     std::ostream& err) {
  try {
    const auto rep = synth::run_scenario_suite(cfg, opt);
    emit_config_echo(out, cfg);
    synth::emit_confusion_report(out, rep, format);
    return rep.all_passed() ? kExitOk : kExitSuiteFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

inline int cmd_sweep(const std::string& parameter, const std::vector<double>& values, const AnalysisConfig& cfg,
                     const synth::SuiteOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    synth::emit_sweep(out, synth::sensitivity_sweep(parameter, values, cfg, opt));
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

/// Writes one suite scenario as a log fixture (and optionally its truth table).
inline int cmd_generate(const std::string& scenario, const std::string& out_path, const std::string& truth_path,
                        const AnalysisConfig& cfg, const synth::SuiteOptions& opt, std::ostream& err) {
  try {
    for (const auto& sc : synth::default_scenarios(opt)) {
      if (sc.name != scenario) continue;
      synth::GeneratorOptions gen = opt.generator;
      gen.front_id = cfg.front_node_id;
      gen.back_id = cfg.back_node_id;
      gen.noise_seed = synth::detail::mix(opt.seed ^ synth::detail::fnv1a(sc.name));
      const auto run = synth::generate(sc.specs, cfg, gen);
      std::ofstream log(out_path);
      if (!log) throw Error(ErrorCode::Io, "cannot write '" + out_path + "'");
      write_log(log, {run.front, run.back});
      if (!truth_path.empty()) {
        std::ofstream truth(truth_path);
        if (!truth) throw Error(ErrorCode::Io, "cannot write '" + truth_path + "'");
        truth << "t_onset\tt_end\tevent\texpected\tonset_to_peak\n";
        for (const auto& t : run.truth)
          truth << fixed(t.t_onset, 3) << '\t' << fixed(t.t_end, 3) << '\t' << synth::describe(sc.specs[t.spec_index].kind)
                << '\t' << synth::to_string(t.expected) << '\t' << fixed(t.onset_to_peak, 4) << '\n';
      }
      return kExitOk;
    }
    throw Error(ErrorCode::UnknownParameter, "no scenario named '" + scenario + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace forkimpact::cli
