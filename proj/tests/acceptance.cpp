// Acceptance criteria 1-8. One PASS/FAIL line each; exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "forkimpact/commands.hpp"
#include "forkimpact/forkimpact.hpp"
#include "oracles.hpp"

using namespace forkimpact;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int d = 3) { return fixed(v, d); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void check_runtime(Verdict& v, double elapsed, double budget) {
  if (elapsed >= budget) v.fail("runtime " + num(elapsed) + " s exceeds " + num(budget, 0) + " s");
}

std::vector<ImuSample> window_for(double phi, double theta, double sigma, std::mt19937_64& rng) {
  const auto g = oracle::tilted_gravity(phi, theta);
  std::normal_distribution<double> noise(0.0, sigma > 0 ? sigma : 1.0);
  std::vector<ImuSample> w;
  for (int i = 0; i < 100; ++i) {  // 1 s at 100 Hz
    ImuSample s{i * 0.01, g[0], g[1], g[2], false};
    if (sigma > 0) s.ax += noise(rng), s.ay += noise(rng), s.az += noise(rng);
    w.push_back(s);
  }
  return w;
}

// 1. calibration round trip
Verdict criterion1() {
  Verdict v;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-deg2rad(30), deg2rad(30));
  const auto t0 = Clock::now();
  double worst_clean = 0.0, worst_noisy = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double phi = angle(rng), theta = angle(rng);
    const auto clean = estimate_tilt(window_for(phi, theta, 0.0, rng));
    worst_clean = std::max({worst_clean, std::abs(clean.roll - phi), std::abs(clean.pitch - theta)});
    const auto noisy = estimate_tilt(window_for(phi, theta, 0.05, rng));
    worst_noisy = std::max({worst_noisy, std::abs(noisy.roll - phi), std::abs(noisy.pitch - theta)});
  }
  const double elapsed = seconds_since(t0);
  if (worst_clean > 1e-6) v.fail("noise-free error " + sci(worst_clean) + " rad");
  if (worst_noisy > deg2rad(0.5)) v.fail("noisy error " + num(rad2deg(worst_noisy)) + " deg");
  check_runtime(v, elapsed, 1.0);
  if (v.pass)
    v.detail = "max err " + sci(worst_clean) + " rad clean, " + num(rad2deg(worst_noisy), 4) +
               " deg noisy, " + num(elapsed) + " s";
  return v;
}

// 2. rotation matrix properties
Verdict criterion2() {
  Verdict v;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const Eigen::Matrix3d r = euler_321(angle(rng), angle(rng), angle(rng));
    worst_orth = std::max(worst_orth, (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    worst_det = std::max(worst_det, std::abs(r.determinant() - 1.0));
  }
  if (worst_orth >= 1e-12) v.fail("||R^T R - I|| = " + sci(worst_orth));
  if (worst_det >= 1e-12) v.fail("|det - 1| = " + sci(worst_det));
  if (v.pass) v.detail = "10^5 triples, max orth err " + sci(worst_orth);
  return v;
}

// 3. segmentation vs brute force
Verdict criterion3() {
  Verdict v;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 1000);
  const AnalysisConfig cfg;
  const auto t0 = Clock::now();
  std::size_t segments = 0;
  for (int trial = 0; trial < 1000 && v.pass; ++trial) {
    const std::size_t n = len(rng);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / 100.0;
    const auto x = oracle::random_pulse_trace(rng, n);
    const auto got = extract_segments(t, x, cfg);
    const auto want = oracle::brute_force_segments(t, x, cfg);
    bool same = got.size() == want.size();
    for (std::size_t k = 0; same && k < got.size(); ++k) same = got[k].first == want[k].first && got[k].last == want[k].last;
    if (!same) v.fail("mismatch on trace " + std::to_string(trial));
    segments += got.size();
  }
  const double elapsed = seconds_since(t0);
  check_runtime(v, elapsed, 10.0);
  if (v.pass) v.detail = "1000 traces, " + std::to_string(segments) + " segments, " + num(elapsed) + " s";
  return v;
}

// 4. power figures
Verdict criterion4() {
  Verdict v;
  const PowerProfile base;
  const double t_star = solve_active_time(8.8, 720, base);
  PowerProfile high = base;
  high.triggers_per_day = 5000;
  high.active_s_per_trigger = t_star;
  const double years_high = autonomy_years(high);
  if (std::abs(years_high - 2.0) > 0.05 * 2.0) v.fail("5000/day gives " + num(years_high) + " years");
  PowerProfile low = base;
  low.triggers_per_day = 720;
  low.active_s_per_trigger = t_star;
  const double rel = std::abs(autonomy_years(low) - 8.8) / 8.8;
  if (rel >= 1e-4) v.fail("round-trip error " + sci(rel));
  if (v.pass)
    v.detail = "t* = " + num(t_star, 5) + " s, 5000/day -> " + num(years_high, 4) + " y, round-trip " +
               sci(rel);
  return v;
}

// Named outcomes of criterion 5 for one suite run.
std::vector<std::pair<std::string, bool>> criterion5_outcomes(const synth::ConfusionReport& rep) {
  using namespace synth;
  std::vector<std::pair<std::string, bool>> out;
  std::set<Zone> zones_ok;
  for (const auto& s : rep.scenarios) {
    if (s.error) {
      out.emplace_back(s.name + " pipeline", false);
      continue;
    }
    const auto& evs = s.analysis.events;
    auto count = [&](EventKind k) {
      return std::count_if(evs.begin(), evs.end(), [&](const EventReport& e) { return e.kind == k; });
    };
    if (s.name.starts_with("collision_")) {
      for (const auto& t : s.truth) {
        const auto& c = std::get<Collision>(s.specs[t.spec_index].kind);
        bool hit = false, collision_here = false;
        for (const auto& e : evs) {
          if (e.kind != EventKind::Collision || !overlaps(e, t)) continue;
          collision_here = true;
          hit = hit || e.zone == c.zone;
        }
        const std::string tag = s.name + " " + describe(c) + " @" + fixed(t.t_onset, 2);
        if (c.severity == CollisionSeverity::VerySoft) {
          out.emplace_back(tag + " not a collision", !collision_here);
        } else {
          out.emplace_back(tag + " localized", hit);
          if (hit) zones_ok.insert(c.zone);
        }
      }
    } else if (s.name == "normal_braking" || s.name == "sudden_start") {
      out.emplace_back(s.name + " emits nothing", evs.empty());
    } else if (s.name == "hard_braking" || s.name == "hard_braking_2") {
      out.emplace_back(s.name + " harsh braking", count(EventKind::HarshBraking) == static_cast<long>(s.truth.size()));
    } else if (s.name == "loading_truck") {
      out.emplace_back(s.name + " only BT vibrations",
                       std::all_of(evs.begin(), evs.end(), [](const EventReport& e) {
                         return (e.kind == EventKind::VibrationShort || e.kind == EventKind::VibrationLong) &&
                                e.label == SeverityLabel::BT;
                       }));
    } else if (s.name == "driving_bumpy_road_fast") {
      out.emplace_back(s.name + " AT! vibration",
                       std::any_of(evs.begin(), evs.end(), [](const EventReport& e) { return e.label == SeverityLabel::AT; }));
    } else if (s.name == "benign_hour") {
      const double span = s.specs.back().t_onset + s.specs.back().duration - s.specs.front().t_onset;
      out.emplace_back(s.name + " >= 1 h", span >= 3600.0 - 10.0);
      out.emplace_back(s.name + " no collision/braking",
                       count(EventKind::Collision) == 0 && count(EventKind::HarshBraking) == 0);
    }
  }
  out.emplace_back("4/4 zones", zones_ok.size() == 4);
  for (const auto& a : rep.assertions) out.emplace_back("suite: " + a.name, a.passed);
  return out;
}

Verdict verdict_of(const std::vector<std::pair<std::string, bool>>& outcomes) {
  Verdict v;
  for (const auto& [name, ok] : outcomes)
    if (!ok) v.fail(name);
  return v;
}

std::vector<std::pair<std::string, bool>> baseline;

// 5. scenario suite
Verdict criterion5() {
  const auto t0 = Clock::now();
  const auto rep = synth::run_scenario_suite({}, {});
  const double elapsed = seconds_since(t0);
  baseline = criterion5_outcomes(rep);
  Verdict v = verdict_of(baseline);
  check_runtime(v, elapsed, 30.0);
  if (v.pass)
    v.detail = std::to_string(baseline.size()) + " checks, " + std::to_string(rep.event_count()) + " events, " +
               num(elapsed) + " s";
  return v;
}

SensorTrace negate_ay(SensorTrace tr) {
  for (auto& s : tr.samples) s.ay = -s.ay;
  return tr;
}

// 6. mirror / swap symmetry
Verdict criterion6() {
  Verdict v;
  const AnalysisConfig cfg;
  synth::SuiteOptions opt;
  opt.include_long_run = false;
  std::size_t checked = 0;
  for (const auto& sc : synth::default_scenarios(opt)) {
    synth::GeneratorOptions gen = opt.generator;
    gen.noise_seed = synth::detail::mix(opt.seed ^ synth::detail::fnv1a(sc.name));
    const auto run = synth::generate(sc.specs, cfg, gen);
    const auto base = analyze(run.front, run.back, cfg).events;

    const auto mirrored = analyze(negate_ay(run.front), negate_ay(run.back), cfg).events;
    SensorTrace f = run.back, b = run.front;
    std::swap(f.position, b.position);
    std::swap(f.node_id, b.node_id);
    const auto swapped = analyze(f, b, cfg).events;

    if (mirrored.size() != base.size() || swapped.size() != base.size()) {
      v.fail(sc.name + ": event count changed");
      continue;
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (mirrored[i].kind != base[i].kind || swapped[i].kind != base[i].kind) v.fail(sc.name + ": kind changed");
      if (!base[i].zone) continue;
      ++checked;
      if (mirrored[i].zone != mirror_left_right(*base[i].zone)) v.fail(sc.name + ": left/right not mirrored");
      if (swapped[i].zone != mirror_front_back(*base[i].zone)) v.fail(sc.name + ": front/back not mirrored");
    }
  }
  if (checked == 0) v.fail("no collisions to check");
  if (v.pass) v.detail = std::to_string(checked) + " collision zones mirrored exactly";
  return v;
}

// 7. determinism of analyze and suite
Verdict criterion7() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / ("forkimpact_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string log = (dir / "collision_rb.csv").string();
  std::ostringstream sink;
  synth::SuiteOptions opt;
  if (cli::cmd_generate("collision_rb", log, "", {}, opt, sink) != 0) v.fail("fixture generation: " + sink.str());

  auto analyze_once = [&](ReportFormat f) {
    std::ostringstream out, err;
    cli::cmd_analyze(log, {}, f, out, err);
    return out.str();
  };
  auto suite_once = [&] {
    std::ostringstream out, err;
    cli::cmd_suite({}, opt, ReportFormat::Machine, out, err);
    return out.str();
  };
  for (auto f : {ReportFormat::Human, ReportFormat::Machine})
    if (analyze_once(f) != analyze_once(f)) v.fail("cmd_analyze output differs");
  const std::string s1 = suite_once();
  if (s1 != suite_once()) v.fail("cmd_suite output differs");
  if (analyze_once(ReportFormat::Human).find("RB collision") == std::string::npos) v.fail("fixture has no RB collision");
  fs::remove_all(dir);
  if (v.pass) v.detail = "analyze (human, machine) and suite byte-identical";
  return v;
}

// 8. tilt robustness
Verdict criterion8() {
  Verdict v;
  std::vector<std::pair<double, double>> tilts = {{30, 30}, {-30, 30}, {30, -30}, {-30, -30}, {30, 0}, {0, -30}};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(-30.0, 30.0);
  for (int k = 0; k < 4; ++k) tilts.emplace_back(angle(rng), angle(rng));
  for (const auto& [roll, pitch] : tilts) {
    synth::SuiteOptions opt;
    opt.generator.front_mount = {deg2rad(roll), deg2rad(pitch), 0.0};
    opt.generator.back_mount = {deg2rad(-pitch), deg2rad(roll), 0.0};
    const auto outcomes = criterion5_outcomes(synth::run_scenario_suite({}, opt));
    if (outcomes != baseline) {
      std::string which = "outcome set differs";
      for (std::size_t i = 0; i < std::min(outcomes.size(), baseline.size()); ++i)
        if (outcomes[i] != baseline[i]) {
          which = outcomes[i].first;
          break;
        }
      v.fail("roll " + num(roll, 1) + " pitch " + num(pitch, 1) + ": " + which);
    }
  }
  if (v.pass) v.detail = std::to_string(tilts.size()) + " roll/pitch injections, outcomes unchanged";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"calibration round-trip", criterion1},   {"rotation matrix properties", criterion2},
      {"segmentation oracle equivalence", criterion3}, {"power reproduction", criterion4},
      {"scenario suite", criterion5},           {"mirror/swap symmetry", criterion6},
      {"determinism", criterion7},              {"tilt robustness", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << v.detail
              << std::endl;
  }
  return failed;
}
