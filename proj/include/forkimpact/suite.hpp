#pragma once

// End-to-end scenario suite: generate labeled traces, run the full pipeline,
// score detections against the injected ground truth.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "forkimpact/pipeline.hpp"
#include "forkimpact/report.hpp"
#include "forkimpact/synth.hpp"

namespace forkimpact::synth {

struct Scenario {
  std::string name;
  std::string description;
  std::vector<ScenarioSpec> specs;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  GeneratorOptions generator;
  bool include_long_run = true;   // the hour of benign traffic
  double long_run_hours = 1.0;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Lays events out back to back with a fixed quiet gap.
class Schedule {
 public:
  Schedule(double start, std::uint64_t seed) : t_(start), seed_(seed) {}

  Schedule& add(ScenarioKind kind, double duration, double gap = 5.0) {
    specs_.push_back({kind, t_, duration, mix(seed_ + specs_.size())});
    t_ += duration + gap;
    return *this;
  }
  std::vector<ScenarioSpec> take() { return std::move(specs_); }

 private:
  double t_;
  std::uint64_t seed_;
  std::vector<ScenarioSpec> specs_;
};

}  // namespace detail

inline std::vector<Scenario> default_scenarios(const SuiteOptions& opt = {}) {
  using CS = CollisionSeverity;
  const double start = opt.generator.quiet_until() + 1.0;
  std::vector<Scenario> out;
  std::uint64_t salt = 0;
  auto sched = [&] { return detail::Schedule(start, detail::mix(opt.seed * 1000 + ++salt)); };
  auto collisions = [&](std::string name, Zone z, std::vector<CS> grades, std::string desc) {
    auto s = sched();
    for (CS g : grades) s.add(Collision{z, g}, 0.25);
    out.push_back({std::move(name), std::move(desc), s.take()});
  };

  collisions("collision_rb", Zone::RightBack, {CS::VerySoft, CS::Soft, CS::Hard, CS::Hard, CS::Hard},
             "5x RB (very soft, soft, hard, harder, hard)");
  collisions("collision_lb", Zone::LeftBack, {CS::Hard, CS::Hard, CS::Hard, CS::Soft, CS::Hard},
             "5x LB (hard, hard, hard, soft, hard)");
  collisions("collision_rf", Zone::RightFront, {CS::Soft, CS::Hard, CS::Hard}, "3x RF (soft, hard, hard)");
  collisions("collision_lf", Zone::LeftFront, {CS::Hard, CS::Soft, CS::VerySoft}, "3x LF (hard, soft, very soft)");

  {
    auto s = sched();
    const double durations[] = {0.4, 0.6, 1.0, 1.6, 2.0};
    for (int i = 0; i < 11; ++i) s.add(BumpyDriving{BumpSpeed::Normal}, durations[i % 5]);
    out.push_back({"driving_bumpy_road", "normal driving over bumps", s.take()});
  }
  {
    auto s = sched();
    for (double d : {0.5, 1.6, 0.7, 2.0, 0.4, 1.0}) s.add(BumpyDriving{BumpSpeed::Fast}, d);
    out.push_back({"driving_bumpy_road_fast", "taking bumps fast", s.take()});
  }
  {
    auto s = sched();
    const double durations[] = {0.15, 0.25, 0.4, 0.2, 0.3};
    for (int i = 0; i < 10; ++i) s.add(TruckLoading{}, durations[i % 5], 3.0);
    out.push_back({"loading_truck", "normally loading a truck", s.take()});
  }
  {
    auto s = sched();
    for (int i = 0; i < 3; ++i) s.add(Braking{BrakingIntensity::Soft}, 2.0);
    out.push_back({"normal_braking", "soft braking", s.take()});
  }
  {
    auto s = sched();
    for (int i = 0; i < 2; ++i) s.add(Braking{BrakingIntensity::Hard}, 2.0);
    out.push_back({"hard_braking", "2x harsh braking", s.take()});
  }
  {
    auto s = sched();
    for (int i = 0; i < 3; ++i) s.add(Braking{BrakingIntensity::VeryHard}, 1.8);
    out.push_back({"hard_braking_2", "3x very harsh braking", s.take()});
  }
  {
    auto s = sched();
    for (int i = 0; i < 2; ++i) s.add(SuddenStart{}, 2.0);
    out.push_back({"sudden_start", "2x sudden start", s.take()});
  }
  {
    auto s = sched();
    for (int i = 0; i < 3; ++i) s.add(LoadPickup{}, 0.6);
    out.push_back({"picking_up_load", "brutally picking up a load", s.take()});
  }
  {
    auto s = sched();
    for (int i = 0; i < 3; ++i) s.add(ForkContact{}, 0.5);
    out.push_back({"forks_up_down", "deliberate fork-ground contact", s.take()});
  }
  if (opt.include_long_run) {
    auto s = sched();
    std::mt19937_64 rng(detail::mix(opt.seed + 77));
    std::uniform_int_distribution<int> pick(0, 5);
    const double slot = 10.0;
    const auto slots = static_cast<int>(opt.long_run_hours * 3600.0 / slot);
    for (int i = 0; i < slots; ++i) {
      switch (pick(rng)) {
        case 0: s.add(Idle{}, 4.0, slot - 4.0); break;
        case 1: s.add(TruckLoading{}, 0.3, slot - 0.3); break;
        case 2: s.add(BumpyDriving{BumpSpeed::Normal}, 1.0, slot - 1.0); break;
        case 3: s.add(Braking{BrakingIntensity::Soft}, 2.0, slot - 2.0); break;
        case 4: s.add(LoadPickup{}, 0.6, slot - 0.6); break;
        default: s.add(ForkContact{}, 0.5, slot - 0.5); break;
      }
    }
    out.push_back({"benign_hour", "idle and benign traffic", s.take()});
  }
  return out;
}

// --- scoring -------------------------------------------------------------------

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ScenarioResult {
  std::string name;
  std::string description;
  GroundTruth truth;
  std::vector<ScenarioSpec> specs;
  AnalysisResult analysis;
  std::optional<std::string> error;  // pipeline failure
};

struct ClassMetrics {
  std::string name;
  std::size_t events = 0;          // events of this class
  std::size_t correct_events = 0;  // ... overlapping truth expecting it
  std::size_t truth = 0;           // truth entries expecting this class
  std::size_t detected = 0;        // ... matched by an event of this class
  double precision() const { return events ? static_cast<double>(correct_events) / static_cast<double>(events) : 1.0; }
  double recall() const { return truth ? static_cast<double>(detected) / static_cast<double>(truth) : 1.0; }
  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct ConfusionReport {
  std::vector<ScenarioResult> scenarios;
  std::vector<ClassMetrics> classes;  // collision, harsh_braking, vibration
  std::size_t localized = 0;          // collision truths matched with the right zone
  std::size_t collisions_matched = 0;
  std::vector<Assertion> assertions;

  double localization_accuracy() const {
    return collisions_matched ? static_cast<double>(localized) / static_cast<double>(collisions_matched) : 1.0;
  }
  bool all_passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
  }
  std::size_t event_count() const {
    std::size_t n = 0;
    for (const auto& s : scenarios) n += s.analysis.events.size();
    return n;
  }
  const ScenarioResult* find(std::string_view name) const {
    for (const auto& s : scenarios)
      if (s.name == name) return &s;
    return nullptr;
  }
};

inline constexpr double kMatchSlack = 0.25;  // seconds around a truth window

inline bool overlaps(const EventReport& ev, const TruthEntry& t) {
  return ev.t_start <= t.t_end + kMatchSlack && ev.t_end >= t.t_onset - kMatchSlack;
}

inline std::optional<Expected> class_of(const EventReport& ev) {
  switch (ev.kind) {
    case EventKind::Collision: return Expected::Collision;
    case EventKind::HarshBraking: return Expected::HarshBraking;
    default: return Expected::Vibration;
  }
}

inline ScenarioResult run_scenario(const Scenario& sc, const AnalysisConfig& cfg, const SuiteOptions& opt) {
  ScenarioResult r;
  r.name = sc.name;
  r.description = sc.description;
  r.specs = sc.specs;
  GeneratorOptions gen = opt.generator;
  gen.noise_seed = detail::mix(opt.seed ^ detail::fnv1a(sc.name));
  try {
    GeneratedRun run = generate(sc.specs, cfg, gen);
    r.truth = std::move(run.truth);
    r.analysis = analyze(run.front, run.back, cfg);
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

namespace detail {

inline std::size_t count_kind(const ScenarioResult& r, EventKind k) {
  return static_cast<std::size_t>(std::count_if(r.analysis.events.begin(), r.analysis.events.end(),
                                                [&](const EventReport& e) { return e.kind == k; }));
}

}  // namespace detail

/// Scores one batch of scenario results and evaluates the suite assertions.
inline ConfusionReport score(std::vector<ScenarioResult> results) {
  ConfusionReport rep;
  rep.classes = {{"collision"}, {"harsh_braking"}, {"vibration"}};
  auto metrics = [&](Expected e) -> ClassMetrics& {
    return rep.classes[e == Expected::Collision ? 0 : e == Expected::HarshBraking ? 1 : 2];
  };

  for (const auto& r : results) {
    for (const auto& ev : r.analysis.events) {
      const Expected c = *class_of(ev);
      auto& m = metrics(c);
      ++m.events;
      if (std::any_of(r.truth.begin(), r.truth.end(),
                      [&](const TruthEntry& t) { return t.expected == c && overlaps(ev, t); }))
        ++m.correct_events;
    }
    for (const auto& t : r.truth) {
      if (t.expected != Expected::Collision && t.expected != Expected::HarshBraking && t.expected != Expected::Vibration)
        continue;
      auto& m = metrics(t.expected);
      ++m.truth;
      const EventReport* hit = nullptr;
      for (const auto& ev : r.analysis.events)
        if (class_of(ev) == t.expected && overlaps(ev, t)) {
          hit = &ev;
          break;
        }
      if (!hit) continue;
      ++m.detected;
      if (t.expected == Expected::Collision) {
        ++rep.collisions_matched;
        if (hit->zone == t.zone) ++rep.localized;
      }
    }
  }

  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.assertions.push_back({std::move(name), ok, std::move(detail)});
  };

  for (const auto& r : results) {
    if (r.error) {
      add(r.name + ": pipeline", false, *r.error);
      continue;
    }
    const auto& events = r.analysis.events;
    const std::string summary = summarize(events);
    const std::size_t n_coll = detail::count_kind(r, EventKind::Collision);
    const std::size_t n_brake = detail::count_kind(r, EventKind::HarshBraking);

    if (r.name.rfind("collision_", 0) == 0) {
      std::size_t expected = 0, correct = 0, soft_missed = 0;
      for (const auto& t : r.truth) {
        const bool is_collision = t.expected == Expected::Collision;
        bool hit = false, stray = false;
        for (const auto& ev : events) {
          if (!overlaps(ev, t) || ev.kind != EventKind::Collision) continue;
          if (is_collision && ev.zone == t.zone) hit = true;
          if (!is_collision) stray = true;
        }
        if (is_collision) {
          ++expected;
          correct += hit ? 1 : 0;
        } else if (stray) {
          ++soft_missed;
        }
      }
      add(r.name + ": medium/hard collisions localized", correct == expected,
          std::to_string(correct) + "/" + std::to_string(expected) + " correct zone; " + summary);
      add(r.name + ": very soft collisions not reported as collision", soft_missed == 0,
          std::to_string(soft_missed) + " very soft collisions reported as collision");
    } else if (r.name == "normal_braking" || r.name == "sudden_start") {
      add(r.name + ": emits nothing", events.empty(), summary);
    } else if (r.name == "hard_braking" || r.name == "hard_braking_2") {
      std::size_t hits = 0;
      for (const auto& t : r.truth)
        if (std::any_of(events.begin(), events.end(),
                        [&](const EventReport& e) { return e.kind == EventKind::HarshBraking && overlaps(e, t); }))
          ++hits;
      add(r.name + ": every harsh braking detected", hits == r.truth.size() && n_coll == 0,
          std::to_string(hits) + "/" + std::to_string(r.truth.size()) + "; " + summary);
    } else if (r.name == "loading_truck") {
      const bool only_bt = !events.empty() && std::all_of(events.begin(), events.end(), [](const EventReport& e) {
        return (e.kind == EventKind::VibrationShort || e.kind == EventKind::VibrationLong) &&
               e.label == SeverityLabel::BT;
      });
      add(r.name + ": only BT vibrations", only_bt, summary);
    } else if (r.name == "driving_bumpy_road_fast") {
      const bool any_at = std::any_of(events.begin(), events.end(), [](const EventReport& e) {
        return e.label == SeverityLabel::AT;
      });
      add(r.name + ": at least one AT! vibration", any_at, summary);
    } else {
      add(r.name + ": no collision or harsh braking", n_coll == 0 && n_brake == 0,
          std::to_string(n_coll) + " collisions, " + std::to_string(n_brake) + " harsh brakings");
    }
  }
  rep.scenarios = std::move(results);
  return rep;
}

inline ConfusionReport run_scenario_suite(const AnalysisConfig& cfg, const SuiteOptions& opt = {}) {
  std::vector<ScenarioResult> results;
  for (const auto& sc : default_scenarios(opt)) results.push_back(run_scenario(sc, cfg, opt));
  return score(std::move(results));
}

inline void emit_confusion_report(std::ostream& out, const ConfusionReport& rep, ReportFormat format) {
  if (format == ReportFormat::Machine) {
    for (const auto& s : rep.scenarios)
      out << "scenario\t" << s.name << '\t' << (s.error ? "error: " + *s.error : summarize(s.analysis.events)) << '\n';
    for (const auto& m : rep.classes)
      out << "metric\t" << m.name << '\t' << m.events << '\t' << m.correct_events << '\t' << m.truth << '\t'
          << m.detected << '\t' << fixed(m.precision(), 4) << '\t' << fixed(m.recall(), 4) << '\n';
    out << "localization\t" << rep.localized << '\t' << rep.collisions_matched << '\t'
        << fixed(rep.localization_accuracy(), 4) << '\n';
    for (const auto& a : rep.assertions)
      out << "assert\t" << a.name << '\t' << (a.passed ? "pass" : "fail") << '\t' << a.detail << '\n';
    return;
  }
  for (const auto& s : rep.scenarios)
    out << s.name << " (" << s.description << "): "
        << (s.error ? "error: " + *s.error : summarize(s.analysis.events)) << '\n';
  out << '\n';
  for (const auto& m : rep.classes)
    out << m.name << ": precision " << fixed(m.precision(), 3) << " (" << m.correct_events << '/' << m.events
        << "), recall " << fixed(m.recall(), 3) << " (" << m.detected << '/' << m.truth << ")\n";
  out << "localization: " << fixed(rep.localization_accuracy(), 3) << " (" << rep.localized << '/'
      << rep.collisions_matched << ")\n\n";
  for (const auto& a : rep.assertions) out << (a.passed ? "PASS " : "FAIL ") << a.name << " [" << a.detail << "]\n";
}

// --- sweeps ---------------------------------------------------------------------

struct SweepRow {
  double value = 0.0;
  std::size_t events = 0;
  std::vector<ClassMetrics> classes;
  double localization = 1.0;
  std::size_t assertions_passed = 0;
  std::size_t assertions_total = 0;
  bool gross_yaw_flag = false;  // raised on any node of any scenario
};

struct SweepTable {
  std::string parameter;
  std::vector<SweepRow> rows;
  std::optional<double> yaw_tolerance_deg;  // yaw sweeps only
};

inline SweepRow sweep_row(double value, const ConfusionReport& rep) {
  SweepRow row;
  row.value = value;
  row.events = rep.event_count();
  row.classes = rep.classes;
  row.localization = rep.localization_accuracy();
  row.assertions_total = rep.assertions.size();
  row.assertions_passed = static_cast<std::size_t>(
      std::count_if(rep.assertions.begin(), rep.assertions.end(), [](const Assertion& a) { return a.passed; }));
  for (const auto& s : rep.scenarios)
    row.gross_yaw_flag = row.gross_yaw_flag || s.analysis.front.params.yaw_gross_misalignment ||
                         s.analysis.back.params.yaw_gross_misalignment;
  return row;
}

/// Reruns the suite for each value of a config key, or of the injected yaw
/// misalignment (parameter "yaw", degrees, applied to both nodes).
inline SweepTable sensitivity_sweep(const std::string& parameter, const std::vector<double>& values,
                                    const AnalysisConfig& cfg, SuiteOptions opt = {}) {
  SweepTable table;
  table.parameter = parameter;
  const bool yaw = parameter == "yaw";
  if (!yaw) (void)cfg.get(parameter);  // throws UnknownParameter
  if (!yaw && parameter.ends_with("_node_id"))
    throw Error(ErrorCode::UnknownParameter, parameter + " is not numeric");

  for (double v : values) {
    AnalysisConfig c = cfg;
    SuiteOptions o = opt;
    if (yaw) {
      o.generator.front_mount.yaw = deg2rad(v);
      o.generator.back_mount.yaw = deg2rad(v);
    } else {
      c.set(parameter, forkimpact::detail::format_double(v), "sweep");
      c.validate();
    }
    table.rows.push_back(sweep_row(v, run_scenario_suite(c, o)));
  }

  if (yaw) {
    SuiteOptions base = opt;
    base.generator.front_mount.yaw = base.generator.back_mount.yaw = 0.0;
    const SweepRow ref = sweep_row(0.0, run_scenario_suite(cfg, base));
    std::vector<const SweepRow*> by_angle;
    for (const auto& r : table.rows) by_angle.push_back(&r);
    std::sort(by_angle.begin(), by_angle.end(),
              [](const SweepRow* a, const SweepRow* b) { return std::abs(a->value) < std::abs(b->value); });
    for (const SweepRow* r : by_angle) {
      if (r->classes != ref.classes || r->localization != ref.localization ||
          r->assertions_passed != ref.assertions_passed)
        break;
      table.yaw_tolerance_deg = std::abs(r->value);
    }
  }
  return table;
}

inline void emit_sweep(std::ostream& out, const SweepTable& t) {
  out << "# sweep " << t.parameter << '\n';
  out << "value\tevents\tcollision_recall\tcollision_precision\tbraking_recall\tvibration_recall\tlocalization\t"
         "assertions\tgross_yaw\n";
  for (const auto& r : t.rows)
    out << forkimpact::detail::format_double(r.value) << '\t' << r.events << '\t' << fixed(r.classes[0].recall(), 3)
        << '\t' << fixed(r.classes[0].precision(), 3) << '\t' << fixed(r.classes[1].recall(), 3) << '\t'
        << fixed(r.classes[2].recall(), 3) << '\t' << fixed(r.localization, 3) << '\t' << r.assertions_passed << '/'
        << r.assertions_total << '\t' << (r.gross_yaw_flag ? "yes" : "no") << '\n';
  if (t.yaw_tolerance_deg) out << "# largest yaw with unchanged metrics: " << fixed(*t.yaw_tolerance_deg, 1) << " deg\n";
}

}  // namespace forkimpact::synth
