#include <gtest/gtest.h>

#include <sstream>

#include "forkimpact/classify.hpp"
#include "forkimpact/pipeline.hpp"
#include "forkimpact/report.hpp"
#include "forkimpact/suite.hpp"

using namespace forkimpact;
using namespace forkimpact::synth;

namespace {

const GeneratorOptions kGen;

ScenarioSpec spec(ScenarioKind k, double duration, double offset = 1.0, std::uint64_t seed = 3) {
  return {k, kGen.quiet_until() + offset, duration, seed};
}

FusedTrace compensated(const GeneratedRun& run, const AnalysisConfig& cfg = {}) {
  NodeCalibration a, b;
  return resample_align(calibrate_node(run.front, cfg, a), calibrate_node(run.back, cfg, b), cfg.sample_rate);
}

SensorTrace negate_ay(SensorTrace tr) {
  for (auto& s : tr.samples) s.ay = -s.ay;
  return tr;
}

std::pair<SensorTrace, SensorTrace> swap_nodes(SensorTrace f, SensorTrace b) {
  std::swap(f.position, b.position);
  std::swap(f.node_id, b.node_id);
  return {b, f};
}

// Full suite is shared across tests; the long benign run is included.
const ConfusionReport& suite() {
  static const ConfusionReport rep = run_scenario_suite({}, {});
  return rep;
}

}  // namespace

TEST(Generate, IdleStaysBelowRelease) {
  const auto run = generate({spec(Idle{}, 60.0)});
  const auto fused = compensated(run);
  double peak = 0.0;
  for (std::size_t i = 0; i < fused.size(); ++i)
    if (fused.time(i) >= kGen.quiet_until()) peak = std::max(peak, fused.a_total_mean[i]);
  EXPECT_LT(peak, 1.0);
  EXPECT_EQ(run.front.frame, Frame::Tilted);
  EXPECT_EQ(run.front.sample_rate_hz, 100.0);
}

TEST(Generate, HardRightBackCollisionShape) {
  const auto run = generate({spec(Collision{Zone::RightBack, CollisionSeverity::Hard}, 0.25)});
  const auto fused = compensated(run);
  ASSERT_EQ(run.truth.size(), 1u);
  const auto& t = run.truth[0];
  EXPECT_EQ(t.expected, Expected::Collision);
  EXPECT_EQ(t.zone, Zone::RightBack);
  double peak_front = 0, peak_back = 0, net_back = 0;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    const double ti = fused.time(i);
    if (ti < t.t_onset - 0.01 || ti > t.t_end) continue;
    peak_front = std::max(peak_front, std::abs(fused.front.samples[i].ay));
    peak_back = std::max(peak_back, std::abs(fused.back.samples[i].ay));
    net_back += fused.back.samples[i].ay * 0.01;
  }
  EXPECT_GT(peak_back, peak_front);
  EXPECT_GT(net_back, 0.0);
  EXPECT_LT(t.onset_to_peak, 0.020);
}

TEST(Generate, HardBrakingIsOneSided) {
  AnalysisConfig cfg;
  const auto run = generate({spec(Braking{BrakingIntensity::Hard}, 2.0)}, cfg);
  const auto fused = compensated(run, cfg);
  const auto segs = extract_segments(fused, cfg);
  ASSERT_EQ(segs.size(), 1u);
  const auto f = compute_features(segs[0], fused);
  EXPECT_GT(f.ratio_ax, 0.9);
  EXPECT_LT(f.net_ax, 0.0);
}

TEST(Generate, Deterministic) {
  const std::vector<ScenarioSpec> specs = {spec(Collision{Zone::LeftFront, CollisionSeverity::Soft}, 0.25),
                                           spec(BumpyDriving{BumpSpeed::Fast}, 1.0, 4.0)};
  GeneratorOptions opt;
  opt.front_mount = {0.1, -0.2, 0.05};
  const auto a = generate(specs, {}, opt);
  const auto b = generate(specs, {}, opt);
  EXPECT_EQ(a.front, b.front);
  EXPECT_EQ(a.back, b.back);
  opt.noise_seed = 2;
  EXPECT_NE(generate(specs, {}, opt).front, a.front);
}

TEST(Generate, Errors) {
  try {
    (void)generate({spec(Idle{}, 5.0), spec(Idle{}, 5.0, 3.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingSpecs);
  }
  EXPECT_THROW((void)generate({spec(Idle{}, 0.0)}), Error);
  EXPECT_THROW((void)generate({{Idle{}, 0.5, 1.0, 0}}), Error);  // inside the calibration lead-in
}

TEST(Generate, MissedPeakOracle) {
  GroundTruth truth;
  for (double d : {0.005, 0.013, 0.02, 0.3, 1.2}) {
    TruthEntry e;
    e.onset_to_peak = d;
    truth.push_back(e);
  }
  std::size_t count = 0;
  for (const auto& e : truth) count += e.onset_to_peak < 0.020;
  EXPECT_EQ(missed_peak_fraction(0.020, truth), static_cast<double>(count) / truth.size());
  EXPECT_EQ(missed_peak_fraction(0.0, truth), 0.0);
}

TEST(Pipeline, MirrorAndSwapAreExact) {
  const auto run = generate({spec(Collision{Zone::RightBack, CollisionSeverity::Hard}, 0.25),
                             spec(Collision{Zone::LeftFront, CollisionSeverity::Hard}, 0.25, 3.0),
                             spec(BumpyDriving{BumpSpeed::Fast}, 1.0, 6.0),
                             spec(Braking{BrakingIntensity::Hard}, 2.0, 9.0)});
  const AnalysisConfig cfg;
  const auto base = analyze(run.front, run.back, cfg).events;
  ASSERT_GE(base.size(), 3u);

  const auto mirrored = analyze(negate_ay(run.front), negate_ay(run.back), cfg).events;
  ASSERT_EQ(mirrored.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(mirrored[i].kind, base[i].kind);
    EXPECT_EQ(mirrored[i].t_start, base[i].t_start);
    if (base[i].zone) {
      EXPECT_EQ(*mirrored[i].zone, mirror_left_right(*base[i].zone));
    }
  }

  const auto [f, b] = swap_nodes(run.front, run.back);
  const auto swapped = analyze(f, b, cfg).events;
  ASSERT_EQ(swapped.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(swapped[i].kind, base[i].kind);
    if (base[i].zone) {
      EXPECT_EQ(*swapped[i].zone, mirror_front_back(*base[i].zone));
    }
  }
}

TEST(Suite, DefaultScenariosPass) {
  const auto& rep = suite();
  for (const auto& a : rep.assertions) EXPECT_TRUE(a.passed) << a.name << " " << a.detail;
  EXPECT_EQ(rep.localization_accuracy(), 1.0);
}

TEST(Suite, RightBackCollisions) {
  const auto* rb = suite().find("collision_rb");
  ASSERT_NE(rb, nullptr);
  std::size_t right_back = 0;
  for (const auto& ev : rb->analysis.events) {
    if (ev.kind == EventKind::Collision) {
      EXPECT_EQ(ev.zone, Zone::RightBack);
      ++right_back;
    } else {
      EXPECT_TRUE(ev.kind == EventKind::VibrationShort && ev.label == SeverityLabel::BT);
    }
  }
  EXPECT_GE(right_back, 3u);
}

TEST(Suite, TablePattern) {
  const auto& rep = suite();
  EXPECT_TRUE(rep.find("normal_braking")->analysis.events.empty());
  EXPECT_TRUE(rep.find("sudden_start")->analysis.events.empty());
  bool any_at = false;
  for (const auto& ev : rep.find("driving_bumpy_road_fast")->analysis.events) any_at = any_at || ev.label == SeverityLabel::AT;
  EXPECT_TRUE(any_at);
  for (const auto& ev : rep.find("loading_truck")->analysis.events) EXPECT_EQ(ev.label, SeverityLabel::BT);
  std::size_t braking = 0;
  for (const auto& ev : rep.find("hard_braking")->analysis.events) braking += ev.kind == EventKind::HarshBraking;
  EXPECT_EQ(braking, 2u);
}

TEST(Suite, BenignHourHasNoCollisionsOrBraking) {
  const auto* hour = suite().find("benign_hour");
  ASSERT_NE(hour, nullptr);
  ASSERT_FALSE(hour->error);
  const auto& first = hour->specs.front();
  const auto& last = hour->specs.back();
  EXPECT_GE(last.t_onset + last.duration - first.t_onset, 3590.0);
  for (const auto& ev : hour->analysis.events) {
    EXPECT_NE(ev.kind, EventKind::Collision);
    EXPECT_NE(ev.kind, EventKind::HarshBraking);
  }
}

TEST(Suite, ReportIsDeterministic) {
  SuiteOptions opt;
  opt.include_long_run = false;
  std::ostringstream a, b;
  emit_confusion_report(a, run_scenario_suite({}, opt), ReportFormat::Human);
  emit_confusion_report(b, run_scenario_suite({}, opt), ReportFormat::Human);
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream m;
  emit_confusion_report(m, run_scenario_suite({}, opt), ReportFormat::Machine);
  EXPECT_FALSE(m.str().empty());
}

TEST(Sweep, TriggerThresholdMonotone) {
  SuiteOptions opt;
  opt.include_long_run = false;
  const auto table = sensitivity_sweep("trigger_threshold", {3, 4, 5, 6, 7, 8}, {}, opt);
  ASSERT_EQ(table.rows.size(), 6u);
  for (std::size_t i = 1; i < table.rows.size(); ++i) EXPECT_LE(table.rows[i].events, table.rows[i - 1].events);
}

TEST(Sweep, Yaw) {
  SuiteOptions opt;
  opt.include_long_run = false;
  const auto base = run_scenario_suite({}, opt);
  const auto table = sensitivity_sweep("yaw", {0.0, 90.0}, {}, opt);
  EXPECT_EQ(table.rows[0].classes, base.classes);
  EXPECT_FALSE(table.rows[0].gross_yaw_flag);
  EXPECT_TRUE(table.rows[1].gross_yaw_flag);
  ASSERT_TRUE(table.yaw_tolerance_deg);
  EXPECT_GE(*table.yaw_tolerance_deg, 0.0);
}

TEST(Sweep, UnknownParameter) {
  for (const char* p : {"not_a_key", "front_node_id"}) {
    try {
      (void)sensitivity_sweep(p, {1.0}, {}, {});
      FAIL() << p;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnknownParameter);
    }
  }
}
