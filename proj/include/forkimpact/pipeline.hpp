#pragma once

#include <vector>

#include "forkimpact/calibration.hpp"
#include "forkimpact/classify.hpp"
#include "forkimpact/segmentation.hpp"

namespace forkimpact {

struct NodeCalibration {
  CalibrationParams params;
  std::vector<std::size_t> gaps;
  std::size_t saturated = 0;
};

struct AnalysisResult {
  NodeCalibration front;
  NodeCalibration back;
  std::vector<Segment> segments;
  std::vector<Decision> decisions;  // one per segment
  std::vector<EventReport> events;  // emitted decisions, ordered by t_start
};

/// Static-window tilt estimate, leveling, advisory yaw check and gravity
/// removal for one node.
inline SensorTrace calibrate_node(const SensorTrace& tilted, const AnalysisConfig& cfg, NodeCalibration& cal) {
  validate(tilted);
  const auto window = find_static_window(tilted, cfg);
  if (!window) throw Error(ErrorCode::NotStationary, "node '" + tilted.node_id + "': no stationary window found");
  cal.params = estimate_tilt(*window, cfg);
  cal.gaps = find_gaps(tilted);
  cal.saturated = static_cast<std::size_t>(
      std::count_if(tilted.samples.begin(), tilted.samples.end(), [](const ImuSample& s) { return s.saturated; }));
  SensorTrace leveled = level_trace(tilted, cal.params);
  if (const auto moving = find_moving_window(leveled, cfg)) cal.params = estimate_yaw_moving(*moving, cal.params, cfg);
  return compensate_gravity(leveled, cfg.gravity);
}

/// Runs detection on already gravity-compensated, aligned traces.
inline AnalysisResult detect(const FusedTrace& fused, const AnalysisConfig& cfg) {
  AnalysisResult res;
  res.segments = extract_segments(fused, cfg);
  for (const auto& seg : res.segments) {
    const SegmentFeatures f = compute_features(seg, fused);
    const Diagnostics diag = make_diagnostics(f, cfg);
    const Decision dec = replay(diag, cfg);
    res.decisions.push_back(dec);
    if (auto ev = to_event(dec, seg, diag)) res.events.push_back(*ev);
  }
  return res;
}

/// Full batch pipeline from raw tilted-frame traces.
inline AnalysisResult analyze(const SensorTrace& front, const SensorTrace& back, const AnalysisConfig& cfg) {
  NodeCalibration cf, cb;
  const SensorTrace f = calibrate_node(front, cfg, cf);
  const SensorTrace b = calibrate_node(back, cfg, cb);
  AnalysisResult res = detect(resample_align(f, b, cfg.sample_rate), cfg);
  res.front = std::move(cf);
  res.back = std::move(cb);
  return res;
}

}  // namespace forkimpact
