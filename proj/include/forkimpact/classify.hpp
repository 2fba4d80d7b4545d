#pragma once

// Decision tree over extracted segments:
//
//   duration/ratio ──short──> a_y vs a_z area ──> collision (localized)
//                 │                          └──> short vibration (AT/BT)
//                 └─long───> baseline crossings ──> braking (sign, harsh?)
//                                              └──> long vibration (AT/BT)

#include <cmath>
#include <optional>
#include <vector>

#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"

namespace forkimpact {

struct SegmentFeatures {
  double duration = 0.0;
  double net_area_ax = 0.0;    // |integral of mean a_x|, m/s
  double total_area_ax = 0.0;  // integral of |mean a_x|, m/s
  double ratio_ax = 0.0;
  MountPosition dominant_node = MountPosition::Front;
  double area_ay_dom = 0.0;
  double area_az_dom = 0.0;
  double peak_ay_dom = 0.0;  // signed
  double net_ay_dom = 0.0;   // signed
  double net_ax = 0.0;       // signed, mean of both nodes
  double net_ay = 0.0;       // signed, mean of both nodes
  double crossing_rate = 0.0;
  double peak_a_total_mean = 0.0;
};

namespace detail {

// Trapezoidal integral of f(x_i) over samples [first, last].
template <typename F>
double trapezoid(const std::vector<ImuSample>& s, std::size_t first, std::size_t last, F&& f) {
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i) acc += 0.5 * (f(s[i]) + f(s[i + 1])) * (s[i + 1].t - s[i].t);
  return acc;
}

// Sign changes of x - mean(x); exact zeros keep the previous sign.
inline std::size_t baseline_crossings(const std::vector<double>& x) {
  if (x.empty()) return 0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  std::size_t count = 0;
  int last = 0;
  for (double v : x) {
    const double d = v - mean;
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++count;
    last = sign;
  }
  return count;
}

}  // namespace detail

inline SegmentFeatures compute_features(const Segment& seg, const FusedTrace& fused) {
  if (seg.last < seg.first || seg.last >= fused.size())
    throw Error(ErrorCode::EmptySegment, "segment indices outside the fused trace");
  const auto& f = fused.front.samples;
  const auto& b = fused.back.samples;
  const std::size_t lo = seg.first, hi = seg.last;

  // mean-of-nodes series share the front timestamps
  std::vector<ImuSample> mean(f.begin() + static_cast<std::ptrdiff_t>(lo), f.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  for (std::size_t i = lo; i <= hi; ++i) {
    auto& m = mean[i - lo];
    m.ax = (f[i].ax + b[i].ax) / 2.0;
    m.ay = (f[i].ay + b[i].ay) / 2.0;
    m.az = (f[i].az + b[i].az) / 2.0;
  }
  const std::size_t last = mean.size() - 1;

  SegmentFeatures out;
  out.duration = seg.duration();
  out.peak_a_total_mean = seg.peak_a_total_mean;
  out.net_ax = detail::trapezoid(mean, 0, last, [](const ImuSample& s) { return s.ax; });
  out.net_ay = detail::trapezoid(mean, 0, last, [](const ImuSample& s) { return s.ay; });
  out.net_area_ax = std::abs(out.net_ax);
  out.total_area_ax = detail::trapezoid(mean, 0, last, [](const ImuSample& s) { return std::abs(s.ax); });
  out.ratio_ax = out.total_area_ax > 0.0 ? std::min(1.0, out.net_area_ax / out.total_area_ax) : 0.0;

  double peak_front = 0.0, peak_back = 0.0, signed_front = 0.0, signed_back = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (std::abs(f[i].ay) > peak_front) peak_front = std::abs(f[i].ay), signed_front = f[i].ay;
    if (std::abs(b[i].ay) > peak_back) peak_back = std::abs(b[i].ay), signed_back = b[i].ay;
  }
  out.dominant_node = peak_back > peak_front ? MountPosition::Back : MountPosition::Front;
  const auto& dom = out.dominant_node == MountPosition::Front ? f : b;
  out.peak_ay_dom = out.dominant_node == MountPosition::Front ? signed_front : signed_back;
  out.area_ay_dom = detail::trapezoid(dom, lo, hi, [](const ImuSample& s) { return std::abs(s.ay); });
  out.area_az_dom = detail::trapezoid(dom, lo, hi, [](const ImuSample& s) { return std::abs(s.az); });
  out.net_ay_dom = detail::trapezoid(dom, lo, hi, [](const ImuSample& s) { return s.ay; });

  std::vector<double> ax(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) ax[i] = mean[i].ax;
  out.crossing_rate =
      out.duration > 0.0 ? static_cast<double>(detail::baseline_crossings(ax)) / out.duration : 0.0;
  return out;
}

// --- branch predicates -----------------------------------------------------

inline Route categorize(double duration, double ratio_ax, const AnalysisConfig& cfg) {
  if (duration <= cfg.short_max) return Route::Short;
  if (duration >= cfg.long_min) return Route::Long;
  return ratio_ax > cfg.ratio_long ? Route::Long : Route::Short;
}

inline Route categorize(const Segment& seg, const SegmentFeatures& f, const AnalysisConfig& cfg) {
  return categorize(seg.duration(), f.ratio_ax, cfg);
}

enum class ShortOutcome { CollisionCandidate, ShortVibration };

inline ShortOutcome classify_short(double area_ay_dom, double area_az_dom) {
  return area_ay_dom > area_az_dom ? ShortOutcome::CollisionCandidate : ShortOutcome::ShortVibration;
}

inline ShortOutcome classify_short(const SegmentFeatures& f) { return classify_short(f.area_ay_dom, f.area_az_dom); }

/// Front/back from the dominant node; positive net a_y (truck pushed left)
/// means a right-side hit. Zero resolves to Right.
inline Zone localize(MountPosition dominant, double net_ay_dom) {
  const bool right = net_ay_dom >= 0.0;
  if (dominant == MountPosition::Front) return right ? Zone::RightFront : Zone::LeftFront;
  return right ? Zone::RightBack : Zone::LeftBack;
}

inline Zone localize(const SegmentFeatures& f) { return localize(f.dominant_node, f.net_ay_dom); }

enum class LongOutcome { BrakingCandidate, LongVibration };

inline LongOutcome classify_long(double crossing_rate, const AnalysisConfig& cfg) {
  return crossing_rate <= cfg.crossing_rate_braking_max ? LongOutcome::BrakingCandidate : LongOutcome::LongVibration;
}

inline LongOutcome classify_long(const SegmentFeatures& f, const AnalysisConfig& cfg) {
  return classify_long(f.crossing_rate, cfg);
}

enum class BrakingOutcome { HarshBraking, Acceleration, BelowHarsh };

/// Negative net area on the braking axis is deceleration; zero or positive is
/// treated as acceleration and suppressed.
inline BrakingOutcome confirm_braking(double net_braking_axis, double peak_a_total_mean, const AnalysisConfig& cfg) {
  if (!(net_braking_axis < 0.0)) return BrakingOutcome::Acceleration;
  return peak_a_total_mean > cfg.harsh_braking ? BrakingOutcome::HarshBraking : BrakingOutcome::BelowHarsh;
}

inline double braking_axis_net(const SegmentFeatures& f, const AnalysisConfig& cfg) {
  return cfg.braking_axis == BrakingAxis::X ? f.net_ax : f.net_ay;
}

inline BrakingOutcome confirm_braking(const SegmentFeatures& f, const AnalysisConfig& cfg) {
  return confirm_braking(braking_axis_net(f, cfg), f.peak_a_total_mean, cfg);
}

inline SeverityLabel label_vibration(double peak_a_total_mean, const AnalysisConfig& cfg) {
  return peak_a_total_mean > cfg.vibration_severe ? SeverityLabel::AT : SeverityLabel::BT;
}

inline SeverityLabel label_vibration(const SegmentFeatures& f, const AnalysisConfig& cfg) {
  return label_vibration(f.peak_a_total_mean, cfg);
}

// --- composition -------------------------------------------------------------

enum class Outcome { Collision, HarshBraking, VibrationShort, VibrationLong, SuppressedAcceleration, SuppressedBelowHarsh };

struct Decision {
  Outcome outcome = Outcome::VibrationShort;
  std::optional<Zone> zone;
  std::optional<SeverityLabel> label;

  bool emits_event() const {
    return outcome != Outcome::SuppressedAcceleration && outcome != Outcome::SuppressedBelowHarsh;
  }
  friend bool operator==(const Decision&, const Decision&) = default;
};

inline Diagnostics make_diagnostics(const SegmentFeatures& f, const AnalysisConfig& cfg) {
  Diagnostics d;
  d.duration = f.duration;
  d.ratio_ax = f.ratio_ax;
  d.route = categorize(f.duration, f.ratio_ax, cfg);
  d.dominant_node = f.dominant_node;
  d.area_ay_dom = f.area_ay_dom;
  d.area_az_dom = f.area_az_dom;
  d.net_ay_dom = f.net_ay_dom;
  d.peak_ay_dom = f.peak_ay_dom;
  d.crossing_rate = f.crossing_rate;
  d.net_braking_axis = braking_axis_net(f, cfg);
  d.peak_a_total_mean = f.peak_a_total_mean;
  return d;
}

/// Walks the tree from recorded diagnostics alone.
inline Decision replay(const Diagnostics& d, const AnalysisConfig& cfg) {
  Decision out;
  if (categorize(d.duration, d.ratio_ax, cfg) == Route::Short) {
    if (classify_short(d.area_ay_dom, d.area_az_dom) == ShortOutcome::CollisionCandidate) {
      out.outcome = Outcome::Collision;
      out.zone = localize(d.dominant_node, d.net_ay_dom);
    } else {
      out.outcome = Outcome::VibrationShort;
      out.label = label_vibration(d.peak_a_total_mean, cfg);
    }
    return out;
  }
  if (classify_long(d.crossing_rate, cfg) == LongOutcome::LongVibration) {
    out.outcome = Outcome::VibrationLong;
    out.label = label_vibration(d.peak_a_total_mean, cfg);
    return out;
  }
  switch (confirm_braking(d.net_braking_axis, d.peak_a_total_mean, cfg)) {
    case BrakingOutcome::HarshBraking: out.outcome = Outcome::HarshBraking; break;
    case BrakingOutcome::Acceleration: out.outcome = Outcome::SuppressedAcceleration; break;
    case BrakingOutcome::BelowHarsh: out.outcome = Outcome::SuppressedBelowHarsh; break;
  }
  return out;
}

inline std::optional<EventReport> to_event(const Decision& dec, const Segment& seg, const Diagnostics& diag) {
  if (!dec.emits_event()) return std::nullopt;
  EventReport ev;
  switch (dec.outcome) {
    case Outcome::Collision: ev.kind = EventKind::Collision; break;
    case Outcome::HarshBraking: ev.kind = EventKind::HarshBraking; break;
    case Outcome::VibrationShort: ev.kind = EventKind::VibrationShort; break;
    default: ev.kind = EventKind::VibrationLong; break;
  }
  ev.zone = dec.zone;
  ev.label = dec.label;
  ev.severity = seg.peak_a_total_mean;
  ev.t_start = seg.t_start;
  ev.t_end = seg.t_end;
  ev.diagnostics = diag;
  return ev;
}

inline std::optional<EventReport> classify_segment(const Segment& seg, const FusedTrace& fused,
                                                   const AnalysisConfig& cfg) {
  const SegmentFeatures f = compute_features(seg, fused);
  const Diagnostics diag = make_diagnostics(f, cfg);
  return to_event(replay(diag, cfg), seg, diag);
}

/// Reconstructs the decision implied by an emitted report.
inline Decision decision_of(const EventReport& ev) {
  Decision d;
  switch (ev.kind) {
    case EventKind::Collision: d.outcome = Outcome::Collision; break;
    case EventKind::HarshBraking: d.outcome = Outcome::HarshBraking; break;
    case EventKind::VibrationShort: d.outcome = Outcome::VibrationShort; break;
    case EventKind::VibrationLong: d.outcome = Outcome::VibrationLong; break;
  }
  d.zone = ev.zone;
  d.label = ev.label;
  return d;
}

}  // namespace forkimpact
