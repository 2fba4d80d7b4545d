#pragma once

// Shared domain types for dual-node forklift accelerometer analysis.
//
// Axis convention (both leveled frames): x forward, y left, z up. A positive
// net a_y therefore means the truck was pushed to the left, i.e. it was hit on
// its right side. Localization depends on this, so every producer of samples
// must honour it. All accelerations are in m/s^2 and all times in seconds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forkimpact/error.hpp"

namespace forkimpact {

inline constexpr double kGravity = 9.81;
inline constexpr double kFullScaleG = 8.0;
inline constexpr double kFullScale = kFullScaleG * kGravity;  // 78.48 m/s^2
inline constexpr double kNominalRateHz = 100.0;

struct ImuSample {
  double t = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
  bool saturated = false;

  friend bool operator==(const ImuSample&, const ImuSample&) = default;
};

enum class MountPosition { Front, Back };

enum class Frame { Tilted, Leveled, LeveledGravityCompensated };

constexpr std::string_view to_string(MountPosition p) {
  return p == MountPosition::Front ? "front" : "back";
}

constexpr std::string_view to_string(Frame f) {
  switch (f) {
    case Frame::Tilted: return "tilted";
    case Frame::Leveled: return "leveled";
    case Frame::LeveledGravityCompensated: return "leveled-gravity-compensated";
  }
  return "?";
}

/// Euclidean norm of the acceleration vector.
inline double a_total(const ImuSample& s) { return std::hypot(s.ax, s.ay, s.az); }

/// Clamp each component to the +/-8 G full-scale range and flag the sample if
/// anything was clipped. A rail is a legitimate reading for a hard impact.
inline ImuSample clip_to_full_scale(ImuSample s) {
  auto clip = [&](double& v) {
    if (v > kFullScale) {
      v = kFullScale;
      s.saturated = true;
    } else if (v < -kFullScale) {
      v = -kFullScale;
      s.saturated = true;
    }
  };
  clip(s.ax);
  clip(s.ay);
  clip(s.az);
  return s;
}

struct SensorTrace {
  std::string node_id;
  MountPosition position = MountPosition::Front;
  Frame frame = Frame::Tilted;
  double sample_rate_hz = kNominalRateHz;
  std::vector<ImuSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  double t_begin() const { return samples.empty() ? 0.0 : samples.front().t; }
  double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }

  friend bool operator==(const SensorTrace&, const SensorTrace&) = default;
};

/// Throws InvalidValue unless timestamps are finite, non-negative and
/// strictly increasing.
inline void validate(const SensorTrace& trace) {
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    if (!std::isfinite(s.t) || s.t < 0.0)
      throw Error(ErrorCode::InvalidValue,
                  "node '" + trace.node_id + "': bad timestamp at sample " + std::to_string(i));
    if (i > 0 && !(s.t > trace.samples[i - 1].t))
      throw Error(ErrorCode::NonMonotoneTimestamps,
                  "node '" + trace.node_id + "': timestamps not strictly increasing at sample " +
                      std::to_string(i));
  }
}

/// Indices i (>= 1) whose spacing to sample i-1 deviates by more than 20% from
/// the nominal period. An empty result means the trace is not gappy.
inline std::vector<std::size_t> find_gaps(const SensorTrace& trace) {
  std::vector<std::size_t> gaps;
  const double period = 1.0 / trace.sample_rate_hz;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const double dt = trace.samples[i].t - trace.samples[i - 1].t;
    if (dt < 0.8 * period || dt > 1.2 * period) gaps.push_back(i);
  }
  return gaps;
}

/// Front and back traces on one common time grid, plus magnitude series.
struct FusedTrace {
  SensorTrace front;
  SensorTrace back;
  std::vector<double> a_total_front;
  std::vector<double> a_total_back;
  std::vector<double> a_total_mean;

  std::size_t size() const { return a_total_mean.size(); }
  double time(std::size_t i) const { return front.samples[i].t; }
  std::vector<double> times() const {
    std::vector<double> t(front.samples.size());
    std::transform(front.samples.begin(), front.samples.end(), t.begin(),
                   [](const ImuSample& s) { return s.t; });
    return t;
  }

  friend bool operator==(const FusedTrace&, const FusedTrace&) = default;
};

/// Builds the magnitude series for two traces that already share a grid.
inline FusedTrace fuse_aligned(SensorTrace front, SensorTrace back) {
  if (front.size() != back.size())
    throw Error(ErrorCode::InvalidValue, "fuse_aligned: traces differ in length");
  FusedTrace out;
  const std::size_t n = front.size();
  out.a_total_front.resize(n);
  out.a_total_back.resize(n);
  out.a_total_mean.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.a_total_front[i] = a_total(front.samples[i]);
    out.a_total_back[i] = a_total(back.samples[i]);
    out.a_total_mean[i] = (out.a_total_front[i] + out.a_total_back[i]) / 2.0;
  }
  out.front = std::move(front);
  out.back = std::move(back);
  return out;
}

namespace detail {

// Linear interpolation of `trace` at time t; t must lie inside the trace span.
// `cursor` is advanced monotonically so a full resample is O(n).
inline ImuSample interpolate_at(const std::vector<ImuSample>& s, double t, std::size_t& cursor) {
  constexpr double kSnap = 1e-9;
  while (cursor + 1 < s.size() && s[cursor + 1].t <= t + kSnap) ++cursor;
  const ImuSample& a = s[cursor];
  if (std::abs(a.t - t) <= kSnap || cursor + 1 >= s.size()) {
    ImuSample out = a;
    out.t = t;
    return out;
  }
  const ImuSample& b = s[cursor + 1];
  const double w = (t - a.t) / (b.t - a.t);
  ImuSample out;
  out.t = t;
  out.ax = a.ax + w * (b.ax - a.ax);
  out.ay = a.ay + w * (b.ay - a.ay);
  out.az = a.az + w * (b.az - a.az);
  out.saturated = a.saturated || b.saturated;
  return out;
}

inline bool same_grid(const SensorTrace& a, const SensorTrace& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.samples[i].t != b.samples[i].t) return false;
  return true;
}

}  // namespace detail

/// Puts both gravity-compensated traces on the common grid spanning their
/// overlap (spacing 1/rate_hz) and computes the magnitude series. Pairs that
/// already share a grid pass through untouched.
inline FusedTrace resample_align(const SensorTrace& front, const SensorTrace& back,
                                 double rate_hz = kNominalRateHz) {
  if (front.frame != Frame::LeveledGravityCompensated ||
      back.frame != Frame::LeveledGravityCompensated)
    throw Error(ErrorCode::FrameMismatch, "resample_align needs gravity-compensated traces");
  if (front.empty() || back.empty())
    throw Error(ErrorCode::NoOverlap, "resample_align: empty trace");
  if (detail::same_grid(front, back)) return fuse_aligned(front, back);

  const double t0 = std::max(front.t_begin(), back.t_begin());
  const double t1 = std::min(front.t_end(), back.t_end());
  if (!(t1 > t0)) throw Error(ErrorCode::NoOverlap, "front and back time spans do not overlap");

  const double period = 1.0 / rate_hz;
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / period + 1e-9)) + 1;
  auto resample = [&](const SensorTrace& in) {
    SensorTrace out = in;
    out.sample_rate_hz = rate_hz;
    out.samples.clear();
    out.samples.reserve(n);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < n; ++k)
      out.samples.push_back(detail::interpolate_at(in.samples, t0 + static_cast<double>(k) * period, cursor));
    return out;
  };
  return fuse_aligned(resample(front), resample(back));
}

/// Contiguous high-activity window over the fused grid. `first` and `last`
/// are inclusive sample indices and apply to both nodes' slices.
struct Segment {
  std::size_t first = 0;
  std::size_t last = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double peak_a_total_mean = 0.0;

  double duration() const { return t_end - t_start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class Zone { LeftFront, RightFront, LeftBack, RightBack };

constexpr std::string_view zone_code(Zone z) {
  switch (z) {
    case Zone::LeftFront: return "LF";
    case Zone::RightFront: return "RF";
    case Zone::LeftBack: return "LB";
    case Zone::RightBack: return "RB";
  }
  return "?";
}

inline std::optional<Zone> zone_from_code(std::string_view code) {
  for (Zone z : {Zone::LeftFront, Zone::RightFront, Zone::LeftBack, Zone::RightBack})
    if (zone_code(z) == code) return z;
  return std::nullopt;
}

inline Zone mirror_left_right(Zone z) {
  switch (z) {
    case Zone::LeftFront: return Zone::RightFront;
    case Zone::RightFront: return Zone::LeftFront;
    case Zone::LeftBack: return Zone::RightBack;
    case Zone::RightBack: return Zone::LeftBack;
  }
  return z;
}

inline Zone mirror_front_back(Zone z) {
  switch (z) {
    case Zone::LeftFront: return Zone::LeftBack;
    case Zone::RightFront: return Zone::RightBack;
    case Zone::LeftBack: return Zone::LeftFront;
    case Zone::RightBack: return Zone::RightFront;
  }
  return z;
}

enum class SeverityLabel { BT, AT };

constexpr std::string_view to_string(SeverityLabel l) { return l == SeverityLabel::AT ? "AT" : "BT"; }

enum class EventKind { Collision, HarshBraking, VibrationShort, VibrationLong };

constexpr std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Collision: return "collision";
    case EventKind::HarshBraking: return "harsh_braking";
    case EventKind::VibrationShort: return "vibration_short";
    case EventKind::VibrationLong: return "vibration_long";
  }
  return "?";
}

enum class Route { Short, Long };

constexpr std::string_view to_string(Route r) { return r == Route::Short ? "short" : "long"; }

/// Every value consulted on the way down the decision tree, so a report can
/// be replayed without the trace.
struct Diagnostics {
  double duration = 0.0;
  double ratio_ax = 0.0;
  Route route = Route::Short;
  MountPosition dominant_node = MountPosition::Front;
  double area_ay_dom = 0.0;
  double area_az_dom = 0.0;
  double net_ay_dom = 0.0;
  double peak_ay_dom = 0.0;
  double crossing_rate = 0.0;
  double net_braking_axis = 0.0;
  double peak_a_total_mean = 0.0;

  friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct EventReport {
  EventKind kind = EventKind::VibrationShort;
  std::optional<Zone> zone;             // collisions only
  std::optional<SeverityLabel> label;   // vibrations only
  double severity = 0.0;                // peak a_total_mean, m/s^2
  double t_start = 0.0;
  double t_end = 0.0;
  Diagnostics diagnostics;

  friend bool operator==(const EventReport&, const EventReport&) = default;
};

}  // namespace forkimpact
