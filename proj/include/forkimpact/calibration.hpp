#pragma once

// Mounting calibration: roll/pitch from a static window, rotation into the
// leveled frame, gravity removal, and an advisory yaw check from motion.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <span>

#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"

namespace forkimpact {

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

struct CalibrationParams {
  double roll = 0.0;   // phi, rad
  double pitch = 0.0;  // theta, rad
  std::optional<double> yaw_estimate;  // psi, rad; advisory only
  bool yaw_gross_misalignment = false;

  friend bool operator==(const CalibrationParams&, const CalibrationParams&) = default;
};

/// 3-2-1 (yaw-pitch-roll) rotation taking leveled-frame vectors into the
/// tilted sensor frame: P_tilted = R * P_leveled.
inline Eigen::Matrix3d euler_321(double phi, double theta, double psi) {
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(psi), sp = std::sin(psi);
  Eigen::Matrix3d r;
  r << ct * cp, sp * ct, -st,
       sf * st * cp - cf * sp, sf * st * sp + cf * cp, ct * sf,
       st * cf * cp + sf * sp, st * sp * cf - cp * sf, ct * cf;
  return r;
}

struct AxisStats {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d stddev = Eigen::Vector3d::Zero();
};

inline AxisStats axis_stats(std::span<const ImuSample> window) {
  AxisStats st;
  if (window.empty()) return st;
  for (const auto& s : window) st.mean += Eigen::Vector3d(s.ax, s.ay, s.az);
  st.mean /= static_cast<double>(window.size());
  for (const auto& s : window) {
    const Eigen::Vector3d d = Eigen::Vector3d(s.ax, s.ay, s.az) - st.mean;
    st.stddev += d.cwiseProduct(d);
  }
  st.stddev = (st.stddev / static_cast<double>(window.size())).cwiseSqrt();
  return st;
}

/// Time covered by a window of samples, counting the last sample's period.
inline double window_span(std::span<const ImuSample> w) {
  if (w.size() < 2) return 0.0;
  return (w.back().t - w.front().t) * static_cast<double>(w.size()) / static_cast<double>(w.size() - 1);
}

/// Roll and pitch from the mean gravity vector of a window the truck spent
/// standing still.
inline CalibrationParams estimate_tilt(std::span<const ImuSample> window, const AnalysisConfig& cfg = {}) {
  if (window_span(window) < cfg.static_window - 1e-9)
    throw Error(ErrorCode::NotStationary, "static window shorter than " + detail::format_double(cfg.static_window) + " s");
  const AxisStats st = axis_stats(window);
  if ((st.stddev.array() >= cfg.stationary_std_max).any())
    throw Error(ErrorCode::NotStationary, "per-axis standard deviation above " +
                                              detail::format_double(cfg.stationary_std_max) + " m/s^2");
  const double g = cfg.gravity;
  const double ax = st.mean.x(), ay = st.mean.y(), az = st.mean.z();
  if (std::abs(ax) > g * (1.0 + 1e-12))
    throw Error(ErrorCode::TiltOutOfRange, "|a_x| exceeds g, pitch undefined");
  CalibrationParams p;
  p.pitch = std::asin(std::clamp(ax / -g, -1.0, 1.0));
  p.roll = std::atan2(ay, az);
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (std::abs(p.pitch) >= half_pi || std::abs(p.roll) >= half_pi)
    throw Error(ErrorCode::TiltOutOfRange, "sensor tilted 90 degrees or more");
  return p;
}

/// Rotates every sample into the leveled frame with yaw taken as zero.
inline SensorTrace level_trace(const SensorTrace& trace, const CalibrationParams& params) {
  if (trace.frame != Frame::Tilted) throw Error(ErrorCode::FrameMismatch, "level_trace needs a tilted trace");
  const Eigen::Matrix3d inv = euler_321(params.roll, params.pitch, 0.0).transpose();
  SensorTrace out = trace;
  out.frame = Frame::Leveled;
  for (auto& s : out.samples) {
    const Eigen::Vector3d v = inv * Eigen::Vector3d(s.ax, s.ay, s.az);
    s.ax = v.x();
    s.ay = v.y();
    s.az = v.z();
  }
  return out;
}

inline SensorTrace compensate_gravity(const SensorTrace& trace, double g = kGravity) {
  if (trace.frame != Frame::Leveled)
    throw Error(ErrorCode::FrameMismatch, "compensate_gravity needs a leveled, uncompensated trace");
  SensorTrace out = trace;
  out.frame = Frame::LeveledGravityCompensated;
  for (auto& s : out.samples) s.az -= g;
  return out;
}

/// Rough heading error from a window of straight-line forward acceleration.
/// Only flags gross mounting errors; the estimate is never applied.
inline CalibrationParams estimate_yaw_moving(std::span<const ImuSample> window, CalibrationParams params,
                                             const AnalysisConfig& cfg = {}) {
  const AxisStats st = axis_stats(window);
  if (window.empty() || std::hypot(st.mean.x(), st.mean.y()) <= cfg.yaw_min_motion)
    throw Error(ErrorCode::InsufficientMotion, "mean planar acceleration too small for a yaw estimate");
  const double psi = std::atan2(st.mean.y(), st.mean.x());
  params.yaw_estimate = psi;
  params.yaw_gross_misalignment = std::abs(psi) > deg2rad(cfg.yaw_gross_deg);
  return params;
}

/// First window of at least `cfg.static_window` seconds passing the
/// stationarity gate, searched in 0.1 s steps.
inline std::optional<std::span<const ImuSample>> find_static_window(const SensorTrace& trace,
                                                                    const AnalysisConfig& cfg = {}) {
  const auto& s = trace.samples;
  const auto n = static_cast<std::size_t>(std::ceil(cfg.static_window * trace.sample_rate_hz - 1e-9));
  const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(trace.sample_rate_hz / 10.0));
  if (n < 2) return std::nullopt;
  for (std::size_t i = 0; i + n <= s.size(); i += step) {
    std::span<const ImuSample> w(s.data() + i, n);
    if (window_span(w) < cfg.static_window - 1e-9) continue;
    const AxisStats st = axis_stats(w);
    if ((st.stddev.array() < cfg.stationary_std_max).all()) return w;
  }
  return std::nullopt;
}

/// First one-second window of a leveled trace that looks like steady
/// straight-line acceleration: planar mean above the motion gate and planar
/// spread below half of it.
inline std::optional<std::span<const ImuSample>> find_moving_window(const SensorTrace& leveled,
                                                                    const AnalysisConfig& cfg = {}) {
  const auto& s = leveled.samples;
  const auto n = static_cast<std::size_t>(std::ceil(leveled.sample_rate_hz));
  const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(leveled.sample_rate_hz / 10.0));
  if (n < 2) return std::nullopt;
  for (std::size_t i = 0; i + n <= s.size(); i += step) {
    std::span<const ImuSample> w(s.data() + i, n);
    const AxisStats st = axis_stats(w);
    const double planar = std::hypot(st.mean.x(), st.mean.y());
    const double spread = std::hypot(st.stddev.x(), st.stddev.y());
    if (planar > cfg.yaw_min_motion && spread < 0.5 * planar) return w;
  }
  return std::nullopt;
}

}  // namespace forkimpact
