#pragma once

// Node energy budget under wake-on-motion duty cycling.

#include <span>

#include "forkimpact/config.hpp"
#include "forkimpact/error.hpp"

namespace forkimpact {

inline constexpr double kDaysPerYear = 365.25;
inline constexpr double kSecondsPerDay = 86400.0;

struct PowerProfile {
  double p_sleep_w = 82.4e-6;   // WoM armed
  double p_active_w = 27.2e-3;  // continuous sampling + BLE
  double battery_wh = 15.0;
  double triggers_per_day = 0.0;
  double active_s_per_trigger = 0.0;
  double wake_latency_s = 0.020;
};

inline double active_seconds_per_day(const PowerProfile& p) { return p.triggers_per_day * p.active_s_per_trigger; }

/// Wh consumed per day.
inline double daily_energy(const PowerProfile& p) {
  if (!(p.p_sleep_w > 0.0 && p.p_active_w > 0.0 && p.battery_wh > 0.0) || p.triggers_per_day < 0.0 ||
      p.active_s_per_trigger < 0.0)
    throw Error(ErrorCode::InvalidValue, "power profile fields must be positive");
  const double active_s = active_seconds_per_day(p);
  if (active_s > kSecondsPerDay)
    throw Error(ErrorCode::DutyOverflow, "active time " + detail::format_double(active_s) + " s exceeds one day");
  const double active_h = active_s / 3600.0;
  return p.p_sleep_w * (24.0 - active_h) + p.p_active_w * active_h;
}

inline double autonomy_years(const PowerProfile& p) { return p.battery_wh / daily_energy(p) / kDaysPerYear; }

/// Autonomy with the node asleep all day.
inline double sleep_only_ceiling_years(PowerProfile p) {
  p.triggers_per_day = 0.0;
  p.active_s_per_trigger = 0.0;
  return autonomy_years(p);
}

/// Per-trigger active time that makes the battery last `target_years`, by
/// bisection to 1e-7 s. Autonomy falls monotonically with active time, so the
/// root is unique.
inline double solve_active_time(double target_years, double triggers_per_day, PowerProfile p) {
  if (!(triggers_per_day > 0.0) || !(target_years > 0.0))
    throw Error(ErrorCode::InvalidValue, "target and trigger rate must be positive");
  p.triggers_per_day = triggers_per_day;
  auto years_at = [&](double active_s) {
    p.active_s_per_trigger = active_s;
    return autonomy_years(p);
  };
  double lo = 0.0;
  double hi = kSecondsPerDay / triggers_per_day;
  if (target_years > years_at(lo))
    throw Error(ErrorCode::Unachievable, "target exceeds the sleep-only ceiling of " +
                                             detail::format_double(years_at(lo)) + " years");
  if (target_years < years_at(hi))
    throw Error(ErrorCode::Unachievable, "target below the always-active floor");
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (years_at(mid) > target_years ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Fraction of events whose peak falls inside the wake-up blind spot.
inline double missed_peak_fraction(double wake_latency_s, std::span<const double> onset_to_peak_s) {
  if (onset_to_peak_s.empty()) return 0.0;
  std::size_t missed = 0;
  for (double d : onset_to_peak_s)
    if (d < wake_latency_s) ++missed;
  return static_cast<double>(missed) / static_cast<double>(onset_to_peak_s.size());
}

}  // namespace forkimpact
