#pragma once

// Labeled synthetic dual-node traces for the forklift event classes.
//
// Waveform families:
//   collision      damped 15 Hz lateral oscillation, signed by the impact side,
//                  strongest on the node nearest the impact (far node x0.4)
//   bumps/loading  tapered sum of three 6-20 Hz tones, mostly vertical
//   braking/start  raised-cosine plateau on a_x (negative / positive)
//   pickup/forks   weak independent tones on all axes, below the trigger
// Every run starts with a static lead-in (for tilt calibration) followed by a
// gentle forward drive-off (for the yaw check).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "forkimpact/calibration.hpp"
#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"
#include "forkimpact/log_io.hpp"
#include "forkimpact/power.hpp"

namespace forkimpact::synth {

enum class CollisionSeverity { VerySoft, Soft, Hard };
enum class BumpSpeed { Normal, Fast };
enum class BrakingIntensity { Soft, Hard, VeryHard };

struct Collision {
  Zone zone = Zone::RightBack;
  CollisionSeverity severity = CollisionSeverity::Hard;
};
struct BumpyDriving {
  BumpSpeed speed = BumpSpeed::Normal;
};
struct TruckLoading {};
struct Braking {
  BrakingIntensity intensity = BrakingIntensity::Hard;
};
struct SuddenStart {};
struct LoadPickup {};
struct ForkContact {};
struct Idle {};

using ScenarioKind =
    std::variant<Collision, BumpyDriving, TruckLoading, Braking, SuddenStart, LoadPickup, ForkContact, Idle>;

struct ScenarioSpec {
  ScenarioKind kind;
  double t_onset = 0.0;
  double duration = 0.0;
  std::uint64_t rng_seed = 0;
};

/// What the detector is expected to make of one injected event.
enum class Expected {
  Collision,     // Collision in the given zone
  HarshBraking,  // HarshBraking
  Vibration,     // short or long vibration (label in `label`)
  Benign,        // no Collision or HarshBraking; BT vibrations tolerated
  Nothing,       // no event at all
};

constexpr std::string_view to_string(Expected e) {
  switch (e) {
    case Expected::Collision: return "collision";
    case Expected::HarshBraking: return "harsh_braking";
    case Expected::Vibration: return "vibration";
    case Expected::Benign: return "benign";
    case Expected::Nothing: return "nothing";
  }
  return "?";
}

struct TruthEntry {
  std::size_t spec_index = 0;
  Expected expected = Expected::Nothing;
  std::optional<Zone> zone;
  std::optional<SeverityLabel> label;
  double t_onset = 0.0;
  double t_end = 0.0;
  double onset_to_peak = 0.0;
};

using GroundTruth = std::vector<TruthEntry>;

struct Mounting {
  double roll = 0.0;  // rad
  double pitch = 0.0;
  double yaw = 0.0;
};

struct GeneratorOptions {
  double noise_sigma = 0.05;
  Mounting front_mount;
  Mounting back_mount;
  double lead_in = 3.0;       // static seconds before the drive-off
  double drive_off = 2.0;     // seconds of gentle forward acceleration
  double drive_off_accel = 1.5;
  double tail = 3.0;          // quiet seconds after the last event
  std::uint64_t noise_seed = 1;
  std::string front_id = "front";
  std::string back_id = "back";

  /// Earliest admissible event onset.
  double quiet_until() const { return lead_in + drive_off + 1.0; }
};

struct GeneratedRun {
  SensorTrace front;
  SensorTrace back;
  GroundTruth truth;
};

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Per-node leveled-frame contribution of one event at offset tau.
struct Contribution {
  Eigen::Vector3d front = Eigen::Vector3d::Zero();
  Eigen::Vector3d back = Eigen::Vector3d::Zero();
};

inline double collision_amplitude(CollisionSeverity s) {
  switch (s) {
    case CollisionSeverity::VerySoft: return 6.0;
    case CollisionSeverity::Soft: return 14.0;
    case CollisionSeverity::Hard: return 115.0;
  }
  return 0.0;
}

inline double braking_level(BrakingIntensity b) {
  switch (b) {
    case BrakingIntensity::Soft: return 3.0;
    case BrakingIntensity::Hard: return 6.5;
    case BrakingIntensity::VeryHard: return 9.0;
  }
  return 0.0;
}

inline bool is_front(Zone z) { return z == Zone::LeftFront || z == Zone::RightFront; }
inline bool is_right(Zone z) { return z == Zone::RightFront || z == Zone::RightBack; }

inline double collision_lateral(double tau) { return std::exp(-tau / 0.04) * std::sin(kTwoPi * 15.0 * tau); }
inline double collision_vertical(double tau) { return std::exp(-tau / 0.03) * std::sin(kTwoPi * 25.0 * tau); }
inline double collision_longitudinal(double tau) { return std::exp(-tau / 0.04) * std::sin(kTwoPi * 15.0 * tau + 1.0); }

// Raised-cosine plateau of unit height over [0, duration] with `ramp` edges.
inline double plateau(double tau, double duration, double ramp) {
  if (tau < 0.0 || tau > duration) return 0.0;
  if (tau < ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * tau / ramp));
  if (tau > duration - ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * (duration - tau) / ramp));
  return 1.0;
}

// Tukey window with 20% cosine tapers at each end, x in [0, 1].
inline double tukey(double x) {
  constexpr double taper = 0.2;
  if (x < taper) return 0.5 * (1.0 - std::cos(std::numbers::pi * x / taper));
  if (x > 1.0 - taper) return 0.5 * (1.0 - std::cos(std::numbers::pi * (1.0 - x) / taper));
  return 1.0;
}

// Tukey-windowed sum of three tones, sampled on the trace grid and normalized
// to unit peak magnitude.
struct ToneBurst {
  std::vector<double> values;  // one per sample from onset

  ToneBurst(std::mt19937_64& rng, std::size_t n, double rate, double f_lo, double f_hi) : values(n, 0.0) {
    std::uniform_real_distribution<double> freq(f_lo, f_hi), phase(0.0, kTwoPi);
    double f[3], p[3];
    for (int k = 0; k < 3; ++k) f[k] = freq(rng), p[k] = phase(rng);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = static_cast<double>(i) / rate;
      const double w = tukey(static_cast<double>(i) / static_cast<double>(n > 1 ? n - 1 : 1));
      double u = 0.0;
      for (int k = 0; k < 3; ++k) u += std::sin(kTwoPi * f[k] * tau + p[k]);
      values[i] = w * u;
      peak = std::max(peak, std::abs(values[i]));
    }
    if (peak > 0.0)
      for (auto& v : values) v /= peak;
  }
};

}  // namespace detail

inline Expected expected_of(const ScenarioKind& kind) {
  return std::visit(
      [](const auto& k) -> Expected {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Collision>)
          return k.severity == CollisionSeverity::VerySoft ? Expected::Benign : Expected::Collision;
        else if constexpr (std::is_same_v<K, BumpyDriving> || std::is_same_v<K, TruckLoading>)
          return Expected::Vibration;
        else if constexpr (std::is_same_v<K, Braking>)
          return k.intensity == BrakingIntensity::Soft ? Expected::Nothing : Expected::HarshBraking;
        else if constexpr (std::is_same_v<K, LoadPickup> || std::is_same_v<K, ForkContact>)
          return Expected::Benign;
        else
          return Expected::Nothing;
      },
      kind);
}

/// Canonical short name, e.g. "collision RB hard".
inline std::string describe(const ScenarioKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Collision>) {
          static constexpr const char* sev[] = {"very_soft", "soft", "hard"};
          return "collision " + std::string(zone_code(k.zone)) + " " + sev[static_cast<int>(k.severity)];
        } else if constexpr (std::is_same_v<K, BumpyDriving>) {
          return k.speed == BumpSpeed::Fast ? "bump fast" : "bump normal";
        } else if constexpr (std::is_same_v<K, TruckLoading>) {
          return "truck loading";
        } else if constexpr (std::is_same_v<K, Braking>) {
          static constexpr const char* in[] = {"soft", "hard", "very_hard"};
          return std::string("braking ") + in[static_cast<int>(k.intensity)];
        } else if constexpr (std::is_same_v<K, SuddenStart>) {
          return "sudden start";
        } else if constexpr (std::is_same_v<K, LoadPickup>) {
          return "load pickup";
        } else if constexpr (std::is_same_v<K, ForkContact>) {
          return "fork contact";
        } else {
          return "idle";
        }
      },
      kind);
}

/// Renders the specs into front/back traces in the tilted sensor frame
/// (gravity included, noise added, clipped to full scale).
inline GeneratedRun generate(std::vector<ScenarioSpec> specs, const AnalysisConfig& cfg = {},
                             const GeneratorOptions& opt = {}) {
  const double rate = cfg.sample_rate;
  const auto period_us = static_cast<std::int64_t>(std::llround(1e6 / rate));
  auto snap = [&](double t) { return std::round(t * rate) / rate; };

  std::stable_sort(specs.begin(), specs.end(),
                   [](const ScenarioSpec& a, const ScenarioSpec& b) { return a.t_onset < b.t_onset; });
  double end = opt.quiet_until();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto& s = specs[i];
    s.t_onset = snap(s.t_onset);
    if (!(s.duration > 0.0)) throw Error(ErrorCode::InvalidValue, "scenario duration must be positive");
    if (s.t_onset < opt.quiet_until())
      throw Error(ErrorCode::OverlappingSpecs, describe(s.kind) + " overlaps the calibration lead-in");
    if (i > 0 && s.t_onset < specs[i - 1].t_onset + specs[i - 1].duration)
      throw Error(ErrorCode::OverlappingSpecs, describe(s.kind) + " overlaps the previous event");
    end = std::max(end, s.t_onset + s.duration);
  }
  end += opt.tail;
  const auto n = static_cast<std::size_t>(std::ceil(end * rate)) + 1;

  std::vector<Eigen::Vector3d> front(n, Eigen::Vector3d(0.0, 0.0, cfg.gravity));
  std::vector<Eigen::Vector3d> back = front;
  auto time_of = [&](std::size_t k) { return seconds_from_us(static_cast<std::int64_t>(k) * period_us); };

  // drive-off
  for (std::size_t k = 0; k < n; ++k) {
    const double a = opt.drive_off_accel * detail::plateau(time_of(k) - opt.lead_in, opt.drive_off, 0.4);
    front[k].x() += a;
    back[k].x() += a;
  }

  GroundTruth truth;
  for (std::size_t idx = 0; idx < specs.size(); ++idx) {
    const auto& spec = specs[idx];
    std::mt19937_64 rng(spec.rng_seed);
    const auto k0 = static_cast<std::size_t>(std::llround(spec.t_onset * rate));
    const auto len = std::min(n - k0, static_cast<std::size_t>(std::ceil(spec.duration * rate)) + 1);
    TruthEntry te;
    te.spec_index = idx;
    te.expected = expected_of(spec.kind);
    te.t_onset = spec.t_onset;
    te.t_end = spec.t_onset + spec.duration;

    // index of strongest sample of the dominant channel, for onset-to-peak
    double strongest = -1.0;
    auto track = [&](std::size_t i, double v) {
      if (std::abs(v) > strongest) strongest = std::abs(v), te.onset_to_peak = static_cast<double>(i) / rate;
    };

    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Collision>) {
            const double amp = detail::collision_amplitude(k.severity) * (detail::is_right(k.zone) ? 1.0 : -1.0);
            const double vamp = std::abs(amp);
            auto& near = detail::is_front(k.zone) ? front : back;
            auto& far = detail::is_front(k.zone) ? back : front;
            for (std::size_t i = 0; i < len; ++i) {
              const double tau = static_cast<double>(i) / rate;
              const Eigen::Vector3d v(0.1 * vamp * detail::collision_longitudinal(tau), amp * detail::collision_lateral(tau),
                                      0.2 * vamp * detail::collision_vertical(tau));
              near[k0 + i] += v;
              far[k0 + i] += 0.4 * v;
            }
            if (k.severity != CollisionSeverity::VerySoft) te.zone = k.zone;
            // continuous-time peak of the lateral pulse
            for (double tau = 0.0; tau <= spec.duration; tau += 1e-5) {
              const double v = detail::collision_lateral(tau);
              if (std::abs(v) > strongest) strongest = std::abs(v), te.onset_to_peak = tau;
            }
          } else if constexpr (std::is_same_v<K, BumpyDriving> || std::is_same_v<K, TruckLoading>) {
            double peak = 0.0;
            double f_lo = 6.0, f_hi = 18.0;
            if constexpr (std::is_same_v<K, BumpyDriving>) {
              std::uniform_real_distribution<double> p(k.speed == BumpSpeed::Fast ? 30.0 : 7.0,
                                                       k.speed == BumpSpeed::Fast ? 50.0 : 15.0);
              peak = p(rng);
              te.label = k.speed == BumpSpeed::Fast ? SeverityLabel::AT : SeverityLabel::BT;
            } else {
              std::uniform_real_distribution<double> p(7.0, 15.0);
              peak = p(rng);
              f_lo = 8.0, f_hi = 20.0;
              te.label = SeverityLabel::BT;
            }
            const detail::ToneBurst z(rng, len, rate, f_lo, f_hi), x(rng, len, rate, f_lo, f_hi),
                y(rng, len, rate, f_lo, f_hi);
            for (std::size_t i = 0; i < len; ++i) {
              const Eigen::Vector3d v(0.25 * peak * x.values[i], 0.12 * peak * y.values[i], peak * z.values[i]);
              front[k0 + i] += v;
              back[k0 + i] += 0.85 * v;
              track(i, z.values[i]);
            }
          } else if constexpr (std::is_same_v<K, Braking> || std::is_same_v<K, SuddenStart>) {
            double level = 6.5;
            if constexpr (std::is_same_v<K, Braking>) level = -detail::braking_level(k.intensity);
            for (std::size_t i = 0; i < len; ++i) {
              const double a = level * detail::plateau(static_cast<double>(i) / rate, spec.duration, 0.25);
              front[k0 + i].x() += a;
              back[k0 + i].x() += a;
              track(i, a);
            }
          } else if constexpr (std::is_same_v<K, LoadPickup> || std::is_same_v<K, ForkContact>) {
            const detail::ToneBurst x(rng, len, rate, 3.0, 15.0), y(rng, len, rate, 3.0, 15.0),
                z(rng, len, rate, 3.0, 15.0);
            for (std::size_t i = 0; i < len; ++i) {
              const Eigen::Vector3d v(x.values[i], y.values[i], z.values[i]);
              front[k0 + i] += 2.5 * v;
              back[k0 + i] += 1.2 * v;
              track(i, v.norm());
            }
          }
        },
        spec.kind);
    truth.push_back(te);
  }

  std::mt19937_64 noise_rng(opt.noise_seed);
  std::normal_distribution<double> noise(0.0, opt.noise_sigma);
  auto render = [&](const std::vector<Eigen::Vector3d>& leveled, const Mounting& m, const std::string& id,
                    MountPosition pos) {
    SensorTrace tr;
    tr.node_id = id;
    tr.position = pos;
    tr.frame = Frame::Tilted;
    tr.sample_rate_hz = rate;
    tr.samples.reserve(n);
    const Eigen::Matrix3d r = euler_321(m.roll, m.pitch, m.yaw);
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::Vector3d v = r * leveled[k];
      ImuSample s{time_of(k), v.x(), v.y(), v.z(), false};
      if (opt.noise_sigma > 0.0) {
        s.ax += noise(noise_rng);
        s.ay += noise(noise_rng);
        s.az += noise(noise_rng);
      }
      tr.samples.push_back(clip_to_full_scale(s));
    }
    return tr;
  };
  GeneratedRun run;
  run.front = render(front, opt.front_mount, opt.front_id, MountPosition::Front);
  run.back = render(back, opt.back_mount, opt.back_id, MountPosition::Back);
  run.truth = std::move(truth);
  return run;
}

inline double missed_peak_fraction(double wake_latency_s, const GroundTruth& truth) {
  std::vector<double> d;
  for (const auto& t : truth) d.push_back(t.onset_to_peak);
  return forkimpact::missed_peak_fraction(wake_latency_s, d);
}

}  // namespace forkimpact::synth
