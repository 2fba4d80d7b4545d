#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "forkimpact/core.hpp"

namespace forkimpact {

enum class BrakingAxis { X, Y };

/// Every tunable threshold of the detector. Defaults are the values the
/// detector was developed with; times are seconds, accelerations m/s^2.
struct AnalysisConfig {
  double trigger_threshold = 5.0;
  double release_threshold = 1.0;
  double merge_gap = 0.5;
  double min_segment = 0.005;
  double short_max = 0.75;
  double long_min = 1.25;
  double ratio_long = 0.75;
  double vibration_severe = 22.0;
  double harsh_braking = 5.0;
  BrakingAxis braking_axis = BrakingAxis::X;
  double crossing_rate_braking_max = 4.0;  // crossings per second
  double sample_rate = kNominalRateHz;
  double gravity = kGravity;

  std::string front_node_id = "front";
  std::string back_node_id = "back";

  // Calibration gates.
  double stationary_std_max = 0.15;
  double static_window = 1.0;
  double yaw_min_motion = 1.0;
  double yaw_gross_deg = 45.0;

  struct Override {
    std::string key;
    std::string value;
    std::string source;
  };
  /// Every key that was set away from its default, in application order.
  std::vector<Override> overrides;

  void set(std::string_view key, std::string_view value, std::string_view source = "file");
  std::string get(std::string_view key) const;
  void validate() const;

  static const std::vector<std::string_view>& keys();
};

namespace detail {

using DoubleField = double AnalysisConfig::*;
using StringField = std::string AnalysisConfig::*;
struct AxisField {};

struct ConfigKey {
  std::string_view name;
  std::variant<DoubleField, StringField, AxisField> field;
};

inline const std::vector<ConfigKey>& config_table() {
  static const std::vector<ConfigKey> table = {
      {"trigger_threshold", &AnalysisConfig::trigger_threshold},
      {"release_threshold", &AnalysisConfig::release_threshold},
      {"merge_gap", &AnalysisConfig::merge_gap},
      {"min_segment", &AnalysisConfig::min_segment},
      {"short_max", &AnalysisConfig::short_max},
      {"long_min", &AnalysisConfig::long_min},
      {"ratio_long", &AnalysisConfig::ratio_long},
      {"vibration_severe", &AnalysisConfig::vibration_severe},
      {"harsh_braking", &AnalysisConfig::harsh_braking},
      {"braking_axis", AxisField{}},
      {"crossing_rate_braking_max", &AnalysisConfig::crossing_rate_braking_max},
      {"sample_rate", &AnalysisConfig::sample_rate},
      {"gravity", &AnalysisConfig::gravity},
      {"front_node_id", &AnalysisConfig::front_node_id},
      {"back_node_id", &AnalysisConfig::back_node_id},
      {"stationary_std_max", &AnalysisConfig::stationary_std_max},
      {"static_window", &AnalysisConfig::static_window},
      {"yaw_min_motion", &AnalysisConfig::yaw_min_motion},
      {"yaw_gross_deg", &AnalysisConfig::yaw_gross_deg},
  };
  return table;
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline const std::vector<std::string_view>& AnalysisConfig::keys() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> out;
    for (const auto& k : detail::config_table()) out.push_back(k.name);
    return out;
  }();
  return names;
}

inline void AnalysisConfig::set(std::string_view key, std::string_view value, std::string_view source) {
  value = detail::trim(value);
  for (const auto& entry : detail::config_table()) {
    if (entry.name != key) continue;
    std::visit(
        [&](auto field) {
          using F = decltype(field);
          if constexpr (std::is_same_v<F, detail::DoubleField>) {
            auto v = detail::parse_double(value);
            if (!v) throw Error(ErrorCode::InvalidValue, std::string(key) + " = '" + std::string(value) + "' is not a number");
            this->*field = *v;
          } else if constexpr (std::is_same_v<F, detail::StringField>) {
            if (value.empty()) throw Error(ErrorCode::InvalidValue, std::string(key) + " must not be empty");
            this->*field = std::string(value);
          } else {
            if (value == "x" || value == "X") braking_axis = BrakingAxis::X;
            else if (value == "y" || value == "Y") braking_axis = BrakingAxis::Y;
            else throw Error(ErrorCode::InvalidValue, "braking_axis must be x or y");
          }
        },
        entry.field);
    overrides.push_back({std::string(key), std::string(value), std::string(source)});
    return;
  }
  throw Error(ErrorCode::InvalidValue, "unknown config key '" + std::string(key) + "'");
}

inline std::string AnalysisConfig::get(std::string_view key) const {
  for (const auto& entry : detail::config_table()) {
    if (entry.name != key) continue;
    return std::visit(
        [&](auto field) -> std::string {
          using F = decltype(field);
          if constexpr (std::is_same_v<F, detail::DoubleField>) return detail::format_double(this->*field);
          else if constexpr (std::is_same_v<F, detail::StringField>) return this->*field;
          else return braking_axis == BrakingAxis::X ? "x" : "y";
        },
        entry.field);
  }
  throw Error(ErrorCode::UnknownParameter, "unknown config key '" + std::string(key) + "'");
}

inline void AnalysisConfig::validate() const {
  for (const auto& entry : detail::config_table()) {
    if (const auto* f = std::get_if<detail::DoubleField>(&entry.field)) {
      if (!(this->**f > 0.0))
        throw Error(ErrorCode::InvalidValue, std::string(entry.name) + " must be positive");
    }
  }
  if (!(short_max < long_min)) throw Error(ErrorCode::InvalidValue, "short_max must be below long_min");
  if (!(ratio_long < 1.0)) throw Error(ErrorCode::InvalidValue, "ratio_long must lie in (0, 1)");
  if (!(release_threshold <= trigger_threshold))
    throw Error(ErrorCode::InvalidValue, "release_threshold must not exceed trigger_threshold");
  if (front_node_id == back_node_id)
    throw Error(ErrorCode::InvalidValue, "front_node_id and back_node_id must differ");
}

/// Reads flat `key = value` lines; `#` starts a comment.
inline AnalysisConfig parse_config(std::istream& in, AnalysisConfig base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = detail::trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidValue, "config line " + std::to_string(lineno) + ": expected key = value");
    base.set(detail::trim(sv.substr(0, eq)), sv.substr(eq + 1), "file");
  }
  base.validate();
  return base;
}

/// An empty path yields the defaults.
inline AnalysisConfig load_config(const std::string& path, AnalysisConfig base = {}) {
  if (path.empty()) {
    base.validate();
    return base;
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  return parse_config(in, std::move(base));
}

}  // namespace forkimpact
