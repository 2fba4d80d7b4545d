#pragma once

// Human and machine renderings of detected events and run metadata.
//
// Machine format, one event per line, tab separated:
//   t_start  t_end  kind  zone_or_label  peak  diag_json
// Lines starting with '#' carry run metadata and are not events.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "forkimpact/calibration.hpp"
#include "forkimpact/classify.hpp"
#include "forkimpact/config.hpp"
#include "forkimpact/pipeline.hpp"

namespace forkimpact {

enum class ReportFormat { Human, Machine };

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // avoid "-0.000"
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

/// Detection vocabulary: "RB collision", "braking", "short vibration AT!".
inline std::string event_label(const EventReport& ev) {
  auto severity = [&] { return ev.label == SeverityLabel::AT ? std::string("AT!") : std::string("BT"); };
  switch (ev.kind) {
    case EventKind::Collision: return std::string(zone_code(ev.zone.value_or(Zone::RightFront))) + " collision";
    case EventKind::HarshBraking: return "braking";
    case EventKind::VibrationShort: return "short vibration " + severity();
    case EventKind::VibrationLong: return "long vibration " + severity();
  }
  return "?";
}

/// Run-length summary in time order, e.g. "1x short vibration BT, 3x RB
/// collision"; "Nothing" when there are no events.
inline std::string summarize(const std::vector<EventReport>& events) {
  if (events.empty()) return "Nothing";
  std::string out;
  std::size_t i = 0;
  while (i < events.size()) {
    const std::string label = event_label(events[i]);
    std::size_t j = i;
    while (j < events.size() && event_label(events[j]) == label) ++j;
    if (!out.empty()) out += ", ";
    out += std::to_string(j - i) + "x " + label;
    i = j;
  }
  return out;
}

inline nlohmann::json diagnostics_json(const Diagnostics& d) {
  return {
      {"duration", d.duration},
      {"ratio_ax", d.ratio_ax},
      {"route", std::string(to_string(d.route))},
      {"dominant_node", std::string(to_string(d.dominant_node))},
      {"area_ay_dom", d.area_ay_dom},
      {"area_az_dom", d.area_az_dom},
      {"net_ay_dom", d.net_ay_dom},
      {"peak_ay_dom", d.peak_ay_dom},
      {"crossing_rate", d.crossing_rate},
      {"net_braking_axis", d.net_braking_axis},
      {"peak_a_total_mean", d.peak_a_total_mean},
  };
}

inline Diagnostics diagnostics_from_json(const nlohmann::json& j) {
  Diagnostics d;
  d.duration = j.at("duration").get<double>();
  d.ratio_ax = j.at("ratio_ax").get<double>();
  d.route = j.at("route").get<std::string>() == "long" ? Route::Long : Route::Short;
  d.dominant_node = j.at("dominant_node").get<std::string>() == "back" ? MountPosition::Back : MountPosition::Front;
  d.area_ay_dom = j.at("area_ay_dom").get<double>();
  d.area_az_dom = j.at("area_az_dom").get<double>();
  d.net_ay_dom = j.at("net_ay_dom").get<double>();
  d.peak_ay_dom = j.at("peak_ay_dom").get<double>();
  d.crossing_rate = j.at("crossing_rate").get<double>();
  d.net_braking_axis = j.at("net_braking_axis").get<double>();
  d.peak_a_total_mean = j.at("peak_a_total_mean").get<double>();
  return d;
}

inline std::string machine_line(const EventReport& ev) {
  std::string tag;
  if (ev.zone) tag = zone_code(*ev.zone);
  else if (ev.label) tag = to_string(*ev.label);
  else tag = "-";
  std::ostringstream os;
  os << detail::format_double(ev.t_start) << '\t' << detail::format_double(ev.t_end) << '\t' << to_string(ev.kind)
     << '\t' << tag << '\t' << detail::format_double(ev.severity) << '\t' << diagnostics_json(ev.diagnostics).dump();
  return os.str();
}

/// Inverse of machine_line.
inline EventReport parse_machine_line(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (int k = 0; k < 5; ++k) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) throw Error(ErrorCode::MalformedRow, "machine report: too few fields");
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  cols.push_back(line.substr(start));
  EventReport ev;
  auto num = [](const std::string& s) {
    auto v = detail::parse_double(s);
    if (!v) throw Error(ErrorCode::MalformedRow, "machine report: bad number '" + s + "'");
    return *v;
  };
  ev.t_start = num(cols[0]);
  ev.t_end = num(cols[1]);
  bool known = false;
  for (EventKind k : {EventKind::Collision, EventKind::HarshBraking, EventKind::VibrationShort, EventKind::VibrationLong})
    if (to_string(k) == cols[2]) ev.kind = k, known = true;
  if (!known) throw Error(ErrorCode::MalformedRow, "machine report: unknown kind '" + cols[2] + "'");
  if (auto z = zone_from_code(cols[3])) ev.zone = z;
  else if (cols[3] == "AT") ev.label = SeverityLabel::AT;
  else if (cols[3] == "BT") ev.label = SeverityLabel::BT;
  ev.severity = num(cols[4]);
  ev.diagnostics = diagnostics_from_json(nlohmann::json::parse(cols[5]));
  return ev;
}

/// Event list only. Human: a summary line then one line per event.
inline void emit_report(std::ostream& out, const std::vector<EventReport>& events, ReportFormat format) {
  if (format == ReportFormat::Machine) {
    for (const auto& ev : events) out << machine_line(ev) << '\n';
    return;
  }
  out << summarize(events) << '\n';
  for (const auto& ev : events)
    out << "  " << fixed(ev.t_start, 3) << "-" << fixed(ev.t_end, 3) << " s  " << event_label(ev) << "  peak "
        << fixed(ev.severity, 2) << " m/s^2\n";
}

inline std::string emit_report(const std::vector<EventReport>& events, ReportFormat format) {
  std::ostringstream os;
  emit_report(os, events, format);
  return os.str();
}

inline std::string calibration_line(std::string_view node, const NodeCalibration& c) {
  std::string s = "# calibration " + std::string(node) + " roll=" + fixed(rad2deg(c.params.roll), 3) +
                  " pitch=" + fixed(rad2deg(c.params.pitch), 3) + " yaw=";
  s += c.params.yaw_estimate ? fixed(rad2deg(*c.params.yaw_estimate), 3) : std::string("n/a");
  s += std::string(" gross_yaw=") + (c.params.yaw_gross_misalignment ? "yes" : "no");
  s += " gaps=" + std::to_string(c.gaps.size()) + " saturated=" + std::to_string(c.saturated);
  return s;
}

/// Effective configuration, one key per line; overridden keys name the
/// source of their final value.
inline void emit_config_echo(std::ostream& out, const AnalysisConfig& cfg) {
  for (auto key : AnalysisConfig::keys()) {
    out << "# config " << key << '=' << cfg.get(key);
    for (auto it = cfg.overrides.rbegin(); it != cfg.overrides.rend(); ++it)
      if (it->key == key) {
        out << " (" << it->source << ')';
        break;
      }
    out << '\n';
  }
}

inline void emit_run_report(std::ostream& out, const AnalysisResult& res, const AnalysisConfig& cfg,
                            ReportFormat format) {
  emit_config_echo(out, cfg);
  out << calibration_line("front", res.front) << '\n' << calibration_line("back", res.back) << '\n';
  emit_report(out, res.events, format);
}

}  // namespace forkimpact
