#pragma once

// CSV sensor log format. One mandatory header line
//
//   t_us,node_id,ax,ay,az,unit=<G|ms2>
//
// followed by one row per sample. Rows of different nodes may interleave;
// within one node they must be strictly increasing in t_us.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"

namespace forkimpact {

enum class LogUnit { G, MetresPerSecond2 };

inline constexpr double seconds_from_us(std::int64_t us) { return static_cast<double>(us) / 1e6; }
inline std::int64_t us_from_seconds(double s) { return std::llround(s * 1e6); }

struct NodeMapping {
  std::string front_id = "front";
  std::string back_id = "back";

  static NodeMapping from(const AnalysisConfig& cfg) { return {cfg.front_node_id, cfg.back_node_id}; }
};

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline LogUnit parse_header(std::string_view line) {
  const auto cols = split_csv(line);
  static constexpr std::string_view expected[] = {"t_us", "node_id", "ax", "ay", "az"};
  if (cols.size() != 6) throw Error(ErrorCode::MalformedHeader, "line 1: expected 6 columns");
  for (std::size_t i = 0; i < 5; ++i)
    if (cols[i] != expected[i])
      throw Error(ErrorCode::MalformedHeader, "line 1: column " + std::to_string(i + 1) + " must be '" +
                                                  std::string(expected[i]) + "'");
  if (cols[5].substr(0, 5) != "unit=") throw Error(ErrorCode::MalformedHeader, "line 1: missing unit=<G|ms2>");
  const auto unit = cols[5].substr(5);
  if (unit == "G") return LogUnit::G;
  if (unit == "ms2") return LogUnit::MetresPerSecond2;
  throw Error(ErrorCode::UnknownUnit, "line 1: unit '" + std::string(unit) + "'");
}

}  // namespace detail

/// Parses a log into one Tilted-frame trace per node, ordered by first
/// appearance. Times become seconds relative to the earliest record, G values
/// are converted to m/s^2 and out-of-range samples are clipped and flagged.
inline std::vector<SensorTrace> parse_log(std::istream& in, const NodeMapping& nodes,
                                          double sample_rate_hz = kNominalRateHz) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "empty log");
  const LogUnit unit = detail::parse_header(line);
  const double scale = unit == LogUnit::G ? kGravity : 1.0;

  struct Row {
    std::int64_t t_us;
    double ax, ay, az;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>, std::less<>> rows;

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cols = detail::split_csv(line);
    const std::string where = "line " + std::to_string(lineno);
    if (cols.size() != 5) throw Error(ErrorCode::MalformedRow, where + ": expected 5 fields");
    Row r{};
    auto [p, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), r.t_us);
    if (ec != std::errc() || p != cols[0].data() + cols[0].size())
      throw Error(ErrorCode::MalformedRow, where + ": bad t_us");
    if (cols[1].empty()) throw Error(ErrorCode::MalformedRow, where + ": empty node_id");
    double* dst[] = {&r.ax, &r.ay, &r.az};
    for (int k = 0; k < 3; ++k) {
      auto v = detail::parse_double(cols[2 + k]);
      if (!v) throw Error(ErrorCode::MalformedRow, where + ": bad acceleration value");
      *dst[k] = *v * scale;
    }
    auto it = rows.find(cols[1]);
    if (it == rows.end()) {
      const std::string id(cols[1]);
      if (id != nodes.front_id && id != nodes.back_id)
        throw Error(ErrorCode::UnknownNode, where + ": node '" + id + "' is neither front nor back");
      order.push_back(id);
      it = rows.emplace(id, std::vector<Row>{}).first;
    } else if (r.t_us <= it->second.back().t_us) {
      throw Error(ErrorCode::NonMonotoneTimestamps, where + ": node '" + it->first + "' goes back in time");
    }
    it->second.push_back(r);
  }

  std::int64_t t0 = 0;
  bool any = false;
  for (const auto& [id, rs] : rows) {
    if (!any || rs.front().t_us < t0) t0 = rs.front().t_us;
    any = true;
  }

  std::vector<SensorTrace> traces;
  for (const auto& id : order) {
    SensorTrace tr;
    tr.node_id = id;
    tr.position = id == nodes.front_id ? MountPosition::Front : MountPosition::Back;
    tr.frame = Frame::Tilted;
    tr.sample_rate_hz = sample_rate_hz;
    const auto& rs = rows.find(id)->second;
    tr.samples.reserve(rs.size());
    for (const auto& r : rs)
      tr.samples.push_back(clip_to_full_scale({seconds_from_us(r.t_us - t0), r.ax, r.ay, r.az, false}));
    traces.push_back(std::move(tr));
  }
  return traces;
}

inline std::vector<SensorTrace> parse_log_file(const std::string& path, const NodeMapping& nodes,
                                               double sample_rate_hz = kNominalRateHz) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open log '" + path + "'");
  try {
    return parse_log(in, nodes, sample_rate_hz);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

/// Picks the front and back traces out of a parsed log.
inline std::pair<SensorTrace, SensorTrace> select_pair(const std::vector<SensorTrace>& traces) {
  const SensorTrace* front = nullptr;
  const SensorTrace* back = nullptr;
  for (const auto& t : traces) (t.position == MountPosition::Front ? front : back) = &t;
  if (!front || !back) throw Error(ErrorCode::MissingNode, "log must contain both a front and a back node");
  return {*front, *back};
}

/// Writes traces in the log format (unit=ms2), rows ordered by time and then
/// by trace order. Values use the shortest round-trip representation.
inline void write_log(std::ostream& out, const std::vector<SensorTrace>& traces) {
  out << "t_us,node_id,ax,ay,az,unit=ms2\n";
  std::vector<std::size_t> cursor(traces.size(), 0);
  while (true) {
    std::size_t best = traces.size();
    for (std::size_t k = 0; k < traces.size(); ++k) {
      if (cursor[k] >= traces[k].size()) continue;
      if (best == traces.size() || traces[k].samples[cursor[k]].t < traces[best].samples[cursor[best]].t) best = k;
    }
    if (best == traces.size()) break;
    const auto& s = traces[best].samples[cursor[best]++];
    out << us_from_seconds(s.t) << ',' << traces[best].node_id << ',' << detail::format_double(s.ax) << ','
        << detail::format_double(s.ay) << ',' << detail::format_double(s.az) << '\n';
  }
}

}  // namespace forkimpact
