#pragma once

#include <span>
#include <vector>

#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"

namespace forkimpact {

/// Trigger/release segmentation of a magnitude series.
///
/// A sample above `trigger_threshold` opens a segment which is grown in both
/// directions while the signal stays at or above `release_threshold`; the
/// samples just outside a segment are therefore below release. Windows whose
/// gap (time between last and first sample) is at most `merge_gap` are merged,
/// then windows shorter than `min_segment` are dropped.
inline std::vector<Segment> extract_segments(std::span<const double> t, std::span<const double> value,
                                             const AnalysisConfig& cfg) {
  std::vector<Segment> windows;
  const std::size_t n = std::min(t.size(), value.size());
  std::size_t i = 0;
  while (i < n) {
    if (value[i] < cfg.release_threshold) {
      ++i;
      continue;
    }
    // maximal run at or above release
    std::size_t j = i;
    bool triggered = false;
    double peak = value[i];
    while (j < n && value[j] >= cfg.release_threshold) {
      triggered = triggered || value[j] > cfg.trigger_threshold;
      peak = std::max(peak, value[j]);
      ++j;
    }
    if (triggered) windows.push_back({i, j - 1, t[i], t[j - 1], peak});
    i = j;
  }

  std::vector<Segment> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.t_start - merged.back().t_end <= cfg.merge_gap) {
      auto& m = merged.back();
      m.last = w.last;
      m.t_end = w.t_end;
      m.peak_a_total_mean = std::max(m.peak_a_total_mean, w.peak_a_total_mean);
    } else {
      merged.push_back(w);
    }
  }

  std::erase_if(merged, [&](const Segment& s) { return s.duration() < cfg.min_segment; });
  return merged;
}

inline std::vector<Segment> extract_segments(const FusedTrace& fused, const AnalysisConfig& cfg) {
  const auto t = fused.times();
  return extract_segments(t, fused.a_total_mean, cfg);
}

}  // namespace forkimpact
