#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"

namespace oracle {

struct Window {
  std::size_t first;
  std::size_t last;
  bool operator<(const Window& o) const { return std::pair(first, last) < std::pair(o.first, o.last); }
  bool operator==(const Window&) const = default;
};

/// Quadratic reference segmentation: for every trigger sample walk outwards
/// to the release boundary, deduplicate, merge pairwise until nothing
/// changes, then drop short windows.
inline std::vector<Window> brute_force_segments(std::span<const double> t, std::span<const double> v,
                                                const forkimpact::AnalysisConfig& cfg) {
  std::set<Window> found;
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(v[k] > cfg.trigger_threshold)) continue;
    std::size_t a = k, b = k;
    while (a > 0 && !(v[a - 1] < cfg.release_threshold)) --a;
    while (b + 1 < n && !(v[b + 1] < cfg.release_threshold)) ++b;
    found.insert({a, b});
  }
  std::vector<Window> w(found.begin(), found.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i)
      for (std::size_t j = 0; j < w.size() && !changed; ++j) {
        if (i == j || w[i].first > w[j].first) continue;
        if (t[w[j].first] - t[w[i].last] <= cfg.merge_gap) {
          w[i].last = std::max(w[i].last, w[j].last);
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
  }
  std::erase_if(w, [&](const Window& x) { return t[x.last] - t[x.first] < cfg.min_segment; });
  std::sort(w.begin(), w.end());
  return w;
}

/// Piecewise-constant trace built from runs drawn out of a small value pool
/// that includes the exact threshold values.
template <typename Rng>
std::vector<double> random_pulse_trace(Rng& rng, std::size_t n) {
  static constexpr double pool[] = {0.0, 0.3, 0.99, 1.0, 2.5, 4.99, 5.0, 5.01, 8.0, 30.0};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(pool) - 1);
  std::uniform_int_distribution<std::size_t> run(1, 80);
  std::bernoulli_distribution quiet(0.5);
  std::vector<double> v;
  while (v.size() < n) {
    const double x = quiet(rng) ? 0.0 : pool[pick(rng)];
    v.insert(v.end(), std::min(run(rng), n - v.size()), x);
  }
  return v;
}

/// Random 3x3 rotation from a random unit quaternion.
template <typename Rng>
std::array<std::array<double, 3>, 3> random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double norm = 0.0;
  for (double& x : q) x = n(rng), norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : q) x /= norm;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

/// Gravity seen by a sensor tilted by roll phi and pitch theta, written out
/// component by component.
inline std::array<double, 3> tilted_gravity(double phi, double theta, double g = forkimpact::kGravity) {
  return {-g * std::sin(theta), g * std::cos(theta) * std::sin(phi), g * std::cos(theta) * std::cos(phi)};
}

}  // namespace oracle
