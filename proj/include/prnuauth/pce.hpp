// Copyright 2026 The prnuauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

#include "prnuauth/correlation.hpp"
#include "prnuauth/error.hpp"
#include "prnuauth/fingerprint.hpp"

namespace prnuauth {

inline constexpr double kDefaultPceThreshold = 50.0;
inline constexpr std::size_t kDefaultExclusionHalfWidth = 5;
// Inputs are unit-normalized, so off-peak correlations at or below this
// magnitude are transform round-off rather than signal.
inline constexpr double kMinOffPeakRms = 1e-12;

struct PceReport {
  double pce = 0.0;
  // Normalized correlation at zero shift.
  double peak_correlation = 0.0;
  std::size_t exclusion_half_width = kDefaultExclusionHalfWidth;
  std::size_t width = 0;
  std::size_t height = 0;
};

struct MatchDecision {
  bool matched = false;
  double pce = 0.0;
  double threshold = kDefaultPceThreshold;
};

// Signed peak-to-correlation energy with the peak pinned at zero shift:
//   pce = sign(c0) * c0^2 / mean(c_s^2 for s outside the exclusion window).
// The window is centered on the origin and wraps around the plane edges.
inline PceReport pce(const CameraFingerprint& a, const CameraFingerprint& b,
                     std::size_t exclusion_half_width = kDefaultExclusionHalfWidth) {
  detail::require_same_shape(a, b);
  const std::size_t w = a.width(), h = a.height();
  const std::size_t span = 2 * exclusion_half_width + 1;
  if (span >= w || span >= h) {
    throw Error(ErrorCode::kInvalidArgument,
                "exclusion window " + std::to_string(span) + "x" + std::to_string(span) +
                    " does not fit inside a " + std::to_string(w) + "x" +
                    std::to_string(h) + " plane");
  }

  const RealPlane plane = correlation_plane(a, b);
  auto excluded = [&](std::size_t d, std::size_t n) {
    return std::min(d, n - d) <= exclusion_half_width;
  };
  double energy = 0.0;
  std::size_t count = 0;
  for (std::size_t dy = 0; dy < h; ++dy) {
    const bool row_in = excluded(dy, h);
    const auto row = plane.row(dy);
    for (std::size_t dx = 0; dx < w; ++dx) {
      if (row_in && excluded(dx, w)) continue;
      energy += row[dx] * row[dx];
      ++count;
    }
  }
  energy /= static_cast<double>(count);
  if (!(energy > kMinOffPeakRms * kMinOffPeakRms)) {
    throw Error(ErrorCode::kDegenerate,
                "degenerate correlation plane: zero energy outside the peak");
  }

  const double c0 = plane(0, 0);
  PceReport report;
  report.peak_correlation = c0;
  report.pce = (c0 < 0.0 ? -1.0 : 1.0) * c0 * c0 / energy;
  report.exclusion_half_width = exclusion_half_width;
  report.width = w;
  report.height = h;
  return report;
}

// Strictly greater than the threshold.
inline MatchDecision decide(double pce_value, double threshold = kDefaultPceThreshold) {
  return MatchDecision{pce_value > threshold, pce_value, threshold};
}

inline MatchDecision decide(const PceReport& report, double threshold = kDefaultPceThreshold) {
  return decide(report.pce, threshold);
}

}  // namespace prnuauth
