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

// Synthetic camera with a known sensor pattern. Captures follow
//   I = clip(scene * (1 + K) + n),  n ~ N(0, sigma^2)
// so extraction and matching can be checked against ground truth.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by the
// standard, and a local Box-Muller transform; std::normal_distribution is
// implementation-defined and is not used.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/plane.hpp"

namespace prnuauth {

inline constexpr double kSceneLow = 40.0;
inline constexpr double kSceneHigh = 215.0;
inline constexpr double kMaxPatternStrength = 0.1;
inline constexpr std::size_t kMinSyntheticSide = 16;

// SplitMix64 finalizer; derives independent stream seeds from (seed, stream).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SyntheticCamera {
  RealPlane pattern;
  double strength = 0.0;
  double read_noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_synthetic_size(std::size_t w, std::size_t h) {
  if (w < kMinSyntheticSide || h < kMinSyntheticSide) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic planes need at least " + std::to_string(kMinSyntheticSide) +
                    " pixels per side");
  }
}

inline void circular_box_blur_rows(RealPlane& p, std::size_t radius) {
  const std::size_t w = p.width();
  const std::size_t window = 2 * radius + 1;
  std::vector<double> row(w);
  for (std::size_t y = 0; y < p.height(); ++y) {
    auto r = p.row(y);
    std::copy(r.begin(), r.end(), row.begin());
    double acc = 0.0;
    for (std::size_t t = 0; t < window; ++t) acc += row[(t + w * (radius / w + 1) - radius) % w];
    for (std::size_t x = 0; x < w; ++x) {
      r[x] = acc / static_cast<double>(window);
      acc += row[(x + radius + 1) % w] - row[(x + w * (radius / w + 1) - radius) % w];
    }
  }
}

inline RealPlane transposed(const RealPlane& p) {
  RealPlane t(p.height(), p.width());
  for (std::size_t y = 0; y < p.height(); ++y) {
    for (std::size_t x = 0; x < p.width(); ++x) t(y, x) = p(x, y);
  }
  return t;
}

}  // namespace detail

// Zero-mean i.i.d. Gaussian field with standard deviation ~strength.
inline RealPlane gen_pattern(std::uint64_t seed, std::size_t w, std::size_t h,
                             double strength) {
  detail::require_synthetic_size(w, h);
  if (!(strength > 0.0 && strength <= kMaxPatternStrength)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pattern strength out of range (0, 0.1]: " + std::to_string(strength));
  }
  GaussianSource rng(mix_seed(seed, 0x50415454ull));
  RealPlane k(w, h);
  double mean = 0.0;
  for (double& v : k.values()) {
    v = rng.normal();
    mean += v;
  }
  mean /= static_cast<double>(k.size());
  for (double& v : k.values()) v = (v - mean) * strength;
  return k;
}

// Smooth content: white noise blurred by three circular box passes, then
// mapped affinely onto [40, 215].
inline LuminanceImage gen_scene(std::uint64_t seed, std::size_t w, std::size_t h) {
  detail::require_synthetic_size(w, h);
  GaussianSource rng(mix_seed(seed, 0x5343454eull));
  RealPlane field(w, h);
  for (double& v : field.values()) v = rng.uniform();

  const std::size_t radius = std::max<std::size_t>(2, std::min(w, h) / 16);
  for (int pass = 0; pass < 3; ++pass) detail::circular_box_blur_rows(field, radius);
  field = detail::transposed(field);
  for (int pass = 0; pass < 3; ++pass) detail::circular_box_blur_rows(field, radius);
  field = detail::transposed(field);

  const auto [lo_it, hi_it] = std::minmax_element(field.values().begin(), field.values().end());
  const double lo = *lo_it, hi = *hi_it;
  const double scale = hi > lo ? (kSceneHigh - kSceneLow) / (hi - lo) : 0.0;
  for (double& v : field.values()) {
    v = hi > lo ? std::clamp(kSceneLow + (v - lo) * scale, kSceneLow, kSceneHigh)
                : 0.5 * (kSceneLow + kSceneHigh);
  }
  return LuminanceImage(std::move(field));
}

inline SyntheticCamera make_camera(std::uint64_t seed, std::size_t w, std::size_t h,
                                   double strength, double read_noise_sigma) {
  if (!(read_noise_sigma >= 0.0) || !std::isfinite(read_noise_sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "read noise sigma must be non-negative");
  }
  return SyntheticCamera{gen_pattern(seed, w, h, strength), strength, read_noise_sigma, seed};
}

inline LuminanceImage capture(const LuminanceImage& scene, const SyntheticCamera& cam,
                              std::uint64_t shot_seed) {
  if (scene.width() != cam.pattern.width() || scene.height() != cam.pattern.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "scene and sensor pattern differ in shape");
  }
  GaussianSource rng(mix_seed(shot_seed, 0x53484f54ull));
  RealPlane out(scene.width(), scene.height());
  const auto src = scene.pixels().values();
  const auto k = cam.pattern.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    double v = src[i] * (1.0 + k[i]);
    if (cam.read_noise_sigma > 0.0) v += cam.read_noise_sigma * rng.normal();
    dst[i] = std::clamp(v, 0.0, LuminanceImage::kMaxValue);
  }
  return LuminanceImage(std::move(out));
}

// `count` captures of distinct scenes. Scene and shot seeds derive from
// `session_seed`, so disjoint sessions see disjoint content.
inline std::vector<LuminanceImage> capture_session(const SyntheticCamera& cam,
                                                   std::size_t count,
                                                   std::uint64_t session_seed) {
  std::vector<LuminanceImage> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto scene = gen_scene(mix_seed(session_seed, 2 * i), cam.pattern.width(),
                                 cam.pattern.height());
    frames.push_back(capture(scene, cam, mix_seed(session_seed, 2 * i + 1)));
  }
  return frames;
}

// Adds N(0, sigma^2) to every pixel and clips.
inline LuminanceImage add_gaussian_noise(const LuminanceImage& img, double sigma,
                                         std::uint64_t seed) {
  GaussianSource rng(mix_seed(seed, 0x4e4f4953ull));
  RealPlane out = img.pixels();
  for (double& v : out.values()) {
    v = std::clamp(v + sigma * rng.normal(), 0.0, LuminanceImage::kMaxValue);
  }
  return LuminanceImage(std::move(out));
}

}  // namespace prnuauth
