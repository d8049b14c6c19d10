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

// Sensor fingerprint estimation: noise residuals, maximum-likelihood
// aggregation over an image set, and row/column zero-meaning.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "prnuauth/denoise.hpp"
#include "prnuauth/error.hpp"
#include "prnuauth/plane.hpp"
#include "prnuauth/resample.hpp"

namespace prnuauth {

struct NoiseResidual {
  RealPlane values;

  std::size_t width() const noexcept { return values.width(); }
  std::size_t height() const noexcept { return values.height(); }
};

struct CameraFingerprint {
  RealPlane values;
  std::uint32_t image_count = 0;
  bool postprocessed = false;
  std::string label;

  std::size_t width() const noexcept { return values.width(); }
  std::size_t height() const noexcept { return values.height(); }
};

struct ExtractOptions {
  DenoiseParams denoise;
  // Pixels at or above this level carry no multiplicative signal.
  double saturation_level = 250.0;
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

inline NoiseResidual residual(const LuminanceImage& img, const DenoiseParams& params = {}) {
  const LuminanceImage smooth = denoise(img, params);
  RealPlane w(img.width(), img.height());
  const auto src = img.pixels().values();
  const auto den = smooth.pixels().values();
  auto dst = w.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] - den[i];
  return NoiseResidual{std::move(w)};
}

namespace detail {

inline unsigned resolve_threads(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::thread::hardware_concurrency() : requested;
  if (n == 0) n = 1;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, count) on a small pool; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned n = resolve_threads(threads, count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += n) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline void require_uniform(std::span<const LuminanceImage> images) {
  if (images.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no images supplied");
  }
  for (const auto& img : images) {
    if (img.width() != images.front().width() || img.height() != images.front().height()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "dimension mismatch: " + std::to_string(img.width()) + "x" +
                      std::to_string(img.height()) + " vs " +
                      std::to_string(images.front().width()) + "x" +
                      std::to_string(images.front().height()));
    }
  }
}

}  // namespace detail

// K = sum(W_i * I_i) / sum(I_i^2) per pixel, skipping saturated samples.
// Residuals may be computed concurrently; the sums always run in input order.
inline CameraFingerprint accumulate(std::span<const LuminanceImage> images,
                                    const ExtractOptions& options = {}) {
  detail::require_uniform(images);
  const std::size_t w = images.front().width();
  const std::size_t h = images.front().height();

  std::vector<NoiseResidual> residuals(images.size());
  detail::parallel_for(images.size(), options.threads, [&](std::size_t i) {
    residuals[i] = residual(images[i], options.denoise);
  });

  std::vector<double> num(w * h, 0.0), den(w * h, 0.0);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto px = images[i].pixels().values();
    const auto res = residuals[i].values.values();
    for (std::size_t p = 0; p < num.size(); ++p) {
      if (px[p] >= options.saturation_level) continue;
      num[p] += res[p] * px[p];
      den[p] += px[p] * px[p];
    }
  }

  bool any_support = false;
  RealPlane k(w, h);
  auto out = k.values();
  for (std::size_t p = 0; p < num.size(); ++p) {
    if (den[p] > 0.0) {
      out[p] = num[p] / den[p];
      any_support = true;
    }
  }
  if (!any_support) {
    throw Error(ErrorCode::kDegenerate, "degenerate image set: every pixel is saturated");
  }
  return CameraFingerprint{std::move(k), static_cast<std::uint32_t>(images.size()), false, {}};
}

// Removes row means, then column means.
inline CameraFingerprint postprocess(CameraFingerprint fp) {
  if (fp.postprocessed) {
    throw Error(ErrorCode::kAlreadyPostprocessed, "fingerprint already postprocessed");
  }
  RealPlane& v = fp.values;
  for (std::size_t y = 0; y < v.height(); ++y) {
    auto row = v.row(y);
    double mean = 0.0;
    for (double x : row) mean += x;
    mean /= static_cast<double>(row.size());
    for (double& x : row) x -= mean;
  }
  std::vector<double> col_mean(v.width(), 0.0);
  for (std::size_t y = 0; y < v.height(); ++y) {
    const auto row = v.row(y);
    for (std::size_t x = 0; x < row.size(); ++x) col_mean[x] += row[x];
  }
  for (double& m : col_mean) m /= static_cast<double>(v.height());
  for (std::size_t y = 0; y < v.height(); ++y) {
    auto row = v.row(y);
    for (std::size_t x = 0; x < row.size(); ++x) row[x] -= col_mean[x];
  }
  fp.postprocessed = true;
  return fp;
}

inline CameraFingerprint fingerprint_from_frames(std::span<const LuminanceImage> frames,
                                                 std::size_t target_w, std::size_t target_h,
                                                 const ExtractOptions& options = {}) {
  if (frames.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no frames supplied");
  }
  std::vector<LuminanceImage> resized;
  resized.reserve(frames.size());
  for (const auto& f : frames) resized.push_back(resize_bilinear(f, target_w, target_h));
  return postprocess(accumulate(resized, options));
}

inline double rms(const RealPlane& p) {
  if (p.empty()) return 0.0;
  double s = 0.0;
  for (double v : p.values()) s += v * v;
  return std::sqrt(s / static_cast<double>(p.size()));
}

}  // namespace prnuauth
