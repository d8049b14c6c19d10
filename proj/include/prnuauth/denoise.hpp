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
#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/plane.hpp"
#include "prnuauth/resample.hpp"
#include "prnuauth/wavelet.hpp"

namespace prnuauth {

struct DenoiseParams {
  std::size_t levels = 4;
  // Variance of the noise to remove, on the 0-255 intensity scale.
  double noise_variance = 9.0;
  std::array<std::size_t, 4> windows = {3, 5, 7, 9};
};

namespace detail {

// Summed-area table of a plane extended circularly by `pad` on every side.
// Entry (x, y) of the (w + 2 pad + 1) x (h + 2 pad + 1) table holds the sum
// of the extended plane over [0, x) x [0, y).
class CircularIntegral {
 public:
  CircularIntegral(const RealPlane& src, std::size_t pad)
      : pad_(pad),
        stride_(src.width() + 2 * pad + 1),
        table_(stride_ * (src.height() + 2 * pad + 1), 0.0) {
    const std::size_t w = src.width(), h = src.height();
    const std::size_t ew = w + 2 * pad, eh = h + 2 * pad;
    auto wrap = [pad](std::size_t i, std::size_t n) {
      return (i + n * (pad / n + 1) - pad) % n;
    };
    std::vector<std::size_t> xs(ew);
    for (std::size_t x = 0; x < ew; ++x) xs[x] = wrap(x, w);
    for (std::size_t y = 0; y < eh; ++y) {
      const auto row = src.row(wrap(y, h));
      double run = 0.0;
      const double* above = &table_[y * stride_];
      double* cur = &table_[(y + 1) * stride_];
      for (std::size_t x = 0; x < ew; ++x) {
        run += row[xs[x]];
        cur[x + 1] = above[x + 1] + run;
      }
    }
  }

  // Mean over the window x window box centered on source pixel (x, y).
  double box_mean(std::size_t x, std::size_t y, std::size_t window) const {
    const std::size_t r = window / 2;
    const std::size_t x0 = x + pad_ - r, y0 = y + pad_ - r;
    const std::size_t x1 = x0 + window, y1 = y0 + window;
    const double sum = table_[y1 * stride_ + x1] - table_[y0 * stride_ + x1] -
                       table_[y1 * stride_ + x0] + table_[y0 * stride_ + x0];
    return sum / static_cast<double>(window * window);
  }

 private:
  std::size_t pad_;
  std::size_t stride_;
  std::vector<double> table_;
};

// Local Wiener attenuation of one detail subband, in place.
inline void attenuate_subband(RealPlane& band, const DenoiseParams& params) {
  RealPlane squares(band.width(), band.height());
  for (std::size_t i = 0; i < band.size(); ++i) {
    squares.values()[i] = band.values()[i] * band.values()[i];
  }
  const std::size_t widest = *std::max_element(params.windows.begin(), params.windows.end());
  const CircularIntegral integral(squares, widest / 2);
  std::vector<double> variance(band.size(), std::numeric_limits<double>::infinity());
  for (std::size_t y = 0; y < band.height(); ++y) {
    for (std::size_t x = 0; x < band.width(); ++x) {
      double& best = variance[y * band.width() + x];
      for (std::size_t window : params.windows) {
        const double v = std::max(0.0, integral.box_mean(x, y, window) - params.noise_variance);
        best = std::min(best, v);
      }
    }
  }
  for (std::size_t i = 0; i < band.size(); ++i) {
    band.values()[i] *= variance[i] / (variance[i] + params.noise_variance);
  }
}

// Denoises a plane whose dimensions are multiples of 2^levels. Unclamped.
inline RealPlane wavelet_denoise_aligned(const RealPlane& in, const DenoiseParams& params) {
  WaveletPyramid pyr = dwt2(in, params.levels);
  for (auto& level : pyr.details) {
    attenuate_subband(level.horizontal, params);
    attenuate_subband(level.vertical, params);
    attenuate_subband(level.diagonal, params);
  }
  return idwt2(pyr);
}

}  // namespace detail

// Wavelet-domain local MAP (Wiener) denoiser. Inputs whose sides are not
// multiples of 2^levels are processed on the largest centered window that
// is; pixels outside that window are returned unchanged.
inline LuminanceImage denoise(const LuminanceImage& img, const DenoiseParams& params = {}) {
  const std::size_t block = std::size_t{1} << params.levels;
  if (img.width() < block || img.height() < block) {
    throw Error(ErrorCode::kImageTooSmall,
                "image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                    " too small to denoise; need at least " + std::to_string(block) +
                    " per side");
  }
  const std::size_t cw = img.width() - img.width() % block;
  const std::size_t ch = img.height() - img.height() % block;
  const std::size_t x_off = (img.width() - cw) / 2;
  const std::size_t y_off = (img.height() - ch) / 2;

  const RealPlane inner =
      detail::wavelet_denoise_aligned(detail::crop_plane(img.pixels(), x_off, y_off, cw, ch),
                                      params);
  RealPlane out = img.pixels();
  for (std::size_t y = 0; y < ch; ++y) {
    const auto src = inner.row(y);
    auto dst = out.row(y + y_off).subspan(x_off, cw);
    for (std::size_t x = 0; x < cw; ++x) {
      dst[x] = std::clamp(src[x], 0.0, LuminanceImage::kMaxValue);
    }
  }
  return LuminanceImage(std::move(out));
}

}  // namespace prnuauth
