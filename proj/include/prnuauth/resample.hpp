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
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/plane.hpp"

namespace prnuauth {

namespace detail {

// Align-corners source coordinate; a single output sample maps to the origin.
inline double align_corners_coord(std::size_t i, std::size_t in, std::size_t out) {
  if (out <= 1) return 0.0;
  return static_cast<double>(i) * static_cast<double>(in - 1) /
         static_cast<double>(out - 1);
}

template <typename T>
Plane<T> resize_plane_bilinear(const Plane<T>& src, std::size_t out_w, std::size_t out_h) {
  if (out_w == 0 || out_h == 0) {
    throw Error(ErrorCode::kInvalidArgument, "resize target dimension must be positive");
  }
  if (out_w == src.width() && out_h == src.height()) return src;

  std::vector<std::size_t> x0(out_w), x1(out_w);
  std::vector<double> fx(out_w);
  for (std::size_t i = 0; i < out_w; ++i) {
    const double sx = align_corners_coord(i, src.width(), out_w);
    x0[i] = std::min(static_cast<std::size_t>(sx), src.width() - 1);
    x1[i] = std::min(x0[i] + 1, src.width() - 1);
    fx[i] = sx - static_cast<double>(x0[i]);
  }

  Plane<T> out(out_w, out_h);
  for (std::size_t j = 0; j < out_h; ++j) {
    const double sy = align_corners_coord(j, src.height(), out_h);
    const std::size_t y0 = std::min(static_cast<std::size_t>(sy), src.height() - 1);
    const std::size_t y1 = std::min(y0 + 1, src.height() - 1);
    const double fy = sy - static_cast<double>(y0);
    const auto r0 = src.row(y0);
    const auto r1 = src.row(y1);
    auto dst = out.row(j);
    for (std::size_t i = 0; i < out_w; ++i) {
      const double top = r0[x0[i]] + fx[i] * (r0[x1[i]] - r0[x0[i]]);
      const double bot = r1[x0[i]] + fx[i] * (r1[x1[i]] - r1[x0[i]]);
      dst[i] = static_cast<T>(top + fy * (bot - top));
    }
  }
  return out;
}

template <typename T>
Plane<T> crop_plane(const Plane<T>& src, std::size_t x_off, std::size_t y_off,
                    std::size_t out_w, std::size_t out_h) {
  Plane<T> out(out_w, out_h);
  for (std::size_t j = 0; j < out_h; ++j) {
    const auto s = src.row(y_off + j).subspan(x_off, out_w);
    std::copy(s.begin(), s.end(), out.row(j).begin());
  }
  return out;
}

}  // namespace detail

// Bilinear resampling, align-corners convention with edge clamp.
inline LuminanceImage resize_bilinear(const LuminanceImage& img, std::size_t out_w,
                                      std::size_t out_h) {
  auto plane = detail::resize_plane_bilinear(img.pixels(), out_w, out_h);
  // Convex combinations can drift one ulp past the source range.
  for (double& v : plane.values()) v = std::clamp(v, 0.0, LuminanceImage::kMaxValue);
  return LuminanceImage(std::move(plane));
}

template <typename T>
Plane<T> center_crop(const Plane<T>& src, std::size_t out_w, std::size_t out_h) {
  if (out_w == 0 || out_h == 0) {
    throw Error(ErrorCode::kInvalidArgument, "crop target dimension must be positive");
  }
  if (out_w > src.width() || out_h > src.height()) {
    throw Error(ErrorCode::kInvalidArgument,
                "crop target " + std::to_string(out_w) + "x" + std::to_string(out_h) +
                    " larger than source " + std::to_string(src.width()) + "x" +
                    std::to_string(src.height()));
  }
  return detail::crop_plane(src, (src.width() - out_w) / 2, (src.height() - out_h) / 2,
                            out_w, out_h);
}

inline LuminanceImage center_crop(const LuminanceImage& img, std::size_t out_w,
                                  std::size_t out_h) {
  return LuminanceImage(center_crop(img.pixels(), out_w, out_h));
}

}  // namespace prnuauth
