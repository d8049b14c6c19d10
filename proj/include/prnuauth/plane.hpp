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
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prnuauth/error.hpp"

namespace prnuauth {

// Row-major 2-D array with top-left origin.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;

  Plane(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  Plane(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
      throw Error(ErrorCode::kSizeMismatch,
                  "plane data length " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(width_) + "x" +
                      std::to_string(height_));
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  const T& operator()(std::size_t x, std::size_t y) const {
    return data_[y * width_ + x];
  }

  std::span<T> row(std::size_t y) {
    return std::span<T>(data_).subspan(y * width_, width_);
  }
  std::span<const T> row(std::size_t y) const {
    return std::span<const T>(data_).subspan(y * width_, width_);
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

using RealPlane = Plane<double>;

template <typename T>
bool all_finite(const Plane<T>& p) {
  return std::all_of(p.values().begin(), p.values().end(),
                     [](T v) { return std::isfinite(v); });
}

// 8-bit-range intensity image. Values are real to keep interpolation exact.
class LuminanceImage {
 public:
  static constexpr double kMaxValue = 255.0;

  LuminanceImage() = default;

  LuminanceImage(std::size_t width, std::size_t height, double fill = 0.0)
      : LuminanceImage(RealPlane(width, height, fill)) {}

  LuminanceImage(std::size_t width, std::size_t height, std::vector<double> pixels)
      : LuminanceImage(RealPlane(width, height, std::move(pixels))) {}

  explicit LuminanceImage(RealPlane pixels) : pixels_(std::move(pixels)) {
    if (pixels_.width() == 0 || pixels_.height() == 0) {
      throw Error(ErrorCode::kInvalidArgument, "image dimensions must be positive");
    }
    for (double v : pixels_.values()) {
      if (!std::isfinite(v) || v < 0.0 || v > kMaxValue) {
        throw Error(ErrorCode::kInvalidArgument,
                    "pixel value out of range [0, 255]: " + std::to_string(v));
      }
    }
  }

  std::size_t width() const noexcept { return pixels_.width(); }
  std::size_t height() const noexcept { return pixels_.height(); }
  double operator()(std::size_t x, std::size_t y) const { return pixels_(x, y); }
  const RealPlane& pixels() const noexcept { return pixels_; }

  friend bool operator==(const LuminanceImage&, const LuminanceImage&) = default;

 private:
  RealPlane pixels_;
};

}  // namespace prnuauth
