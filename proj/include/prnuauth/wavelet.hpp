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

// Orthonormal periodic 2-D discrete wavelet transform with the 8-tap
// Daubechies filter (four vanishing moments).

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/plane.hpp"

namespace prnuauth {

// Low-pass synthesis filter. The high-pass is its alternating-sign mirror.
inline constexpr std::array<double, 8> kDaubechies8Tap = {
    0.23037781330885523,  0.7148465705525415,   0.6308807679295904,
    -0.02798376941698385, -0.18703481171888114, 0.030841381835986965,
    0.032883011666982945, -0.010597401784997278,
};

struct WaveletDetail {
  RealPlane horizontal;  // low-pass rows, high-pass columns
  RealPlane vertical;    // high-pass rows, low-pass columns
  RealPlane diagonal;
};

// details[0] is the finest level.
struct WaveletPyramid {
  RealPlane approximation;
  std::vector<WaveletDetail> details;

  std::size_t levels() const noexcept { return details.size(); }
};

namespace detail {

inline constexpr std::array<double, 8> daubechies_highpass() {
  std::array<double, 8> g{};
  constexpr std::size_t L = kDaubechies8Tap.size();
  for (std::size_t n = 0; n < L; ++n) {
    const double h = kDaubechies8Tap[L - 1 - n];
    g[n] = (n % 2 == 0) ? h : -h;
  }
  return g;
}

inline constexpr std::array<double, 8> kDaubechiesHighpass = daubechies_highpass();

// n is even; lo and hi receive n/2 samples each.
inline void analyze_1d(std::span<const double> x, std::span<double> lo, std::span<double> hi) {
  const std::size_t n = x.size();
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    std::size_t idx = (2 * k) % n;
    for (std::size_t t = 0; t < kDaubechies8Tap.size(); ++t) {
      a += kDaubechies8Tap[t] * x[idx];
      d += kDaubechiesHighpass[t] * x[idx];
      if (++idx == n) idx = 0;
    }
    lo[k] = a;
    hi[k] = d;
  }
}

inline void synthesize_1d(std::span<const double> lo, std::span<const double> hi,
                          std::span<double> x) {
  const std::size_t n = x.size();
  const std::size_t half = n / 2;
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    std::size_t idx = (2 * k) % n;
    for (std::size_t t = 0; t < kDaubechies8Tap.size(); ++t) {
      x[idx] += kDaubechies8Tap[t] * lo[k] + kDaubechiesHighpass[t] * hi[k];
      if (++idx == n) idx = 0;
    }
  }
}

struct SingleLevel {
  RealPlane ll, lh, hl, hh;
};

inline SingleLevel analyze_2d(const RealPlane& in) {
  const std::size_t w = in.width(), h = in.height();
  const std::size_t hw = w / 2, hh = h / 2;
  RealPlane lo_rows(hw, h), hi_rows(hw, h);
  for (std::size_t y = 0; y < h; ++y) {
    analyze_1d(in.row(y), lo_rows.row(y), hi_rows.row(y));
  }
  SingleLevel out{RealPlane(hw, hh), RealPlane(hw, hh), RealPlane(hw, hh), RealPlane(hw, hh)};
  std::vector<double> col(h), lo(hh), hi(hh);
  auto columns = [&](const RealPlane& src, RealPlane& dst_lo, RealPlane& dst_hi) {
    for (std::size_t x = 0; x < hw; ++x) {
      for (std::size_t y = 0; y < h; ++y) col[y] = src(x, y);
      analyze_1d(col, lo, hi);
      for (std::size_t y = 0; y < hh; ++y) {
        dst_lo(x, y) = lo[y];
        dst_hi(x, y) = hi[y];
      }
    }
  };
  columns(lo_rows, out.ll, out.lh);
  columns(hi_rows, out.hl, out.hh);
  return out;
}

inline RealPlane synthesize_2d(const RealPlane& ll, const RealPlane& lh, const RealPlane& hl,
                               const RealPlane& hh) {
  const std::size_t hw = ll.width(), hhgt = ll.height();
  const std::size_t w = hw * 2, h = hhgt * 2;
  RealPlane lo_rows(hw, h), hi_rows(hw, h);
  std::vector<double> col(h), lo(hhgt), hi(hhgt);
  auto columns = [&](const RealPlane& src_lo, const RealPlane& src_hi, RealPlane& dst) {
    for (std::size_t x = 0; x < hw; ++x) {
      for (std::size_t y = 0; y < hhgt; ++y) {
        lo[y] = src_lo(x, y);
        hi[y] = src_hi(x, y);
      }
      synthesize_1d(lo, hi, col);
      for (std::size_t y = 0; y < h; ++y) dst(x, y) = col[y];
    }
  };
  columns(ll, lh, lo_rows);
  columns(hl, hh, hi_rows);
  RealPlane out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    synthesize_1d(lo_rows.row(y), hi_rows.row(y), out.row(y));
  }
  return out;
}

}  // namespace detail

inline bool dwt2_supports(std::size_t width, std::size_t height, std::size_t levels) {
  if (levels == 0 || levels >= 31) return false;
  const std::size_t block = std::size_t{1} << levels;
  return width % block == 0 && height % block == 0 && width >= block && height >= block;
}

// Both dimensions must be positive multiples of 2^levels.
inline WaveletPyramid dwt2(const RealPlane& x, std::size_t levels) {
  if (levels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "wavelet depth must be at least 1");
  }
  if (!dwt2_supports(x.width(), x.height(), levels)) {
    throw Error(ErrorCode::kImageTooSmall,
                "image " + std::to_string(x.width()) + "x" + std::to_string(x.height()) +
                    " not decomposable to " + std::to_string(levels) + " levels");
  }
  WaveletPyramid pyr;
  RealPlane current = x;
  for (std::size_t l = 0; l < levels; ++l) {
    auto s = detail::analyze_2d(current);
    pyr.details.push_back({std::move(s.lh), std::move(s.hl), std::move(s.hh)});
    current = std::move(s.ll);
  }
  pyr.approximation = std::move(current);
  return pyr;
}

inline WaveletPyramid dwt2(const LuminanceImage& img, std::size_t levels) {
  return dwt2(img.pixels(), levels);
}

inline RealPlane idwt2(const WaveletPyramid& pyr) {
  RealPlane current = pyr.approximation;
  for (std::size_t l = pyr.levels(); l-- > 0;) {
    const auto& d = pyr.details[l];
    if (!d.horizontal.same_shape(current) || !d.vertical.same_shape(current) ||
        !d.diagonal.same_shape(current)) {
      throw Error(ErrorCode::kDimensionMismatch, "inconsistent wavelet pyramid");
    }
    current = detail::synthesize_2d(current, d.horizontal, d.vertical, d.diagonal);
  }
  return current;
}

}  // namespace prnuauth
