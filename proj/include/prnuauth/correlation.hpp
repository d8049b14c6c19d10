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

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>

#include "prnuauth/error.hpp"
#include "prnuauth/fingerprint.hpp"
#include "prnuauth/plane.hpp"

namespace prnuauth {

namespace detail {

// FFTW's planner is not reentrant; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};

using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

// Half-spectrum of a real plane.
class RealSpectrum2d {
 public:
  explicit RealSpectrum2d(const RealPlane& p)
      : width_(p.width()),
        height_(p.height()),
        bins_(height_ * (width_ / 2 + 1)),
        spectrum_(fftw_buffer<fftw_complex>(bins_)) {
    auto in = fftw_buffer<double>(p.size());
    std::copy(p.values().begin(), p.values().end(), in.get());
    FftwPlan plan;
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      plan.reset(fftw_plan_dft_r2c_2d(static_cast<int>(height_), static_cast<int>(width_),
                                      in.get(), spectrum_.get(), FFTW_ESTIMATE));
    }
    fftw_execute(plan.get());
  }

  std::size_t bins() const noexcept { return bins_; }
  fftw_complex* data() noexcept { return spectrum_.get(); }
  const fftw_complex* data() const noexcept { return spectrum_.get(); }

 private:
  std::size_t width_, height_, bins_;
  std::unique_ptr<fftw_complex[], FftwFree> spectrum_;
};

inline void require_same_shape(const CameraFingerprint& a, const CameraFingerprint& b) {
  if (!a.values.same_shape(b.values)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimension mismatch: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

}  // namespace detail

// Zero mean, unit L2 norm.
inline CameraFingerprint normalize_fp(CameraFingerprint fp) {
  auto v = fp.values.values();
  if (v.empty()) {
    throw Error(ErrorCode::kDegenerateFingerprint, "degenerate fingerprint: empty");
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double energy = 0.0;
  for (double& x : v) {
    x -= mean;
    energy += x * x;
  }
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::kDegenerateFingerprint,
                "degenerate fingerprint: no variation after mean removal");
  }
  const double inv = 1.0 / std::sqrt(energy);
  for (double& x : v) x *= inv;
  return fp;
}

// Entry (dx, dy) is sum over (x, y) of na(x, y) * nb(x + dx, y + dy), indices
// wrapping, where na and nb are the normalized inputs.
inline RealPlane correlation_plane(const CameraFingerprint& a, const CameraFingerprint& b) {
  detail::require_same_shape(a, b);
  const CameraFingerprint na = normalize_fp(a);
  const CameraFingerprint nb = normalize_fp(b);
  const std::size_t w = a.width(), h = a.height();

  detail::RealSpectrum2d fa(na.values);
  detail::RealSpectrum2d fb(nb.values);
  auto product = detail::fftw_buffer<fftw_complex>(fa.bins());
  for (std::size_t i = 0; i < fa.bins(); ++i) {
    const std::complex<double> ca(fa.data()[i][0], -fa.data()[i][1]);
    const std::complex<double> cb(fb.data()[i][0], fb.data()[i][1]);
    const std::complex<double> p = ca * cb;
    product[i][0] = p.real();
    product[i][1] = p.imag();
  }
  auto out = detail::fftw_buffer<double>(w * h);
  detail::FftwPlan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan.reset(fftw_plan_dft_c2r_2d(static_cast<int>(h), static_cast<int>(w), product.get(),
                                    out.get(), FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());

  RealPlane plane(w, h);
  const double scale = 1.0 / static_cast<double>(w * h);
  for (std::size_t i = 0; i < plane.size(); ++i) plane.values()[i] = out[i] * scale;
  return plane;
}

}  // namespace prnuauth
