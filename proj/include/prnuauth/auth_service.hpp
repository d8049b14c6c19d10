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

// Camera authentication as a second factor next to face recognition.
//
// Registration computes the customer's sensor fingerprint from an image set
// and stores it. Verification takes an externally decided face verdict plus
// fresh probe frames; the camera is checked only after the face passes, and
// the customer is authenticated only when both factors pass.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/fingerprint.hpp"
#include "prnuauth/fingerprint_io.hpp"
#include "prnuauth/pce.hpp"
#include "prnuauth/store.hpp"

namespace prnuauth {

inline constexpr std::size_t kMinEnrollmentImages = 15;
inline constexpr std::size_t kRecommendedEnrollmentImages = 20;
// A fingerprint whose RMS is at or below this carries no usable pattern.
inline constexpr double kDegenerateFingerprintRms = 1e-9;

struct AuthDecision {
  std::string customer_id;
  bool face_ok = false;
  bool camera_ok = false;
  std::optional<double> pce;  // absent when the camera check was skipped
  bool authenticated = false;
  std::string decided_at;
};

struct AuthConfig {
  double threshold = kDefaultPceThreshold;
  std::size_t exclusion_half_width = kDefaultExclusionHalfWidth;
  std::size_t min_enrollment_images = kMinEnrollmentImages;
  ExtractOptions extract;
  std::function<std::chrono::system_clock::time_point()> clock = [] {
    return std::chrono::system_clock::now();
  };
};

inline std::string format_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class AuthService {
 public:
  explicit AuthService(FingerprintStore& store, AuthConfig config = {})
      : store_(store), config_(std::move(config)) {}

  const AuthConfig& config() const noexcept { return config_; }

  EnrollmentRecord enroll(const std::string& customer_id,
                          std::span<const LuminanceImage> images,
                          const std::string& camera_label) {
    validate_customer_id(customer_id);
    if (store_.contains(customer_id)) {
      throw Error(ErrorCode::kDuplicateEnrollment, "already enrolled: " + customer_id);
    }
    auto rec = build_record(customer_id, images, camera_label);
    store_.put(rec, FingerprintStore::Presence::kMustBeAbsent);
    return rec;
  }

  EnrollmentRecord reenroll(const std::string& customer_id,
                            std::span<const LuminanceImage> images,
                            const std::string& camera_label) {
    validate_customer_id(customer_id);
    if (!store_.contains(customer_id)) {
      throw Error(ErrorCode::kUnknownCustomer, "unknown customer: " + customer_id);
    }
    auto rec = build_record(customer_id, images, camera_label);
    store_.put(rec, FingerprintStore::Presence::kMustExist);
    return rec;
  }

  AuthDecision verify(const std::string& customer_id, bool face_ok,
                      std::span<const LuminanceImage> probe_frames) {
    const EnrollmentRecord enrolled = store_.load(customer_id);
    if (probe_frames.empty()) {
      throw Error(ErrorCode::kEmptyInput, "no probe frames supplied");
    }
    AuthDecision d;
    d.customer_id = customer_id;
    d.face_ok = face_ok;
    if (face_ok) {
      fingerprint_computations_.fetch_add(1, std::memory_order_relaxed);
      try {
        const CameraFingerprint probe =
            fingerprint_from_frames(probe_frames, enrolled.fingerprint.width(),
                                    enrolled.fingerprint.height(), config_.extract);
        const PceReport report =
            pce(enrolled.fingerprint, probe, config_.exclusion_half_width);
        d.pce = report.pce;
        d.camera_ok = decide(report, config_.threshold).matched;
      } catch (const Error& e) {
        // Probes without any sensor pattern (flat or fully saturated) are a
        // camera mismatch, not an operational failure.
        if (e.code() != ErrorCode::kDegenerate &&
            e.code() != ErrorCode::kDegenerateFingerprint) {
          throw;
        }
        d.pce = 0.0;
        d.camera_ok = false;
      }
    }
    d.authenticated = d.face_ok && d.camera_ok;
    d.decided_at = format_utc(config_.clock());
    return d;
  }

  void revoke(const std::string& customer_id) { store_.remove(customer_id); }

  // Number of probe fingerprints computed by verify().
  std::uint64_t fingerprint_computations() const noexcept {
    return fingerprint_computations_.load(std::memory_order_relaxed);
  }

 private:
  EnrollmentRecord build_record(const std::string& customer_id,
                                std::span<const LuminanceImage> images,
                                const std::string& camera_label) {
    if (images.size() < config_.min_enrollment_images) {
      throw Error(ErrorCode::kInsufficientImages,
                  "insufficient enrollment set: " + std::to_string(images.size()) +
                      " images, need at least " +
                      std::to_string(config_.min_enrollment_images));
    }
    detail::require_uniform(images);
    CameraFingerprint fp;
    try {
      fp = fingerprint_from_frames(images, images.front().width(), images.front().height(),
                                   config_.extract);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDegenerate) {
        throw Error(ErrorCode::kDegenerateFingerprint, e.what());
      }
      throw;
    }
    // Keep exactly what the store will hand back on reload.
    fp = quantize_to_storage(std::move(fp));
    if (rms(fp.values) <= kDegenerateFingerprintRms) {
      throw Error(ErrorCode::kDegenerateFingerprint,
                  "degenerate fingerprint: enrollment images carry no sensor pattern");
    }
    fp.label = camera_label;

    EnrollmentRecord rec;
    rec.customer_id = customer_id;
    rec.fingerprint = std::move(fp);
    rec.enrolled_at = format_utc(config_.clock());
    rec.camera_label = camera_label;
    rec.image_count = static_cast<std::uint32_t>(images.size());
    return rec;
  }

  FingerprintStore& store_;
  AuthConfig config_;
  std::atomic<std::uint64_t> fingerprint_computations_{0};
};

}  // namespace prnuauth
