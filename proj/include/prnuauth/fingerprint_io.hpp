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

// Fingerprint file layout (all integers little-endian):
//
//   offset  size  field
//        0     8  magic "PRNUFP1\0"
//        8     4  u32 width
//       12     4  u32 height
//       16     4  u32 image_count
//       20     1  u8 postprocessed (0 or 1)
//       21     3  reserved, zero
//       24  4*w*h IEEE-754 binary32 values, row-major

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/fingerprint.hpp"
#include "prnuauth/pnm.hpp"

namespace prnuauth {

inline constexpr std::array<std::uint8_t, 8> kFingerprintMagic = {'P', 'R', 'N', 'U',
                                                                  'F', 'P', '1', '\0'};
inline constexpr std::size_t kFingerprintHeaderSize = 24;

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | in[off + i];
  return v;
}

}  // namespace detail

// Values are narrowed to binary32 on the way out.
inline std::vector<std::uint8_t> encode_fingerprint(const CameraFingerprint& fp) {
  std::vector<std::uint8_t> out(kFingerprintMagic.begin(), kFingerprintMagic.end());
  out.reserve(kFingerprintHeaderSize + 4 * fp.values.size());
  detail::put_u32(out, static_cast<std::uint32_t>(fp.width()));
  detail::put_u32(out, static_cast<std::uint32_t>(fp.height()));
  detail::put_u32(out, fp.image_count);
  out.push_back(fp.postprocessed ? 1 : 0);
  out.insert(out.end(), 3, 0);
  for (double v : fp.values.values()) {
    detail::put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

inline CameraFingerprint decode_fingerprint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFingerprintMagic.size() ||
      !std::equal(kFingerprintMagic.begin(), kFingerprintMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kBadMagic, "bad magic: not a fingerprint file");
  }
  if (bytes.size() < kFingerprintHeaderSize) {
    throw Error(ErrorCode::kSizeMismatch, "size mismatch: truncated fingerprint header");
  }
  const std::uint32_t w = detail::get_u32(bytes, 8);
  const std::uint32_t h = detail::get_u32(bytes, 12);
  const std::uint32_t count = detail::get_u32(bytes, 16);
  const std::uint8_t flag = bytes[20];
  if (flag > 1 || bytes[21] != 0 || bytes[22] != 0 || bytes[23] != 0) {
    throw Error(ErrorCode::kMalformedHeader, "malformed fingerprint header flags");
  }
  if (w == 0 || h == 0) {
    throw Error(ErrorCode::kMalformedHeader, "fingerprint has a zero dimension");
  }
  const std::uint64_t expected =
      kFingerprintHeaderSize + 4ull * static_cast<std::uint64_t>(w) * h;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::kSizeMismatch, "size mismatch: expected " +
                                              std::to_string(expected) + " bytes, got " +
                                              std::to_string(bytes.size()));
  }
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float f = std::bit_cast<float>(detail::get_u32(bytes, kFingerprintHeaderSize + 4 * i));
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::kMalformedHeader, "non-finite fingerprint value");
    }
    values[i] = f;
  }
  return CameraFingerprint{RealPlane(w, h, std::move(values)), count, flag == 1, {}};
}

// The in-memory value a fingerprint has after a save/load cycle.
inline CameraFingerprint quantize_to_storage(CameraFingerprint fp) {
  for (double& v : fp.values.values()) v = static_cast<float>(v);
  return fp;
}

inline void save_fingerprint(const std::filesystem::path& path, const CameraFingerprint& fp) {
  write_file_bytes(path, encode_fingerprint(fp));
}

inline CameraFingerprint load_fingerprint(const std::filesystem::path& path) {
  return decode_fingerprint(read_file_bytes(path));
}

}  // namespace prnuauth
