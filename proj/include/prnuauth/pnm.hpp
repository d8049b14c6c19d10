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

// Binary Netpbm codecs (P5 grayscale, P6 color), 8-bit only.

#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "prnuauth/error.hpp"
#include "prnuauth/plane.hpp"

namespace prnuauth {

namespace detail {

struct PnmHeader {
  char kind = 0;  // '5' or '6'
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  std::size_t payload_offset = 0;
};

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  PnmHeader read() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') {
      throw Error(ErrorCode::kMalformedHeader, "malformed header: missing magic");
    }
    PnmHeader h;
    h.kind = static_cast<char>(bytes_[1]);
    pos_ = 2;
    h.width = next_number("width");
    h.height = next_number("height");
    const std::size_t maxval = next_number("maxval");
    // Exactly one whitespace byte separates the header from the raster.
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedHeader, "malformed header: missing raster separator");
    }
    ++pos_;
    if (h.width == 0 || h.height == 0) {
      throw Error(ErrorCode::kMalformedHeader, "malformed header: zero dimension");
    }
    if (maxval == 0 || maxval > 65535) {
      throw Error(ErrorCode::kMalformedHeader, "malformed header: bad maxval");
    }
    if (maxval > 255) {
      throw Error(ErrorCode::kUnsupportedDepth, "unsupported depth: maxval " +
                                                    std::to_string(maxval));
    }
    h.maxval = static_cast<unsigned>(maxval);
    h.payload_offset = pos_;
    return h;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t next_number(const char* what) {
    const std::size_t before = pos_;
    skip_space_and_comments();
    if (pos_ == before) {
      throw Error(ErrorCode::kMalformedHeader,
                  std::string("malformed header: expected whitespace before ") + what);
    }
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1u << 30)) {
        throw Error(ErrorCode::kMalformedHeader,
                    std::string("malformed header: ") + what + " too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw Error(ErrorCode::kMalformedHeader,
                  std::string("malformed header: expected ") + what);
    }
    return value;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline PnmHeader parse_pnm(std::span<const std::uint8_t> bytes, char expected_kind,
                           std::size_t channels) {
  PnmHeader h = PnmHeaderReader(bytes).read();
  if (h.kind != expected_kind) {
    throw Error(ErrorCode::kMalformedHeader, std::string("malformed header: expected P") +
                                                 expected_kind);
  }
  const std::size_t need = h.width * h.height * channels;
  if (bytes.size() - h.payload_offset < need) {
    throw Error(ErrorCode::kTruncated, "truncated payload: expected " +
                                           std::to_string(need) + " bytes, got " +
                                           std::to_string(bytes.size() - h.payload_offset));
  }
  return h;
}

inline double rescale(std::uint8_t v, unsigned maxval) {
  return maxval == 255 ? static_cast<double>(v)
                       : std::min(255.0, static_cast<double>(v) * 255.0 / maxval);
}

}  // namespace detail

inline LuminanceImage load_pgm(std::span<const std::uint8_t> bytes) {
  const auto h = detail::parse_pnm(bytes, '5', 1);
  std::vector<double> px(h.width * h.height);
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = detail::rescale(bytes[h.payload_offset + i], h.maxval);
  }
  return LuminanceImage(h.width, h.height, std::move(px));
}

// BT.601 luma.
inline LuminanceImage load_ppm_luminance(std::span<const std::uint8_t> bytes) {
  const auto h = detail::parse_pnm(bytes, '6', 3);
  std::vector<double> px(h.width * h.height);
  const std::uint8_t* p = bytes.data() + h.payload_offset;
  for (std::size_t i = 0; i < px.size(); ++i, p += 3) {
    const double r = detail::rescale(p[0], h.maxval);
    const double g = detail::rescale(p[1], h.maxval);
    const double b = detail::rescale(p[2], h.maxval);
    px[i] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b, 0.0, 255.0);
  }
  return LuminanceImage(h.width, h.height, std::move(px));
}

// Dispatches on the magic number.
inline LuminanceImage decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return load_ppm_luminance(bytes);
  }
  return load_pgm(bytes);
}

// Rounds to the nearest 8-bit level.
inline std::vector<std::uint8_t> encode_pgm(const LuminanceImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.pixels().size());
  for (double v : img.pixels().values()) {
    out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))));
  }
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path,
                             std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

inline LuminanceImage load_image(const std::filesystem::path& path) {
  return decode_pnm(read_file_bytes(path));
}

}  // namespace prnuauth
