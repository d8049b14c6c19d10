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

// Directory-backed enrollment store.
//
//   <root>/index.json       customer_id -> {fingerprint_file, enrolled_at,
//                                           camera_label, image_count}
//   <root>/fp/<hash>.prnufp fingerprint file per customer
//   <root>/.lock            writer lock (flock)
//
// Every file is replaced by write-to-temp then rename, so readers take no
// lock and always see either the old or the new version of a file.
// Mutations serialize on an exclusive flock of .lock, which also excludes
// writers in other processes.

#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "prnuauth/error.hpp"
#include "prnuauth/fingerprint.hpp"
#include "prnuauth/fingerprint_io.hpp"
#include "prnuauth/pnm.hpp"

namespace prnuauth {

inline constexpr std::size_t kMaxCustomerIdBytes = 128;

struct EnrollmentRecord {
  std::string customer_id;
  CameraFingerprint fingerprint;
  std::string enrolled_at;  // ISO-8601 UTC
  std::string camera_label;
  std::uint32_t image_count = 0;
};

struct IndexEntry {
  std::string fingerprint_file;  // relative to the store root
  std::string enrolled_at;
  std::string camera_label;
  std::uint32_t image_count = 0;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(IndexEntry, fingerprint_file, enrolled_at, camera_label,
                                   image_count)

namespace detail {

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

// FNV-1a, 64-bit.
inline std::string customer_hash(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

[[noreturn]] inline void throw_errno(const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

class UniqueFd {
 public:
  explicit UniqueFd(int fd) : fd_(fd) {}
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const noexcept { return fd_; }

 private:
  int fd_;
};

// Durable replace: temp file in the same directory, fsync, rename, fsync dir.
inline void atomic_write(const std::filesystem::path& target,
                         std::span<const std::uint8_t> bytes) {
  static std::atomic<std::uint64_t> counter{0};
  const auto tmp = target.parent_path() /
                   ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()) +
                    "." + std::to_string(counter.fetch_add(1)));
  {
    UniqueFd fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (fd.get() < 0) throw_errno("cannot create " + tmp.string());
    std::size_t done = 0;
    while (done < bytes.size()) {
      const ssize_t n = ::write(fd.get(), bytes.data() + done, bytes.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        const int saved = errno;
        ::unlink(tmp.c_str());
        errno = saved;
        throw_errno("write failed for " + tmp.string());
      }
      done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd.get()) != 0) {
      ::unlink(tmp.c_str());
      throw_errno("fsync failed for " + tmp.string());
    }
  }
  if (::rename(tmp.c_str(), target.c_str()) != 0) {
    const int saved = errno;
    ::unlink(tmp.c_str());
    errno = saved;
    throw_errno("rename failed for " + target.string());
  }
  const auto dir = target.parent_path().empty() ? std::filesystem::path(".") : target.parent_path();
  UniqueFd dfd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC));
  if (dfd.get() >= 0) ::fsync(dfd.get());
}

class ExclusiveFileLock {
 public:
  explicit ExclusiveFileLock(const std::filesystem::path& path)
      : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644)) {
    if (fd_.get() < 0) throw_errno("cannot open lock " + path.string());
    while (::flock(fd_.get(), LOCK_EX) != 0) {
      if (errno != EINTR) throw_errno("cannot lock " + path.string());
    }
  }
  ~ExclusiveFileLock() { ::flock(fd_.get(), LOCK_UN); }

 private:
  UniqueFd fd_;
};

}  // namespace detail

inline void validate_customer_id(std::string_view id) {
  if (id.empty() || id.size() > kMaxCustomerIdBytes) {
    throw Error(ErrorCode::kInvalidArgument, "customer id must be 1 to 128 bytes");
  }
  if (!detail::valid_utf8(id)) {
    throw Error(ErrorCode::kInvalidArgument, "customer id is not valid UTF-8");
  }
}

class FingerprintStore {
 public:
  enum class Presence { kMustBeAbsent, kMustExist };

  explicit FingerprintStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / "fp", ec);
    if (ec) {
      throw Error(ErrorCode::kIo, "cannot create store at " + root_.string() + ": " +
                                      ec.message());
    }
  }

  const std::filesystem::path& root() const noexcept { return root_; }

  std::map<std::string, IndexEntry> index() const {
    const auto path = root_ / "index.json";
    if (!std::filesystem::exists(path)) return {};
    const auto bytes = read_file_bytes(path);
    try {
      return nlohmann::json::parse(bytes.begin(), bytes.end())
          .get<std::map<std::string, IndexEntry>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kIo, "corrupt store index: " + std::string(e.what()));
    }
  }

  std::optional<IndexEntry> find(const std::string& customer_id) const {
    auto idx = index();
    const auto it = idx.find(customer_id);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& customer_id) const { return find(customer_id).has_value(); }

  EnrollmentRecord load(const std::string& customer_id) const {
    const auto entry = find(customer_id);
    if (!entry) {
      throw Error(ErrorCode::kUnknownCustomer, "unknown customer: " + customer_id);
    }
    EnrollmentRecord rec;
    rec.customer_id = customer_id;
    rec.fingerprint = load_fingerprint(root_ / entry->fingerprint_file);
    rec.fingerprint.label = entry->camera_label;
    rec.enrolled_at = entry->enrolled_at;
    rec.camera_label = entry->camera_label;
    rec.image_count = entry->image_count;
    return rec;
  }

  // Writes the fingerprint, then commits the index.
  void put(const EnrollmentRecord& rec, Presence presence) {
    validate_customer_id(rec.customer_id);
    detail::ExclusiveFileLock lock(root_ / ".lock");
    auto idx = index();
    const bool exists = idx.contains(rec.customer_id);
    if (presence == Presence::kMustBeAbsent && exists) {
      throw Error(ErrorCode::kDuplicateEnrollment, "already enrolled: " + rec.customer_id);
    }
    if (presence == Presence::kMustExist && !exists) {
      throw Error(ErrorCode::kUnknownCustomer, "unknown customer: " + rec.customer_id);
    }
    const std::string rel = "fp/" + detail::customer_hash(rec.customer_id) + ".prnufp";
    detail::atomic_write(root_ / rel, encode_fingerprint(rec.fingerprint));
    idx[rec.customer_id] = IndexEntry{rel, rec.enrolled_at, rec.camera_label, rec.image_count};
    commit_index(idx);
  }

  void remove(const std::string& customer_id) {
    detail::ExclusiveFileLock lock(root_ / ".lock");
    auto idx = index();
    const auto it = idx.find(customer_id);
    if (it == idx.end()) {
      throw Error(ErrorCode::kUnknownCustomer, "unknown customer: " + customer_id);
    }
    const auto file = root_ / it->second.fingerprint_file;
    idx.erase(it);
    commit_index(idx);
    std::error_code ec;
    std::filesystem::remove(file, ec);
  }

 private:
  void commit_index(const std::map<std::string, IndexEntry>& idx) {
    const std::string text = nlohmann::json(idx).dump(2) + "\n";
    detail::atomic_write(root_ / "index.json",
                         std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                   text.size()));
  }

  std::filesystem::path root_;
};

}  // namespace prnuauth
