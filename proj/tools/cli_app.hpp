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

// Command-line front end. Exit status is part of the contract:
//   0  success, fingerprints match, customer authenticated
//   1  clean negative decision (no match / not authenticated)
//   2  operational error (bad input, unreadable file, usage)

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prnuauth/prnuauth.hpp"

namespace prnuauth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;

struct CliConfig {
  std::string store_root;
  double threshold = kDefaultPceThreshold;
  std::size_t exclusion_half_width = kDefaultExclusionHalfWidth;
  int verbosity = 0;
};

namespace detail {

inline std::vector<LuminanceImage> load_all(const std::vector<std::string>& paths) {
  std::vector<LuminanceImage> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(load_image(p));
  return images;
}

inline std::string frame_name(std::size_t i) {
  std::ostringstream os;
  os << "frame_" << std::setw(4) << std::setfill('0') << i << ".pgm";
  return os.str();
}

inline AuthConfig auth_config(const CliConfig& cfg) {
  AuthConfig ac;
  ac.threshold = cfg.threshold;
  ac.exclusion_half_width = cfg.exclusion_half_width;
  return ac;
}

inline void require_store(const CliConfig& cfg) {
  if (cfg.store_root.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no store given; pass --store or set PRNU_STORE");
  }
}

}  // namespace detail

// `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Camera sensor fingerprint extraction, matching and authentication", "prnuauth"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  app.add_option("--store", cfg.store_root, "Enrollment store directory")->envname("PRNU_STORE");
  app.add_option("--threshold", cfg.threshold, "PCE decision threshold (match iff pce > t)")
      ->check(CLI::PositiveNumber);
  app.add_option("--exclusion", cfg.exclusion_half_width,
                 "Half-width of the PCE exclusion window around the peak")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  app.add_flag("-v,--verbose", cfg.verbosity, "Increase diagnostic output");

  // extract
  std::vector<std::string> extract_paths;
  std::string extract_out;
  auto* extract = app.add_subcommand("extract", "Compute a fingerprint from images");
  extract->add_option("images", extract_paths, "PGM/PPM images")->required();
  extract->add_option("--out", extract_out, "Output fingerprint file")->required();

  // match
  std::string match_a, match_b;
  auto* match = app.add_subcommand("match", "Score two fingerprint files with signed PCE");
  match->add_option("fingerprint_a", match_a)->required();
  match->add_option("fingerprint_b", match_b)->required();

  // synth
  std::uint64_t synth_seed = 0, synth_session = 0;
  std::size_t synth_count = 20, synth_w = 512, synth_h = 512;
  double synth_strength = 0.02, synth_sigma = 2.0;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Emit synthetic captures with a known pattern");
  synth->add_option("--seed", synth_seed, "Camera seed (selects the sensor pattern)");
  synth->add_option("--session", synth_session, "Capture session seed (selects the scenes)");
  synth->add_option("--count", synth_count, "Number of frames")->check(CLI::PositiveNumber);
  synth->add_option("--width", synth_w)->check(CLI::Range(std::size_t{16}, std::size_t{1} << 14));
  synth->add_option("--height", synth_h)
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 14));
  synth->add_option("--strength", synth_strength, "Pattern strength in (0, 0.1]");
  synth->add_option("--sigma", synth_sigma, "Read noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--out", synth_out, "Output directory")->required();

  // enroll / reenroll
  std::string customer, camera_label;
  std::vector<std::string> enroll_paths;
  auto add_enroll_options = [&](CLI::App* sub) {
    sub->add_option("--customer", customer, "Customer id")->required();
    sub->add_option("--camera-label", camera_label, "Free-text camera name");
    sub->add_option("images", enroll_paths, "Enrollment images")->required();
  };
  auto* enroll = app.add_subcommand("enroll", "Register a customer's camera");
  add_enroll_options(enroll);
  auto* reenroll = app.add_subcommand("reenroll", "Replace a customer's camera");
  add_enroll_options(reenroll);

  // verify
  std::string face_result;
  std::vector<std::string> probe_paths;
  auto* verify = app.add_subcommand("verify", "Two-factor check of fresh probe frames");
  verify->add_option("--customer", customer, "Customer id")->required();
  verify->add_option("--face-result", face_result, "External face recognition verdict")
      ->required()
      ->check(CLI::IsMember({"pass", "fail"}));
  verify->add_option("frames", probe_paths, "Probe frames")->required();

  // revoke
  auto* revoke = app.add_subcommand("revoke", "Remove a customer's enrollment");
  revoke->add_option("--customer", customer, "Customer id")->required();

  // request
  app.add_subcommand("request",
                     "Serve JSON requests (one per line) from stdin against the store");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitError;
  }

  try {
    if (extract->parsed()) {
      const auto images = detail::load_all(extract_paths);
      const auto fp = postprocess(accumulate(images));
      save_fingerprint(extract_out, fp);
      out << "images=" << fp.image_count << " " << fp.width() << "x" << fp.height() << "\n";
      return kExitOk;
    }

    if (match->parsed()) {
      const auto a = load_fingerprint(match_a);
      const auto b = load_fingerprint(match_b);
      const auto report = pce(a, b, cfg.exclusion_half_width);
      const auto decision = decide(report, cfg.threshold);
      nlohmann::json j = report;
      j["matched"] = decision.matched;
      j["threshold"] = decision.threshold;
      out << j.dump() << "\n";
      return decision.matched ? kExitOk : kExitNegative;
    }

    if (synth->parsed()) {
      const auto cam = make_camera(synth_seed, synth_w, synth_h, synth_strength, synth_sigma);
      const std::filesystem::path dir(synth_out);
      std::filesystem::create_directories(dir);
      const auto frames = capture_session(cam, synth_count, mix_seed(synth_seed, synth_session));
      for (std::size_t i = 0; i < frames.size(); ++i) {
        write_file_bytes(dir / detail::frame_name(i), encode_pgm(frames[i]));
      }
      const std::string pattern_file = "pattern.prnufp";
      save_fingerprint(dir / pattern_file, CameraFingerprint{cam.pattern, 1, false, {}});
      const nlohmann::json manifest = {{"seed", synth_seed},
                                       {"session", synth_session},
                                       {"strength", synth_strength},
                                       {"sigma", synth_sigma},
                                       {"count", synth_count},
                                       {"width", synth_w},
                                       {"height", synth_h},
                                       {"pattern_file", pattern_file}};
      const std::string text = manifest.dump(2) + "\n";
      write_file_bytes(dir / "manifest.json",
                       std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                 text.size()));
      out << "frames=" << frames.size() << " " << synth_w << "x" << synth_h << " dir="
          << dir.string() << "\n";
      return kExitOk;
    }

    if (enroll->parsed() || reenroll->parsed()) {
      detail::require_store(cfg);
      FingerprintStore store(cfg.store_root);
      AuthService service(store, detail::auth_config(cfg));
      const auto images = detail::load_all(enroll_paths);
      if (images.size() < kRecommendedEnrollmentImages) {
        err << "warning: enrolling with " << images.size() << " images; "
            << kRecommendedEnrollmentImages << " or more are recommended\n";
      }
      const auto rec = enroll->parsed() ? service.enroll(customer, images, camera_label)
                                        : service.reenroll(customer, images, camera_label);
      out << nlohmann::json{{"customer_id", rec.customer_id},
                            {"image_count", rec.image_count},
                            {"enrolled_at", rec.enrolled_at},
                            {"camera_label", rec.camera_label},
                            {"width", rec.fingerprint.width()},
                            {"height", rec.fingerprint.height()}}
                 .dump()
          << "\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      detail::require_store(cfg);
      FingerprintStore store(cfg.store_root);
      AuthService service(store, detail::auth_config(cfg));
      const auto frames = detail::load_all(probe_paths);
      const auto decision = service.verify(customer, face_result == "pass", frames);
      if (cfg.verbosity > 0 && !decision.pce) {
        err << "face check failed; camera check skipped\n";
      }
      out << nlohmann::json(decision).dump() << "\n";
      return decision.authenticated ? kExitOk : kExitNegative;
    }

    if (revoke->parsed()) {
      detail::require_store(cfg);
      FingerprintStore store(cfg.store_root);
      AuthService service(store, detail::auth_config(cfg));
      service.revoke(customer);
      out << nlohmann::json{{"customer_id", customer}, {"revoked", true}}.dump() << "\n";
      return kExitOk;
    }

    // request
    detail::require_store(cfg);
    FingerprintStore store(cfg.store_root);
    AuthService service(store, detail::auth_config(cfg));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto req = nlohmann::json::parse(line, nullptr, false);
      const auto resp = req.is_discarded()
                            ? error_json(ErrorCode::kInvalidArgument, "malformed JSON request")
                            : handle_request(service, req);
      out << resp.dump() << "\n" << std::flush;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace prnuauth::cli
