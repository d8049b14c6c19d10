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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "json.hpp"
#include "oracles.hpp"

namespace prnuauth {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int status = cli::run(args, in, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> frame_paths(const fs::path& dir, std::size_t n) {
  std::vector<std::string> paths;
  for (std::size_t i = 0; i < n; ++i) paths.push_back((dir / cli::detail::frame_name(i)).string());
  return paths;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  fs::path synth(std::uint64_t seed, std::uint64_t session, std::size_t count,
                 const std::string& name) {
    const auto out = dir_.path() / name;
    const auto r = run_cli({"synth", "--seed", std::to_string(seed), "--session",
                            std::to_string(session), "--count", std::to_string(count),
                            "--width", "128", "--height", "128", "--out", out.string()});
    EXPECT_EQ(r.status, 0) << r.err;
    return out;
  }

  std::string store() const { return (dir_.path() / "store").string(); }

  testing::TempDir dir_;
};

TEST_F(CliTest, SynthWritesFramesPatternAndManifest) {
  const auto dir = synth(7, 0, 3, "s");
  for (const auto& p : frame_paths(dir, 3)) {
    const auto img = load_image(p);
    EXPECT_EQ(img.width(), 128u);
  }
  const auto pattern = load_fingerprint(dir / "pattern.prnufp");
  EXPECT_EQ(pattern.width(), 128u);
  const auto text = read_file_bytes(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(text.begin(), text.end());
  EXPECT_EQ(manifest.at("seed"), 7);
  EXPECT_EQ(manifest.at("count"), 3);
  EXPECT_EQ(manifest.at("strength"), 0.02);
  EXPECT_EQ(manifest.at("sigma"), 2.0);
  EXPECT_EQ(manifest.at("pattern_file"), "pattern.prnufp");
}

TEST_F(CliTest, SynthIsReproducible) {
  const auto a = synth(7, 0, 20, "a");
  const auto b = synth(7, 0, 20, "b");
  for (const auto& name : {std::string("frame_0000.pgm"), std::string("frame_0019.pgm"),
                           std::string("pattern.prnufp"), std::string("manifest.json")}) {
    EXPECT_EQ(read_file_bytes(a / name), read_file_bytes(b / name)) << name;
  }
  const auto c = synth(7, 1, 1, "c");
  EXPECT_NE(read_file_bytes(a / "frame_0000.pgm"), read_file_bytes(c / "frame_0000.pgm"));
  EXPECT_EQ(read_file_bytes(a / "pattern.prnufp"), read_file_bytes(c / "pattern.prnufp"));
}

TEST_F(CliTest, SynthRejectsBadArguments) {
  const auto out = (dir_.path() / "bad").string();
  EXPECT_EQ(run_cli({"synth", "--strength", "0.5", "--out", out}).status, 2);
  EXPECT_EQ(run_cli({"synth", "--count", "0", "--out", out}).status, 2);
  EXPECT_EQ(run_cli({"synth", "--width", "8", "--out", out}).status, 2);
  EXPECT_EQ(run_cli({"synth", "--sigma", "-1", "--out", out}).status, 2);
}

TEST_F(CliTest, ExtractAndMatch) {
  const auto cam_a1 = synth(1, 1, 15, "a1");
  const auto cam_a2 = synth(1, 2, 15, "a2");
  const auto cam_b = synth(2, 3, 15, "b");
  const auto fa1 = (dir_.path() / "a1.prnufp").string();
  const auto fa2 = (dir_.path() / "a2.prnufp").string();
  const auto fb = (dir_.path() / "b.prnufp").string();

  auto r = run_cli(concat({"extract", "--out", fa1}, frame_paths(cam_a1, 15)));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "images=15 128x128\n");
  ASSERT_EQ(run_cli(concat({"extract", "--out", fa2}, frame_paths(cam_a2, 15))).status, 0);
  ASSERT_EQ(run_cli(concat({"extract", "--out", fb}, frame_paths(cam_b, 15))).status, 0);

  const auto stored = load_fingerprint(fa1);
  EXPECT_TRUE(stored.postprocessed);
  EXPECT_EQ(stored.image_count, 15u);

  r = run_cli({"match", fa1, fa2});
  EXPECT_EQ(r.status, 0) << r.out;
  const auto same = nlohmann::json::parse(r.out);
  EXPECT_TRUE(same.at("matched").get<bool>());
  EXPECT_GT(same.at("pce").get<double>(), 50.0);
  EXPECT_EQ(same.at("threshold"), 50.0);
  EXPECT_EQ(same.at("exclusion_half_width"), 5);

  r = run_cli({"match", fa1, fb});
  EXPECT_EQ(r.status, 1) << r.out;
  EXPECT_FALSE(nlohmann::json::parse(r.out).at("matched").get<bool>());

  const double same_pce = same.at("pce").get<double>();
  r = run_cli({"--threshold", std::to_string(same_pce * 2), "match", fa1, fa2});
  EXPECT_EQ(r.status, 1);
  r = run_cli({"--exclusion", "3", "match", fa1, fa2});
  EXPECT_EQ(nlohmann::json::parse(r.out).at("exclusion_half_width"), 3);
}

TEST_F(CliTest, ExtractErrors) {
  const auto out = (dir_.path() / "x.prnufp").string();
  EXPECT_EQ(run_cli({"extract", "--out", out}).status, 2);

  const auto small = dir_.path() / "small.pgm";
  write_file_bytes(small, encode_pgm(LuminanceImage(32, 16, 90.0)));
  const auto frames = synth(1, 1, 2, "f");
  auto r = run_cli(concat({"extract", "--out", out}, concat(frame_paths(frames, 2),
                                                             {small.string()})));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("dimension mismatch"), std::string::npos) << r.err;

  r = run_cli({"extract", "--out", out, (dir_.path() / "missing.pgm").string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, MatchRejectsCorruptFingerprint) {
  const auto good = (dir_.path() / "good.prnufp").string();
  save_fingerprint(good, CameraFingerprint{testing::random_plane(1, 32, 32), 1, true, {}});
  const auto bad = dir_.path() / "bad.prnufp";
  std::vector<std::uint8_t> junk(24 + 4 * 32 * 32, 0);
  junk[0] = 'J';
  write_file_bytes(bad, junk);
  const auto r = run_cli({"match", good, bad.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("bad magic"), std::string::npos) << r.err;

  const auto other = (dir_.path() / "other.prnufp").string();
  save_fingerprint(other, CameraFingerprint{testing::random_plane(2, 32, 16), 1, true, {}});
  EXPECT_EQ(run_cli({"match", good, other}).status, 2);
}

TEST_F(CliTest, EnrollVerifyRevoke) {
  const auto enroll_dir = synth(1, 1, 15, "enroll");
  const auto probe_dir = synth(1, 2, 10, "probe");
  const auto other_dir = synth(2, 3, 10, "other");

  auto r = run_cli(concat({"--store", store(), "enroll", "--customer", "alice",
                           "--camera-label", "webcam"},
                          frame_paths(enroll_dir, 15)));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto rec = nlohmann::json::parse(r.out);
  EXPECT_EQ(rec.at("image_count"), 15);
  EXPECT_EQ(rec.at("camera_label"), "webcam");

  r = run_cli(concat({"--store", store(), "enroll", "--customer", "alice"},
                     frame_paths(enroll_dir, 15)));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("already enrolled"), std::string::npos) << r.err;

  r = run_cli(concat({"--store", store(), "verify", "--customer", "alice", "--face-result",
                      "pass"},
                     frame_paths(probe_dir, 10)));
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("authenticated").get<bool>());

  r = run_cli(concat({"--store", store(), "verify", "--customer", "alice", "--face-result",
                      "fail"},
                     frame_paths(probe_dir, 10)));
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("pce").is_null());

  r = run_cli(concat({"--store", store(), "verify", "--customer", "alice", "--face-result",
                      "pass"},
                     frame_paths(other_dir, 10)));
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(nlohmann::json::parse(r.out).at("camera_ok").get<bool>());

  r = run_cli(concat({"--store", store(), "verify", "--customer", "bob", "--face-result",
                      "pass"},
                     frame_paths(probe_dir, 10)));
  EXPECT_EQ(r.status, 2);

  EXPECT_EQ(run_cli({"--store", store(), "revoke", "--customer", "alice"}).status, 0);
  EXPECT_EQ(run_cli({"--store", store(), "revoke", "--customer", "alice"}).status, 2);
}

TEST_F(CliTest, EnrollBelowMinimumFails) {
  const auto dir = synth(1, 1, 14, "few");
  const auto r = run_cli(concat({"--store", store(), "enroll", "--customer", "alice"},
                                frame_paths(dir, 14)));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("insufficient enrollment set"), std::string::npos) << r.err;
}

TEST_F(CliTest, StoreIsRequired) {
  const auto dir = synth(1, 1, 15, "nostore");
  ::unsetenv("PRNU_STORE");
  const auto r = run_cli(concat({"enroll", "--customer", "alice"}, frame_paths(dir, 15)));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("PRNU_STORE"), std::string::npos);
}

TEST_F(CliTest, StoreFromEnvironment) {
  const auto dir = synth(1, 1, 15, "env");
  ::setenv("PRNU_STORE", store().c_str(), 1);
  const auto r = run_cli(concat({"enroll", "--customer", "alice"}, frame_paths(dir, 15)));
  ::unsetenv("PRNU_STORE");
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(fs::path(store()) / "index.json"));
}

TEST_F(CliTest, RequestLoop) {
  const auto enroll_dir = synth(1, 1, 15, "req");
  const nlohmann::json reg = {{"type", "Register"},
                              {"customer_id", "alice"},
                              {"image_paths", frame_paths(enroll_dir, 15)}};
  const nlohmann::json ver = {{"type", "Verify"},
                              {"customer_id", "alice"},
                              {"face_ok", false},
                              {"frame_paths", frame_paths(enroll_dir, 2)}};
  const auto input = reg.dump() + "\n\nnot json\n" + ver.dump() + "\n";
  const auto r = run_cli({"--store", store(), "request"}, input);
  EXPECT_EQ(r.status, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<nlohmann::json> responses;
  while (std::getline(lines, line)) responses.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(responses.size(), 3u);
  EXPECT_EQ(responses[0].at("image_count"), 15);
  EXPECT_EQ(responses[1].at("error_code"), "INVALID_ARGUMENT");
  EXPECT_EQ(responses[2].at("authenticated"), false);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).status, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).status, 2);
  EXPECT_EQ(run_cli({"--threshold", "-3", "match", "a", "b"}).status, 2);
  EXPECT_EQ(run_cli({"--exclusion", "0", "match", "a", "b"}).status, 2);
  EXPECT_EQ(run_cli({"verify", "--customer", "a", "--face-result", "maybe", "x.pgm"}).status, 2);
  EXPECT_EQ(run_cli({"--help"}).status, 0);
}

}  // namespace
}  // namespace prnuauth
