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

// JSON request/response surface over AuthService.
//
//   {"type": "Register", "customer_id", "camera_label", "image_paths": [...]}
//       -> {"image_count", "enrolled_at"}
//   {"type": "Reenroll", ...same fields as Register...}
//       -> {"image_count", "enrolled_at"}
//   {"type": "Verify", "customer_id", "face_ok", "frame_paths": [...]}
//       -> {"authenticated", "face_ok", "camera_ok", "pce"}
//   {"type": "Revoke", "customer_id"}
//       -> {"revoked": true}
//
// Failures come back as {"error_code", "message"}.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "prnuauth/auth_service.hpp"
#include "prnuauth/error.hpp"
#include "prnuauth/json_io.hpp"
#include "prnuauth/pnm.hpp"

namespace prnuauth {

namespace detail {

inline std::vector<LuminanceImage> load_images(const nlohmann::json& paths) {
  std::vector<LuminanceImage> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(load_image(p.get<std::string>()));
  return images;
}

inline const nlohmann::json& require_field(const nlohmann::json& req, const char* name) {
  if (!req.contains(name)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing field: ") + name);
  }
  return req.at(name);
}

}  // namespace detail

inline nlohmann::json handle_request(AuthService& service, const nlohmann::json& request) {
  try {
    if (!request.is_object()) {
      throw Error(ErrorCode::kInvalidArgument, "request must be a JSON object");
    }
    const auto type = detail::require_field(request, "type").get<std::string>();
    const auto customer_id = detail::require_field(request, "customer_id").get<std::string>();

    if (type == "Register" || type == "Reenroll") {
      const auto label = request.value("camera_label", std::string{});
      const auto images = detail::load_images(detail::require_field(request, "image_paths"));
      const EnrollmentRecord rec = type == "Register"
                                       ? service.enroll(customer_id, images, label)
                                       : service.reenroll(customer_id, images, label);
      return {{"image_count", rec.image_count}, {"enrolled_at", rec.enrolled_at}};
    }
    if (type == "Verify") {
      const bool face_ok = detail::require_field(request, "face_ok").get<bool>();
      const auto frames = detail::load_images(detail::require_field(request, "frame_paths"));
      const AuthDecision d = service.verify(customer_id, face_ok, frames);
      return {{"authenticated", d.authenticated},
              {"face_ok", d.face_ok},
              {"camera_ok", d.camera_ok},
              {"pce", d.pce ? nlohmann::json(*d.pce) : nlohmann::json(nullptr)}};
    }
    if (type == "Revoke") {
      service.revoke(customer_id);
      return {{"revoked", true}};
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown request type: " + type);
  } catch (const Error& e) {
    return error_json(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_json(ErrorCode::kInvalidArgument, e.what());
  }
}

}  // namespace prnuauth
