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

#include "json.hpp"
#include "prnuauth/auth_service.hpp"
#include "prnuauth/error.hpp"
#include "prnuauth/pce.hpp"

namespace prnuauth {

inline void to_json(nlohmann::json& j, const PceReport& r) {
  j = nlohmann::json{{"pce", r.pce},
                     {"peak_correlation", r.peak_correlation},
                     {"width", r.width},
                     {"height", r.height},
                     {"exclusion_half_width", r.exclusion_half_width}};
}

inline void to_json(nlohmann::json& j, const MatchDecision& d) {
  j = nlohmann::json{{"matched", d.matched}, {"pce", d.pce}, {"threshold", d.threshold}};
}

inline void to_json(nlohmann::json& j, const AuthDecision& d) {
  j = nlohmann::json{{"customer_id", d.customer_id},
                     {"face_ok", d.face_ok},
                     {"camera_ok", d.camera_ok},
                     {"pce", d.pce ? nlohmann::json(*d.pce) : nlohmann::json(nullptr)},
                     {"authenticated", d.authenticated},
                     {"decided_at", d.decided_at}};
}

inline nlohmann::json error_json(ErrorCode code, const std::string& message) {
  return nlohmann::json{{"error_code", std::string(to_string(code))}, {"message", message}};
}

}  // namespace prnuauth
