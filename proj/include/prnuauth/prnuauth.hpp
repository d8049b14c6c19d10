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

#include "prnuauth/auth_service.hpp"
#include "prnuauth/correlation.hpp"
#include "prnuauth/denoise.hpp"
#include "prnuauth/error.hpp"
#include "prnuauth/facade.hpp"
#include "prnuauth/fingerprint.hpp"
#include "prnuauth/fingerprint_io.hpp"
#include "prnuauth/json_io.hpp"
#include "prnuauth/pce.hpp"
#include "prnuauth/plane.hpp"
#include "prnuauth/pnm.hpp"
#include "prnuauth/resample.hpp"
#include "prnuauth/store.hpp"
#include "prnuauth/synth.hpp"
#include "prnuauth/wavelet.hpp"
