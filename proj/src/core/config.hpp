// Copyright 2026 The cicreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "optimizer.hpp"

namespace cicreg {

// Flat key=value view of RegistrationConfig. Keys mirror the field names;
// SSIM parameters use their bare names (window_sigma, c1, ...). List values
// are comma separated.
void apply_config_value(RegistrationConfig& cfg, std::string_view key, std::string_view value);
std::string config_value(const RegistrationConfig& cfg, std::string_view key);
const std::vector<std::string>& config_keys();

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
void apply_config_text(RegistrationConfig& cfg, std::string_view text);

}  // namespace cicreg
