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

#include <memory>
#include <string>

#include "cicreg/cicreg.h"
#include "errors.hpp"

namespace cicreg::cli {

struct VolumeDeleter {
  void operator()(cicreg_volume* v) const noexcept { cicreg_volume_free(v); }
};
struct FieldDeleter {
  void operator()(cicreg_field* u) const noexcept { cicreg_field_free(u); }
};
struct ConfigDeleter {
  void operator()(cicreg_config* c) const noexcept { cicreg_config_free(c); }
};
struct ResultDeleter {
  void operator()(cicreg_result* r) const noexcept { cicreg_result_free(r); }
};

using VolumePtr = std::unique_ptr<cicreg_volume, VolumeDeleter>;
using FieldPtr = std::unique_ptr<cicreg_field, FieldDeleter>;
using ConfigPtr = std::unique_ptr<cicreg_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<cicreg_result, ResultDeleter>;

inline VolumePtr load_volume(const std::string& path) {
  cicreg_volume* v = nullptr;
  check(cicreg_volume_load(path.c_str(), &v));
  return VolumePtr(v);
}

inline FieldPtr load_field(const std::string& path) {
  cicreg_field* u = nullptr;
  check(cicreg_field_load(path.c_str(), &u));
  return FieldPtr(u);
}

}  // namespace cicreg::cli
