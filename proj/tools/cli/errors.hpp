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

#include <stdexcept>
#include <string>

#include "cicreg/cicreg.h"

namespace cicreg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitInvalid = 3,
  kExitInternal = 4,
};

// Failures raised by the CLI layer, each carrying its exit code.
class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

struct UsageFailure : Failure {
  explicit UsageFailure(const std::string& w) : Failure(kExitUsage, w) {}
};
struct IoFailure : Failure {
  explicit IoFailure(const std::string& w) : Failure(kExitIo, w) {}
};
struct FormatFailure : Failure {
  explicit FormatFailure(const std::string& w) : Failure(kExitIo, w) {}
};
struct InvalidFailure : Failure {
  explicit InvalidFailure(const std::string& w) : Failure(kExitInvalid, w) {}
};

int exit_code_for(cicreg_status s);
// Throws the matching Failure with cicreg_last_error() when s != CICREG_OK.
void check(cicreg_status s);

}  // namespace cicreg::cli
