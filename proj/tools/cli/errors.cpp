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

#include "errors.hpp"

namespace cicreg::cli {

int exit_code_for(cicreg_status s) {
  switch (s) {
    case CICREG_OK:
      return kExitOk;
    case CICREG_ERR_IO:
    case CICREG_ERR_FORMAT:
      return kExitIo;
    case CICREG_ERR_INVALID_INPUT:
    case CICREG_ERR_UNDEFINED_METRIC:
      return kExitInvalid;
    default:
      return kExitInternal;
  }
}

void check(cicreg_status s) {
  if (s != CICREG_OK) throw Failure(exit_code_for(s), cicreg_last_error());
}

}  // namespace cicreg::cli
