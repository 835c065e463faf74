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

#include <ostream>
#include <string>
#include <vector>

#include "cicreg/cicreg.h"
#include "records.hpp"

namespace cicreg::cli {

// Runs one `cicreg` invocation; args excludes the program name. Diagnostics
// go to err as single lines. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& err);

// Record builders shared by the commands and their tests. Field order is fixed.
Record metrics_record(const cicreg_metric_report& m);
Record jacobian_record(const cicreg_jacobian_report& j);
Record trace_record(const cicreg_trace_entry& t);

// UTC, e.g. 2026-10-14T09:30:00Z.
std::string iso_timestamp();

}  // namespace cicreg::cli
