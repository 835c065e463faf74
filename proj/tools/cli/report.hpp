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

#include <map>
#include <string>
#include <vector>

#include "records.hpp"

namespace cicreg::cli {

struct MetricSummary {
  std::string name;
  std::size_t n = 0;  // records with a defined value
  double mean = 0.0;
  double std = 0.0;  // population
};

struct TimingSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct Aggregate {
  std::vector<MetricSummary> metrics;  // first-seen order
  TimingSummary timing;
  std::size_t records = 0;  // per-pair records aggregated
};

double mean_of(const std::vector<double>& v);
double population_std(const std::vector<double>& v);
double median_of(std::vector<double> v);

// Per-pair statistics come from kind=metrics and kind=jacobian records,
// timing from elapsed_seconds of kind=manifest records. Other kinds are
// skipped. Throws InvalidFailure when no per-pair record is present.
Aggregate aggregate(const std::vector<Record>& records);
std::vector<Record> to_records(const Aggregate& a);

}  // namespace cicreg::cli
