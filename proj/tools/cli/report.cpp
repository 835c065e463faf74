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

#include "report.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace cicreg::cli {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  if (std::isinf(m)) return std::nan("");
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Aggregate aggregate(const std::vector<Record>& records) {
  Aggregate out;
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  std::vector<double> times;
  for (const Record& r : records) {
    const std::string kind = r.kind();
    if (kind == "manifest") {
      if (const std::string* t = r.get("elapsed_seconds"))
        if (auto v = parse_number(*t)) times.push_back(*v);
      continue;
    }
    if (kind != "metrics" && kind != "jacobian") continue;
    ++out.records;
    for (const auto& [key, text] : r.fields()) {
      if (key == "kind") continue;
      const auto v = parse_number(text);
      if (!v && !is_null(text)) continue;
      auto [it, fresh] = values.try_emplace(key);
      if (fresh) order.push_back(key);
      if (v) it->second.push_back(*v);
    }
  }
  if (out.records == 0) throw InvalidFailure("report: no metrics or jacobian records found");
  for (const std::string& key : order) {
    const auto& v = values[key];
    MetricSummary s{key, v.size(), std::nan(""), std::nan("")};
    if (!v.empty()) {
      s.mean = mean_of(v);
      s.std = population_std(v);
    }
    out.metrics.push_back(s);
  }
  if (!times.empty()) {
    out.timing.n = times.size();
    out.timing.mean = mean_of(times);
    out.timing.median = median_of(times);
    out.timing.min = *std::min_element(times.begin(), times.end());
    out.timing.max = *std::max_element(times.begin(), times.end());
  }
  return out;
}

std::vector<Record> to_records(const Aggregate& a) {
  std::vector<Record> out;
  for (const MetricSummary& s : a.metrics) {
    Record r("summary");
    r.set("metric", s.name);
    r.set("n", std::to_string(s.n));
    r.set_number("mean", s.mean);
    r.set_number("std", s.std);
    out.push_back(std::move(r));
  }
  Record t("timing");
  t.set("n", std::to_string(a.timing.n));
  if (a.timing.n) {
    t.set_number("mean", a.timing.mean);
    t.set_number("median", a.timing.median);
    t.set_number("min", a.timing.min);
    t.set_number("max", a.timing.max);
  } else {
    for (const char* k : {"mean", "median", "min", "max"}) t.set(k, "null");
  }
  out.push_back(std::move(t));
  return out;
}

}  // namespace cicreg::cli
