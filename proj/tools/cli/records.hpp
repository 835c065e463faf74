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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cicreg::cli {

// One line of a report file: tab separated key=value pairs in a fixed order.
class Record {
 public:
  Record() = default;
  explicit Record(std::string kind) { set("kind", std::move(kind)); }

  void set(std::string key, std::string value);
  void set_number(std::string key, double value);
  // NaN is written as "null".
  void set_optional(std::string key, std::optional<double> value);

  const std::string* get(std::string_view key) const;
  std::string kind() const;
  const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }

  std::string to_line() const;
  static Record parse(std::string_view line);

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

// %.17g, "inf" / "-inf" for infinities, "null" for NaN.
std::string format_number(double v);
// Inverse of format_number for numeric values; nullopt for "null" or text.
std::optional<double> parse_number(std::string_view s);
bool is_null(std::string_view s);

std::string serialize(const std::vector<Record>& records);
std::vector<Record> parse_records(std::string_view text);

std::vector<Record> read_records(const std::string& path);
void write_records(const std::string& path, const std::vector<Record>& records);

// Writes through a temporary file in the same directory, then renames.
void write_text_atomic(const std::string& path, std::string_view text);
void write_bytes_atomic(const std::string& path, const std::vector<unsigned char>& bytes);

}  // namespace cicreg::cli
