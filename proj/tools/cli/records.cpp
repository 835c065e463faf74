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

#include "records.hpp"

#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace cicreg::cli {

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

void Record::set(std::string key, std::string value) {
  value = sanitize(std::move(value));
  for (auto& [k, v] : fields_)
    if (k == key) {
      v = std::move(value);
      return;
    }
  fields_.emplace_back(sanitize(std::move(key)), std::move(value));
}

void Record::set_number(std::string key, double value) { set(std::move(key), format_number(value)); }

void Record::set_optional(std::string key, std::optional<double> value) {
  set(std::move(key), value ? format_number(*value) : "null");
}

const std::string* Record::get(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return &v;
  return nullptr;
}

std::string Record::kind() const {
  const std::string* k = get("kind");
  return k ? *k : std::string{};
}

std::string Record::to_line() const {
  std::string out;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out += '\t';
    out += fields_[i].first;
    out += '=';
    out += fields_[i].second;
  }
  return out;
}

Record Record::parse(std::string_view line) {
  Record r;
  while (!line.empty()) {
    const auto tab = line.find('\t');
    const std::string_view item = line.substr(0, tab);
    line = tab == std::string_view::npos ? std::string_view{} : line.substr(tab + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) throw FormatFailure("record field '" + std::string(item) + "' is not key=value");
    r.fields_.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return r;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_null(std::string_view s) { return s == "null"; }

std::optional<double> parse_number(std::string_view s) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s.empty() || is_null(s)) return std::nullopt;
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string serialize(const std::vector<Record>& records) {
  std::string out;
  for (const Record& r : records) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    out.push_back(Record::parse(line));
  }
  return out;
}

std::vector<Record> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_records(ss.str());
  } catch (const FormatFailure& e) {
    throw FormatFailure(path + ": " + e.what());
  }
}

void write_records(const std::string& path, const std::vector<Record>& records) {
  write_text_atomic(path, serialize(records));
}

void write_text_atomic(const std::string& path, std::string_view text) {
  write_bytes_atomic(path, std::vector<unsigned char>(text.begin(), text.end()));
}

void write_bytes_atomic(const std::string& path, const std::vector<unsigned char>& bytes) {
  static std::atomic<unsigned> counter{0};
  const std::string tmp = path + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  bool ok = f != nullptr;
  if (f) {
    ok = bytes.empty() || std::fwrite(bytes.data(), 1, bytes.size(), f) == bytes.size();
    ok = std::fclose(f) == 0 && ok;
  }
  if (!ok) {
    const std::string reason = std::strerror(errno);
    std::remove(tmp.c_str());
    throw IoFailure("cannot write '" + path + "': " + reason);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoFailure("cannot write '" + path + "': " + ec.message());
  }
}

}  // namespace cicreg::cli
