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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <limits>
#include <type_traits>

namespace cicreg {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* want) {
  throw InvalidInput("config: invalid value '" + std::string(value) + "' for '" + std::string(key) + "' (expected " +
                     want + ")");
}

double parse_double(std::string_view key, std::string_view v) {
  v = trim(v);
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) bad_value(key, v, "a finite number");
  return d;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view key, std::string_view v, Parse parse) {
  std::vector<T> out;
  v = trim(v);
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.push_back(parse(key, v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_double(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) out += fmt_double(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "levels",          "iters_per_level", "step_size",     "beta1",         "beta2",
      "epsilon",         "rel_tol",         "lambda_smooth", "lambda_img_cyc", "lambda_flow_cyc",
      "lambda_jac",      "window_sigma",    "window_radius", "c1",            "c2",
      "num_scales",      "scale_weights",   "seed"};
  return keys;
}

void apply_config_value(RegistrationConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  auto dbl = [&] { return parse_double(key, value); };
  if (key == "levels") cfg.levels = parse_int<int>(key, value);
  else if (key == "iters_per_level") cfg.iters_per_level = parse_list<int>(key, value, parse_int<int>);
  else if (key == "step_size") cfg.step_size = dbl();
  else if (key == "beta1") cfg.beta1 = dbl();
  else if (key == "beta2") cfg.beta2 = dbl();
  else if (key == "epsilon") cfg.epsilon = dbl();
  else if (key == "rel_tol") cfg.rel_tol = dbl();
  else if (key == "lambda_smooth") cfg.weights.lambda_smooth = dbl();
  else if (key == "lambda_img_cyc") cfg.weights.lambda_img_cyc = dbl();
  else if (key == "lambda_flow_cyc") cfg.weights.lambda_flow_cyc = dbl();
  else if (key == "lambda_jac") cfg.weights.lambda_jac = dbl();
  else if (key == "window_sigma") cfg.ssim.window_sigma = dbl();
  else if (key == "window_radius") cfg.ssim.window_radius = parse_int<int>(key, value);
  else if (key == "c1") cfg.ssim.c1 = dbl();
  else if (key == "c2") cfg.ssim.c2 = dbl();
  else if (key == "num_scales") cfg.ssim.num_scales = parse_int<int>(key, value);
  else if (key == "scale_weights") cfg.ssim.scale_weights = parse_list<double>(key, value, parse_double);
  else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
  else throw InvalidInput("config: unknown key '" + std::string(key) + "'");
}

std::string config_value(const RegistrationConfig& cfg, std::string_view key) {
  if (key == "levels") return std::to_string(cfg.levels);
  if (key == "iters_per_level") return fmt_list(cfg.iters_per_level);
  if (key == "step_size") return fmt_double(cfg.step_size);
  if (key == "beta1") return fmt_double(cfg.beta1);
  if (key == "beta2") return fmt_double(cfg.beta2);
  if (key == "epsilon") return fmt_double(cfg.epsilon);
  if (key == "rel_tol") return fmt_double(cfg.rel_tol);
  if (key == "lambda_smooth") return fmt_double(cfg.weights.lambda_smooth);
  if (key == "lambda_img_cyc") return fmt_double(cfg.weights.lambda_img_cyc);
  if (key == "lambda_flow_cyc") return fmt_double(cfg.weights.lambda_flow_cyc);
  if (key == "lambda_jac") return fmt_double(cfg.weights.lambda_jac);
  if (key == "window_sigma") return fmt_double(cfg.ssim.window_sigma);
  if (key == "window_radius") return std::to_string(cfg.ssim.window_radius);
  if (key == "c1") return fmt_double(cfg.ssim.c1);
  if (key == "c2") return fmt_double(cfg.ssim.c2);
  if (key == "num_scales") return std::to_string(cfg.ssim.num_scales);
  if (key == "scale_weights") return fmt_list(cfg.ssim.scale_weights);
  if (key == "seed") return std::to_string(cfg.seed);
  throw InvalidInput("config: unknown key '" + std::string(key) + "'");
}

void apply_config_text(RegistrationConfig& cfg, std::string_view text) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidInput("config: line " + std::to_string(line_no) + " is not of the form key=value");
    apply_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

}  // namespace cicreg
