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

#include "commands.hpp"

#include <glob.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "errors.hpp"
#include "handles.hpp"
#include "pgm.hpp"
#include "report.hpp"

namespace cicreg::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string moving;
  std::string fixed;
  std::string field;
  std::string out;
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::string> inputs;
  std::string format = "mvol";
  int jobs = 0;
  std::int64_t seed = -1;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::optional<double> defined(double v, std::uint32_t mask, std::uint32_t bit) {
  if (!(mask & bit)) return std::nullopt;
  return v;
}

std::optional<double> finite_or_null(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::string extension(const std::string& format) {
  if (format == "mvol") return ".mvol";
  if (format == "nii") return ".nii";
  if (format == "nii.gz") return ".nii.gz";
  throw UsageFailure("--format must be mvol, nii or nii.gz");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) throw UsageFailure(std::string(command) + ": " + flag + " is required");
}

// Applies --config, then every --set, then --seed. Returns the overrides in
// effect, "key=value" joined by ';', for the manifest.
ConfigPtr build_config(const Options& o, std::string& overrides) {
  cicreg_config* raw = nullptr;
  check(cicreg_config_create(&raw));
  ConfigPtr cfg(raw);
  if (!o.config.empty()) check(cicreg_config_load_text(cfg.get(), read_text(o.config).c_str()));
  std::vector<std::string> applied;
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageFailure("--set expects key=value, got '" + s + "'");
    check(cicreg_config_set(cfg.get(), s.substr(0, eq).c_str(), s.substr(eq + 1).c_str()));
    applied.push_back(s);
  }
  if (o.seed >= 0) {
    const std::string v = std::to_string(o.seed);
    check(cicreg_config_set(cfg.get(), "seed", v.c_str()));
    applied.push_back("seed=" + v);
  }
  for (std::size_t i = 0; i < applied.size(); ++i) overrides += (i ? ";" : "") + applied[i];
  return cfg;
}

Record manifest(const std::string& command, const Options& o, const std::string& overrides, double elapsed) {
  Record m("manifest");
  m.set("command", command);
  if (!o.moving.empty()) m.set("moving", o.moving);
  if (!o.fixed.empty()) m.set("fixed", o.fixed);
  if (!o.field.empty()) m.set("field", o.field);
  for (std::size_t i = 0; i < o.inputs.size(); ++i) m.set("input" + std::to_string(i), o.inputs[i]);
  m.set("out", o.out);
  m.set("overrides", overrides);
  m.set("tool_version", cicreg_version());
  m.set("timestamp", iso_timestamp());
  m.set_number("elapsed_seconds", elapsed);
  return m;
}

void check_same_dims(const cicreg_volume* a, const cicreg_volume* b, const char* what_a, const char* what_b) {
  int da[3], db[3];
  cicreg_volume_dims(a, da);
  cicreg_volume_dims(b, db);
  if (da[0] != db[0] || da[1] != db[1] || da[2] != db[2]) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "dimension mismatch: %s %dx%dx%d vs %s %dx%dx%d", what_a, da[0], da[1], da[2], what_b,
                  db[0], db[1], db[2]);
    throw InvalidFailure(buf);
  }
}

std::vector<Record> metrics_records(const cicreg_volume* warped, const cicreg_volume* fixed) {
  cicreg_metric_report m;
  check(cicreg_evaluate(warped, fixed, &m));
  std::vector<Record> out{metrics_record(m)};
  const std::string warnings = cicreg_last_warnings();
  std::size_t start = 0;
  while (start < warnings.size()) {
    auto end = warnings.find(';', start);
    if (end == std::string::npos) end = warnings.size();
    Record w("warning");
    w.set("message", warnings.substr(start, end - start));
    out.push_back(std::move(w));
    start = end + 1;
  }
  return out;
}

void write_slices(const cicreg_volume* v, const std::string& prefix) {
  int d[3];
  cicreg_volume_dims(v, d);
  for (const Slice& s : center_slices(cicreg_volume_data(v), d))
    write_bytes_atomic(prefix + "_" + s.plane + ".pgm", encode_pgm(s));
}

int cmd_register(const Options& o) {
  require(o.moving, "--moving", "register");
  require(o.fixed, "--fixed", "register");
  require(o.out, "--out", "register");
  const std::string ext = extension(o.format);
  std::string overrides;
  ConfigPtr cfg = build_config(o, overrides);
  VolumePtr moving = load_volume(o.moving);
  VolumePtr fixed = load_volume(o.fixed);
  check_same_dims(moving.get(), fixed.get(), "moving", "fixed");

  const auto t0 = Clock::now();
  cicreg_result* raw = nullptr;
  check(cicreg_register(moving.get(), fixed.get(), cfg.get(), &raw));
  const double elapsed = seconds_since(t0);
  ResultPtr res(raw);

  ensure_dir(o.out);
  const fs::path dir(o.out);
  check(cicreg_field_save(cicreg_result_field_mf(res.get()), join(dir, "u_MF" + ext).c_str()));
  check(cicreg_field_save(cicreg_result_field_fm(res.get()), join(dir, "u_FM" + ext).c_str()));
  check(cicreg_volume_save(cicreg_result_warped_mf(res.get()), join(dir, "warped_MF" + ext).c_str()));

  std::vector<Record> trace;
  for (std::size_t i = 0; i < cicreg_result_trace_length(res.get()); ++i) {
    cicreg_trace_entry e;
    check(cicreg_result_trace_entry(res.get(), i, &e));
    trace.push_back(trace_record(e));
  }
  for (int l = cicreg_result_levels(res.get()) - 1; l >= 0; --l) {
    Record r("level");
    r.set("level", std::to_string(l));
    r.set("iterations_run", std::to_string(cicreg_result_iterations_run(res.get(), l)));
    r.set("converged", cicreg_result_converged(res.get(), l) ? "true" : "false");
    trace.push_back(std::move(r));
  }
  write_records(join(dir, "trace.rec"), trace);

  cicreg_jacobian_report j;
  check(cicreg_jacobian_report_compute(cicreg_result_field_mf(res.get()), &j));
  Record jr = jacobian_record(j);
  write_records(join(dir, "jacobian.rec"), {jr});
  write_records(join(dir, "metrics.rec"), metrics_records(cicreg_result_warped_mf(res.get()), fixed.get()));
  write_records(join(dir, "manifest.rec"), {manifest("register", o, overrides, elapsed)});
  return kExitOk;
}

int cmd_warp(const Options& o) {
  require(o.moving, "--moving", "warp");
  require(o.field, "--field", "warp");
  require(o.out, "--out", "warp");
  VolumePtr moving = load_volume(o.moving);
  FieldPtr field = load_field(o.field);
  const auto t0 = Clock::now();
  cicreg_volume* raw = nullptr;
  check(cicreg_warp(moving.get(), field.get(), &raw));
  const double elapsed = seconds_since(t0);
  VolumePtr out(raw);
  check(cicreg_volume_save(out.get(), o.out.c_str()));
  write_records(o.out + ".manifest.rec", {manifest("warp", o, "", elapsed)});
  return kExitOk;
}

int cmd_evaluate(const Options& o) {
  require(o.moving, "--warped", "evaluate");
  require(o.fixed, "--fixed", "evaluate");
  require(o.out, "--out", "evaluate");
  VolumePtr warped = load_volume(o.moving);
  VolumePtr fixed = load_volume(o.fixed);
  check_same_dims(warped.get(), fixed.get(), "warped", "fixed");
  const auto t0 = Clock::now();
  auto records = metrics_records(warped.get(), fixed.get());
  const double elapsed = seconds_since(t0);
  write_records(o.out, records);
  write_records(o.out + ".manifest.rec", {manifest("evaluate", o, "", elapsed)});
  return kExitOk;
}

int cmd_jacobian(const Options& o) {
  require(o.field, "--field", "jacobian");
  require(o.out, "--out", "jacobian");
  const std::string ext = extension(o.format);
  FieldPtr field = load_field(o.field);
  const auto t0 = Clock::now();
  cicreg_jacobian_report j;
  check(cicreg_jacobian_report_compute(field.get(), &j));
  cicreg_volume *det = nullptr, *logjd = nullptr, *mag = nullptr;
  check(cicreg_jacobian_maps(field.get(), 1e-6, &det, &logjd, &mag));
  const double elapsed = seconds_since(t0);
  VolumePtr det_p(det), logjd_p(logjd), mag_p(mag);

  ensure_dir(o.out);
  const fs::path dir(o.out);
  check(cicreg_volume_save(det, join(dir, "det" + ext).c_str()));
  check(cicreg_volume_save(logjd, join(dir, "logjd" + ext).c_str()));
  check(cicreg_volume_save(mag, join(dir, "magnitude" + ext).c_str()));
  write_slices(logjd, join(dir, "logjd"));
  write_slices(mag, join(dir, "magnitude"));
  write_records(join(dir, "jacobian.rec"), {jacobian_record(j)});
  write_records(join(dir, "manifest.rec"), {manifest("jacobian", o, "", elapsed)});
  return kExitOk;
}

std::vector<std::string> expand(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) throw IoFailure("cannot expand '" + pattern + "'");
  return out;
}

int cmd_report(const Options& o) {
  if (o.inputs.empty()) throw UsageFailure("report: at least one record file or glob is required");
  require(o.out, "--out", "report");
  std::vector<Record> records;
  for (const std::string& pattern : o.inputs)
    for (const std::string& path : expand(pattern)) {
      auto r = read_records(path);
      records.insert(records.end(), r.begin(), r.end());
    }
  const auto t0 = Clock::now();
  const Aggregate a = aggregate(records);
  const double elapsed = seconds_since(t0);
  write_records(o.out, to_records(a));
  write_records(o.out + ".manifest.rec", {manifest("report", o, "", elapsed)});
  return kExitOk;
}

int cmd_slices(const Options& o) {
  std::string input = o.moving;
  if (input.empty() && o.inputs.size() == 1) input = o.inputs[0];
  if (input.empty() || o.inputs.size() > 1) throw UsageFailure("slices: exactly one input volume is required");
  require(o.out, "--out", "slices");
  VolumePtr v = load_volume(input);
  write_slices(v.get(), o.out);
  return kExitOk;
}

bool use_color() {
  const char* no = std::getenv("CICREG_NO_COLOR");
  if (no && *no) return false;
  return ::isatty(STDERR_FILENO) != 0;
}

void diagnose(std::ostream& err, const std::string& msg) {
  std::string line = msg;
  for (char& c : line)
    if (c == '\n' || c == '\r') c = ' ';
  if (use_color())
    err << "cicreg: \033[31merror\033[0m: " << line << '\n';
  else
    err << "cicreg: error: " << line << '\n';
}

}  // namespace

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Record metrics_record(const cicreg_metric_report& m) {
  Record r("metrics");
  r.set_optional("ssim", defined(m.ssim, m.defined, CICREG_METRIC_SSIM));
  r.set_optional("ncc", defined(m.ncc, m.defined, CICREG_METRIC_NCC));
  r.set_optional("mi", defined(m.mi, m.defined, CICREG_METRIC_MI));
  r.set_optional("psnr", defined(m.psnr, m.defined, CICREG_METRIC_PSNR));
  r.set_optional("mse", defined(m.mse, m.defined, CICREG_METRIC_MSE));
  r.set_optional("mae", defined(m.mae, m.defined, CICREG_METRIC_MAE));
  r.set_optional("dice", defined(m.dice, m.defined, CICREG_METRIC_DICE));
  r.set_optional("gradient_similarity", defined(m.gradient_similarity, m.defined, CICREG_METRIC_GRADIENT_SIMILARITY));
  return r;
}

Record jacobian_record(const cicreg_jacobian_report& j) {
  Record r("jacobian");
  r.set_number("pct_nonpositive", j.pct_nonpositive);
  r.set_number("min_det", j.min_det);
  r.set_number("max_det", j.max_det);
  r.set_optional("mean_log_jd", finite_or_null(j.mean_log_jd));
  r.set_optional("std_log_jd", finite_or_null(j.std_log_jd));
  r.set_number("mean_magnitude", j.mean_magnitude);
  r.set_number("max_magnitude", j.max_magnitude);
  return r;
}

Record trace_record(const cicreg_trace_entry& t) {
  Record r("trace");
  r.set("level", std::to_string(t.level));
  r.set("iteration", std::to_string(t.iteration));
  r.set_number("similarity", t.loss.similarity);
  r.set_number("smoothness", t.loss.smoothness);
  r.set_number("image_cycle", t.loss.image_cycle);
  r.set_number("flow_cycle", t.loss.flow_cycle);
  r.set_number("jacobian_penalty", t.loss.jacobian_penalty);
  r.set_number("total", t.loss.total);
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Cycle-consistent deformable registration of 3-D volumes", "cicreg"};
  app.set_version_flag("--version", std::string(cicreg_version()));
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output path or directory");
    c->add_option("--jobs", o.jobs, "Worker threads (results do not depend on it)")->check(CLI::NonNegativeNumber);
  };
  auto* reg = app.add_subcommand("register", "Register a moving volume to a fixed volume");
  reg->add_option("--moving", o.moving, "Moving volume");
  reg->add_option("--fixed", o.fixed, "Fixed volume");
  reg->add_option("--config", o.config, "key=value configuration file");
  reg->add_option("--set", o.sets, "Configuration override key=value (repeatable)");
  reg->add_option("--seed", o.seed, "Recorded seed")->check(CLI::NonNegativeNumber);
  reg->add_option("--format", o.format, "Output format: mvol, nii or nii.gz");
  add_common(reg);

  auto* warp = app.add_subcommand("warp", "Warp a volume with a displacement field");
  warp->add_option("--moving", o.moving, "Volume to warp");
  warp->add_option("--field", o.field, "3-channel displacement field");
  add_common(warp);

  auto* eval = app.add_subcommand("evaluate", "Compute the metric record of a warped/fixed pair");
  eval->add_option("--warped,--moving", o.moving, "Warped volume");
  eval->add_option("--fixed", o.fixed, "Fixed volume");
  add_common(eval);

  auto* jac = app.add_subcommand("jacobian", "Audit the Jacobian of a displacement field");
  jac->add_option("--field", o.field, "3-channel displacement field");
  jac->add_option("--format", o.format, "Map format: mvol, nii or nii.gz");
  add_common(jac);

  auto* rep = app.add_subcommand("report", "Aggregate per-pair records");
  rep->add_option("records", o.inputs, "Record files or glob patterns");
  add_common(rep);

  auto* sl = app.add_subcommand("slices", "Export center slices as PGM");
  sl->add_option("volume", o.inputs, "Input volume");
  sl->add_option("--moving", o.moving, "Input volume");
  add_common(sl);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << cicreg_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, e.what());
    return kExitUsage;
  }

  try {
    if (o.jobs > 0) cicreg_set_num_threads(o.jobs);
    if (*reg) return cmd_register(o);
    if (*warp) return cmd_warp(o);
    if (*eval) return cmd_evaluate(o);
    if (*jac) return cmd_jacobian(o);
    if (*rep) return cmd_report(o);
    return cmd_slices(o);
  } catch (const Failure& f) {
    diagnose(err, f.what());
    return f.code();
  } catch (const std::exception& e) {
    diagnose(err, e.what());
    return kExitInternal;
  }
}

}  // namespace cicreg::cli
