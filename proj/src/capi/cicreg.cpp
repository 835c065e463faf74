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

#include "cicreg/cicreg.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "../core/config.hpp"
#include "../core/io.hpp"
#include "../core/jacobian.hpp"
#include "../core/losses.hpp"
#include "../core/metrics.hpp"
#include "../core/optimizer.hpp"
#include "../core/parallel.hpp"
#include "../core/warp.hpp"

struct cicreg_volume {
  cicreg::Volume v;
};
struct cicreg_field {
  cicreg::DisplacementField u;
};
struct cicreg_config {
  cicreg::RegistrationConfig cfg;
};
struct cicreg_result {
  cicreg::RegistrationResult r;
  cicreg_field u_mf;
  cicreg_field u_fm;
  cicreg_volume warped_mf;
  cicreg_volume warped_fm;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_warnings;

// Runs fn, translating exceptions into status codes and the thread-local message.
template <class Fn>
cicreg_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CICREG_OK;
  } catch (const cicreg::InvalidInput& e) {
    g_last_error = e.what();
    return CICREG_ERR_INVALID_INPUT;
  } catch (const cicreg::IoError& e) {
    g_last_error = e.what();
    return CICREG_ERR_IO;
  } catch (const cicreg::FormatError& e) {
    g_last_error = e.what();
    return CICREG_ERR_FORMAT;
  } catch (const cicreg::UndefinedMetric& e) {
    g_last_error = e.what();
    return CICREG_ERR_UNDEFINED_METRIC;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CICREG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CICREG_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw cicreg::InvalidInput(std::string(what) + " must not be NULL");
}

template <class T>
void require_out(T** out) {
  require(out, "output pointer");
}

cicreg::Dims dims_of(int nx, int ny, int nz) {
  const cicreg::Dims d{nx, ny, nz};
  if (!d.positive()) throw cicreg::InvalidInput("dimensions must be positive, got " + cicreg::to_string(d));
  return d;
}

double or_nan(const std::optional<double>& v, uint32_t bit, uint32_t& mask) {
  if (!v) return std::numeric_limits<double>::quiet_NaN();
  mask |= bit;
  return *v;
}

cicreg_loss_breakdown to_c(const cicreg::LossBreakdown& b) {
  return {b.similarity, b.smoothness, b.image_cycle, b.flow_cycle, b.jacobian_penalty, b.total};
}

}  // namespace

extern "C" {

const char* cicreg_version(void) { return CICREG_VERSION; }
const char* cicreg_last_error(void) { return g_last_error.c_str(); }
const char* cicreg_last_warnings(void) { return g_last_warnings.c_str(); }
void cicreg_set_num_threads(int n) { cicreg::set_num_threads(n); }

// ---- volumes

cicreg_status cicreg_volume_create(int nx, int ny, int nz, const float* data, cicreg_volume** out) {
  return guard([&] {
    require_out(out);
    const auto d = dims_of(nx, ny, nz);
    std::vector<float> v(d.count(), 0.0f);
    if (data) std::memcpy(v.data(), data, v.size() * sizeof(float));
    *out = new cicreg_volume{cicreg::Volume(d, std::move(v))};
  });
}

cicreg_status cicreg_volume_load(const char* path, cicreg_volume** out) {
  return guard([&] {
    require(path, "path");
    require_out(out);
    auto v = std::make_unique<cicreg_volume>(cicreg_volume{cicreg::load_volume(path)});
    *out = v.release();
  });
}

cicreg_status cicreg_volume_save(const cicreg_volume* v, const char* path) {
  return guard([&] {
    require(v, "volume");
    require(path, "path");
    cicreg::save_volume(v->v, path);
  });
}

void cicreg_volume_free(cicreg_volume* v) { delete v; }

void cicreg_volume_dims(const cicreg_volume* v, int dims[3]) {
  dims[0] = v->v.dims().nx;
  dims[1] = v->v.dims().ny;
  dims[2] = v->v.dims().nz;
}

void cicreg_volume_spacing(const cicreg_volume* v, double spacing[3]) {
  spacing[0] = v->v.spacing().sx;
  spacing[1] = v->v.spacing().sy;
  spacing[2] = v->v.spacing().sz;
}

void cicreg_volume_set_spacing(cicreg_volume* v, const double spacing[3]) {
  v->v.set_spacing({spacing[0], spacing[1], spacing[2]});
}

size_t cicreg_volume_size(const cicreg_volume* v) { return v->v.size(); }
const float* cicreg_volume_data(const cicreg_volume* v) { return v->v.data().data(); }
float* cicreg_volume_data_mut(cicreg_volume* v) { return v->v.data().data(); }

cicreg_status cicreg_volume_normalize(const cicreg_volume* v, cicreg_volume** out) {
  return guard([&] {
    require(v, "volume");
    require_out(out);
    *out = new cicreg_volume{cicreg::minmax_normalize(v->v)};
  });
}

cicreg_status cicreg_volume_crop_or_pad(const cicreg_volume* v, const int dims[3], float fill, cicreg_volume** out) {
  return guard([&] {
    require(v, "volume");
    require(dims, "dims");
    require_out(out);
    *out = new cicreg_volume{cicreg::crop_or_pad(v->v, {dims[0], dims[1], dims[2]}, fill)};
  });
}

cicreg_status cicreg_volume_smooth(const cicreg_volume* v, double sigma, cicreg_volume** out) {
  return guard([&] {
    require(v, "volume");
    require_out(out);
    *out = new cicreg_volume{cicreg::gaussian_smooth(v->v, sigma)};
  });
}

cicreg_status cicreg_volume_downsample(const cicreg_volume* v, cicreg_volume** out) {
  return guard([&] {
    require(v, "volume");
    require_out(out);
    *out = new cicreg_volume{cicreg::downsample2x(v->v)};
  });
}

// ---- fields

cicreg_status cicreg_field_create(int nx, int ny, int nz, const double* planar, cicreg_field** out) {
  return guard([&] {
    require_out(out);
    const auto d = dims_of(nx, ny, nz);
    std::vector<double> v(3 * d.count(), 0.0);
    if (planar) std::memcpy(v.data(), planar, v.size() * sizeof(double));
    *out = new cicreg_field{cicreg::DisplacementField(d, std::move(v))};
  });
}

cicreg_status cicreg_field_load(const char* path, cicreg_field** out) {
  return guard([&] {
    require(path, "path");
    require_out(out);
    *out = new cicreg_field{cicreg::load_field(path)};
  });
}

cicreg_status cicreg_field_save(const cicreg_field* u, const char* path) {
  return guard([&] {
    require(u, "field");
    require(path, "path");
    cicreg::save_field(u->u, path);
  });
}

void cicreg_field_free(cicreg_field* u) { delete u; }

void cicreg_field_dims(const cicreg_field* u, int dims[3]) {
  dims[0] = u->u.dims().nx;
  dims[1] = u->u.dims().ny;
  dims[2] = u->u.dims().nz;
}

const double* cicreg_field_data(const cicreg_field* u) { return u->u.raw().data(); }
double* cicreg_field_data_mut(cicreg_field* u) { return u->u.raw().data(); }

cicreg_status cicreg_warp(const cicreg_volume* moving, const cicreg_field* u, cicreg_volume** out) {
  return guard([&] {
    require(moving, "moving");
    require(u, "field");
    require_out(out);
    *out = new cicreg_volume{cicreg::warp_volume(moving->v, u->u)};
  });
}

cicreg_status cicreg_compose(const cicreg_field* outer, const cicreg_field* inner, cicreg_field** out) {
  return guard([&] {
    require(outer, "outer");
    require(inner, "inner");
    require_out(out);
    *out = new cicreg_field{cicreg::compose(outer->u, inner->u)};
  });
}

cicreg_status cicreg_field_magnitude(const cicreg_field* u, cicreg_volume** out) {
  return guard([&] {
    require(u, "field");
    require_out(out);
    *out = new cicreg_volume{cicreg::field_magnitude(u->u)};
  });
}

// ---- registration

cicreg_status cicreg_config_create(cicreg_config** out) {
  return guard([&] {
    require_out(out);
    *out = new cicreg_config{};
  });
}

void cicreg_config_free(cicreg_config* cfg) { delete cfg; }

cicreg_status cicreg_config_set(cicreg_config* cfg, const char* key, const char* value) {
  return guard([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    cicreg::apply_config_value(cfg->cfg, key, value);
  });
}

cicreg_status cicreg_config_load_text(cicreg_config* cfg, const char* text) {
  return guard([&] {
    require(cfg, "config");
    require(text, "text");
    cicreg::apply_config_text(cfg->cfg, text);
  });
}

cicreg_status cicreg_config_get(const cicreg_config* cfg, const char* key, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    require(cfg, "config");
    require(key, "key");
    const std::string v = cicreg::config_value(cfg->cfg, key);
    if (needed) *needed = v.size() + 1;
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, v.size());
      std::memcpy(buf, v.data(), n);
      buf[n] = '\0';
    }
  });
}

size_t cicreg_config_key_count(void) { return cicreg::config_keys().size(); }

const char* cicreg_config_key(size_t i) {
  const auto& keys = cicreg::config_keys();
  return i < keys.size() ? keys[i].c_str() : nullptr;
}

cicreg_status cicreg_register(const cicreg_volume* moving, const cicreg_volume* fixed, const cicreg_config* cfg,
                              cicreg_result** out) {
  return guard([&] {
    require(moving, "moving");
    require(fixed, "fixed");
    require_out(out);
    const cicreg::RegistrationConfig c = cfg ? cfg->cfg : cicreg::RegistrationConfig{};
    auto res = std::make_unique<cicreg_result>();
    res->r = cicreg::register_pair(moving->v, fixed->v, c);
    res->u_mf.u = res->r.u_mf;
    res->u_fm.u = res->r.u_fm;
    res->warped_mf.v = res->r.warped_mf;
    res->warped_fm.v = res->r.warped_fm;
    *out = res.release();
  });
}

void cicreg_result_free(cicreg_result* r) { delete r; }
const cicreg_field* cicreg_result_field_mf(const cicreg_result* r) { return &r->u_mf; }
const cicreg_field* cicreg_result_field_fm(const cicreg_result* r) { return &r->u_fm; }
const cicreg_volume* cicreg_result_warped_mf(const cicreg_result* r) { return &r->warped_mf; }
const cicreg_volume* cicreg_result_warped_fm(const cicreg_result* r) { return &r->warped_fm; }
size_t cicreg_result_trace_length(const cicreg_result* r) { return r->r.trace.size(); }

cicreg_status cicreg_result_trace_entry(const cicreg_result* r, size_t i, cicreg_trace_entry* out) {
  return guard([&] {
    require(r, "result");
    require(out, "output pointer");
    if (i >= r->r.trace.size()) throw cicreg::InvalidInput("trace index out of range");
    const auto& t = r->r.trace[i];
    *out = {t.level, t.iteration, to_c(t.loss)};
  });
}

int cicreg_result_levels(const cicreg_result* r) { return static_cast<int>(r->r.iterations_run.size()); }

int cicreg_result_iterations_run(const cicreg_result* r, int level) {
  if (level < 0 || level >= cicreg_result_levels(r)) return -1;
  return r->r.iterations_run[static_cast<size_t>(level)];
}

int cicreg_result_converged(const cicreg_result* r, int level) {
  if (level < 0 || level >= cicreg_result_levels(r)) return -1;
  return r->r.converged[static_cast<size_t>(level)] ? 1 : 0;
}

// ---- evaluation

cicreg_status cicreg_evaluate(const cicreg_volume* warped, const cicreg_volume* fixed, cicreg_metric_report* out) {
  return guard([&] {
    require(warped, "warped");
    require(fixed, "fixed");
    require(out, "output pointer");
    const cicreg::MetricReport m = cicreg::evaluate_all(warped->v, fixed->v);
    cicreg_metric_report r{};
    r.ssim = or_nan(m.ssim, CICREG_METRIC_SSIM, r.defined);
    r.ncc = or_nan(m.ncc, CICREG_METRIC_NCC, r.defined);
    r.mi = or_nan(m.mi, CICREG_METRIC_MI, r.defined);
    r.psnr = or_nan(m.psnr, CICREG_METRIC_PSNR, r.defined);
    r.mse = or_nan(m.mse, CICREG_METRIC_MSE, r.defined);
    r.mae = or_nan(m.mae, CICREG_METRIC_MAE, r.defined);
    r.dice = or_nan(m.dice, CICREG_METRIC_DICE, r.defined);
    r.gradient_similarity = or_nan(m.gradient_similarity, CICREG_METRIC_GRADIENT_SIMILARITY, r.defined);
    std::string w;
    for (const auto& s : m.warnings) {
      if (!w.empty()) w += "; ";
      w += s;
    }
    g_last_warnings = std::move(w);
    *out = r;
  });
}

cicreg_status cicreg_jacobian_report_compute(const cicreg_field* u, cicreg_jacobian_report* out) {
  return guard([&] {
    require(u, "field");
    require(out, "output pointer");
    const auto r = cicreg::jacobian_report(u->u);
    *out = {r.pct_nonpositive, r.min_det, r.max_det, r.mean_log_jd, r.std_log_jd, r.mean_magnitude, r.max_magnitude};
  });
}

cicreg_status cicreg_jacobian_determinant(const cicreg_field* u, double* out) {
  return guard([&] {
    require(u, "field");
    require(out, "output pointer");
    const auto det = cicreg::jacobian_determinant_field(u->u);
    std::memcpy(out, det.data.data(), det.size() * sizeof(double));
  });
}

cicreg_status cicreg_jacobian_maps(const cicreg_field* u, double log_floor, cicreg_volume** det,
                                   cicreg_volume** log_jd, cicreg_volume** magnitude) {
  return guard([&] {
    require(u, "field");
    const cicreg::Spacing s = u->u.spacing();
    auto d = std::make_unique<cicreg_volume>(cicreg_volume{cicreg::to_volume(cicreg::jacobian_determinant_field(u->u), s)});
    auto l = std::make_unique<cicreg_volume>(cicreg_volume{cicreg::to_volume(cicreg::log_jd_map(u->u, log_floor), s)});
    auto m = std::make_unique<cicreg_volume>(cicreg_volume{cicreg::field_magnitude(u->u)});
    if (det) *det = d.release();
    if (log_jd) *log_jd = l.release();
    if (magnitude) *magnitude = m.release();
  });
}

cicreg_status cicreg_flow_cycle_residual_mean(const cicreg_field* u_mf, const cicreg_field* u_fm, double* out) {
  return guard([&] {
    require(u_mf, "u_mf");
    require(u_fm, "u_fm");
    require(out, "output pointer");
    const auto r = cicreg::flow_cycle_residual(u_mf->u, u_fm->u);
    const std::size_t n = r.voxels();
    *out = cicreg::ordered_sum(n, [&](std::size_t i) {
      return std::sqrt(r(0, i) * r(0, i) + r(1, i) * r(1, i) + r(2, i) * r(2, i));
    }) / static_cast<double>(n);
  });
}

}  // extern "C"
