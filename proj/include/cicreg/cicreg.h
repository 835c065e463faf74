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

/*
 * cicreg C API.
 *
 * All objects are opaque handles created and released through this header.
 * Functions returning cicreg_status report failures with a code and a
 * thread-local message retrievable through cicreg_last_error(). Output
 * handles are only written on success. Borrowed pointers (marked below)
 * stay valid until their owner is freed.
 */
#ifndef CICREG_CICREG_H
#define CICREG_CICREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CICREG_BUILDING)
#    define CICREG_API __declspec(dllexport)
#  else
#    define CICREG_API __declspec(dllimport)
#  endif
#else
#  define CICREG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cicreg_status {
  CICREG_OK = 0,
  CICREG_ERR_INVALID_INPUT = 1,    /* bad argument, dimension mismatch, bad config */
  CICREG_ERR_IO = 2,               /* file could not be opened, read or written */
  CICREG_ERR_FORMAT = 3,           /* malformed or unsupported file content */
  CICREG_ERR_UNDEFINED_METRIC = 4, /* metric undefined for the inputs */
  CICREG_ERR_INTERNAL = 5
} cicreg_status;

typedef struct cicreg_volume cicreg_volume;
typedef struct cicreg_field cicreg_field;
typedef struct cicreg_config cicreg_config;
typedef struct cicreg_result cicreg_result;

typedef struct cicreg_loss_breakdown {
  double similarity;
  double smoothness;
  double image_cycle;
  double flow_cycle;
  double jacobian_penalty;
  double total;
} cicreg_loss_breakdown;

typedef struct cicreg_trace_entry {
  int level; /* 0 = finest */
  int iteration;
  cicreg_loss_breakdown loss;
} cicreg_trace_entry;

/* Bits of cicreg_metric_report.defined. */
enum {
  CICREG_METRIC_SSIM = 1u << 0,
  CICREG_METRIC_NCC = 1u << 1,
  CICREG_METRIC_MI = 1u << 2,
  CICREG_METRIC_PSNR = 1u << 3,
  CICREG_METRIC_MSE = 1u << 4,
  CICREG_METRIC_MAE = 1u << 5,
  CICREG_METRIC_DICE = 1u << 6,
  CICREG_METRIC_GRADIENT_SIMILARITY = 1u << 7
};

typedef struct cicreg_metric_report {
  double ssim;
  double ncc;
  double mi;   /* nats */
  double psnr; /* dB; +inf when mse == 0 */
  double mse;
  double mae;
  double dice;
  double gradient_similarity;
  uint32_t defined; /* CICREG_METRIC_* bits; undefined values are NaN */
} cicreg_metric_report;

typedef struct cicreg_jacobian_report {
  double pct_nonpositive;
  double min_det;
  double max_det;
  double mean_log_jd; /* NaN when no voxel has det > 0 */
  double std_log_jd;
  double mean_magnitude; /* voxels */
  double max_magnitude;
} cicreg_jacobian_report;

CICREG_API const char* cicreg_version(void);
/* Message of the most recent failed call on this thread ("" if none). */
CICREG_API const char* cicreg_last_error(void);
/* Semicolon-separated warnings of the most recent cicreg_evaluate on this thread. */
CICREG_API const char* cicreg_last_warnings(void);
/* Worker threads for internal loops; results do not depend on it. */
CICREG_API void cicreg_set_num_threads(int n);

/* ---- volumes ---------------------------------------------------------- */

/* data may be NULL (zero-filled); otherwise nx*ny*nz floats, x fastest. */
CICREG_API cicreg_status cicreg_volume_create(int nx, int ny, int nz, const float* data, cicreg_volume** out);
/* Format from the extension: .mvol, .nii, .nii.gz. */
CICREG_API cicreg_status cicreg_volume_load(const char* path, cicreg_volume** out);
CICREG_API cicreg_status cicreg_volume_save(const cicreg_volume* v, const char* path);
CICREG_API void cicreg_volume_free(cicreg_volume* v);
CICREG_API void cicreg_volume_dims(const cicreg_volume* v, int dims[3]);
CICREG_API void cicreg_volume_spacing(const cicreg_volume* v, double spacing[3]);
CICREG_API void cicreg_volume_set_spacing(cicreg_volume* v, const double spacing[3]);
CICREG_API size_t cicreg_volume_size(const cicreg_volume* v);
/* Borrowed. */
CICREG_API const float* cicreg_volume_data(const cicreg_volume* v);
CICREG_API float* cicreg_volume_data_mut(cicreg_volume* v);

CICREG_API cicreg_status cicreg_volume_normalize(const cicreg_volume* v, cicreg_volume** out);
CICREG_API cicreg_status cicreg_volume_crop_or_pad(const cicreg_volume* v, const int dims[3], float fill,
                                                   cicreg_volume** out);
CICREG_API cicreg_status cicreg_volume_smooth(const cicreg_volume* v, double sigma, cicreg_volume** out);
CICREG_API cicreg_status cicreg_volume_downsample(const cicreg_volume* v, cicreg_volume** out);

/* ---- displacement fields --------------------------------------------- */

/* planar may be NULL (identity); otherwise 3*nx*ny*nz doubles: all ux, all uy, all uz. */
CICREG_API cicreg_status cicreg_field_create(int nx, int ny, int nz, const double* planar, cicreg_field** out);
/* The file must hold exactly 3 channels, else CICREG_ERR_INVALID_INPUT. */
CICREG_API cicreg_status cicreg_field_load(const char* path, cicreg_field** out);
CICREG_API cicreg_status cicreg_field_save(const cicreg_field* u, const char* path);
CICREG_API void cicreg_field_free(cicreg_field* u);
CICREG_API void cicreg_field_dims(const cicreg_field* u, int dims[3]);
/* Borrowed; 3*nx*ny*nz doubles. */
CICREG_API const double* cicreg_field_data(const cicreg_field* u);
CICREG_API double* cicreg_field_data_mut(cicreg_field* u);

/* out(x) = moving(x + u(x)) on the field's grid. */
CICREG_API cicreg_status cicreg_warp(const cicreg_volume* moving, const cicreg_field* u, cicreg_volume** out);
/* Displacement of phi_outer o phi_inner. */
CICREG_API cicreg_status cicreg_compose(const cicreg_field* outer, const cicreg_field* inner, cicreg_field** out);
CICREG_API cicreg_status cicreg_field_magnitude(const cicreg_field* u, cicreg_volume** out);

/* ---- registration ------------------------------------------------------ */

CICREG_API cicreg_status cicreg_config_create(cicreg_config** out);
CICREG_API void cicreg_config_free(cicreg_config* cfg);
/* Keys: levels, iters_per_level, step_size, beta1, beta2, epsilon, rel_tol,
 * lambda_smooth, lambda_img_cyc, lambda_flow_cyc, lambda_jac, window_sigma,
 * window_radius, c1, c2, num_scales, scale_weights, seed. */
CICREG_API cicreg_status cicreg_config_set(cicreg_config* cfg, const char* key, const char* value);
/* Parses key=value lines. */
CICREG_API cicreg_status cicreg_config_load_text(cicreg_config* cfg, const char* text);
/* Writes the NUL-terminated value into buf; *needed gets the full length + 1. */
CICREG_API cicreg_status cicreg_config_get(const cicreg_config* cfg, const char* key, char* buf, size_t cap,
                                           size_t* needed);
CICREG_API size_t cicreg_config_key_count(void);
CICREG_API const char* cicreg_config_key(size_t i);

CICREG_API cicreg_status cicreg_register(const cicreg_volume* moving, const cicreg_volume* fixed,
                                         const cicreg_config* cfg, cicreg_result** out);
CICREG_API void cicreg_result_free(cicreg_result* r);
/* Borrowed. */
CICREG_API const cicreg_field* cicreg_result_field_mf(const cicreg_result* r);
CICREG_API const cicreg_field* cicreg_result_field_fm(const cicreg_result* r);
CICREG_API const cicreg_volume* cicreg_result_warped_mf(const cicreg_result* r);
CICREG_API const cicreg_volume* cicreg_result_warped_fm(const cicreg_result* r);
CICREG_API size_t cicreg_result_trace_length(const cicreg_result* r);
CICREG_API cicreg_status cicreg_result_trace_entry(const cicreg_result* r, size_t i, cicreg_trace_entry* out);
CICREG_API int cicreg_result_levels(const cicreg_result* r);
CICREG_API int cicreg_result_iterations_run(const cicreg_result* r, int level);
CICREG_API int cicreg_result_converged(const cicreg_result* r, int level);

/* ---- evaluation ---------------------------------------------------------- */

CICREG_API cicreg_status cicreg_evaluate(const cicreg_volume* warped, const cicreg_volume* fixed,
                                         cicreg_metric_report* out);
CICREG_API cicreg_status cicreg_jacobian_report_compute(const cicreg_field* u, cicreg_jacobian_report* out);
/* det(I + grad u) per voxel into out (nx*ny*nz doubles). */
CICREG_API cicreg_status cicreg_jacobian_determinant(const cicreg_field* u, double* out);
/* Float32 maps for export: determinant, ln(max(det, log_floor)), |u| in voxels. */
CICREG_API cicreg_status cicreg_jacobian_maps(const cicreg_field* u, double log_floor, cicreg_volume** det,
                                              cicreg_volume** log_jd, cicreg_volume** magnitude);
/* Mean |u_FM(x) + u_MF(x + u_FM(x))| over the grid. */
CICREG_API cicreg_status cicreg_flow_cycle_residual_mean(const cicreg_field* u_mf, const cicreg_field* u_fm,
                                                         double* out);

#ifdef __cplusplus
}
#endif

#endif /* CICREG_CICREG_H */
