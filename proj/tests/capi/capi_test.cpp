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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <string>
#include <vector>

#include "cicreg/cicreg.h"

namespace fs = std::filesystem;

namespace {

std::vector<float> ramp(int n) {
  std::vector<float> v(static_cast<std::size_t>(n) * n * n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(i % 97) / 96.0f;
  return v;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("cicreg_capi_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(CApi, Version) { EXPECT_STREQ(cicreg_version(), "0.1.0"); }

TEST(CApi, InvalidArgumentsSetLastError) {
  cicreg_volume* v = nullptr;
  EXPECT_EQ(cicreg_volume_create(0, 4, 4, nullptr, &v), CICREG_ERR_INVALID_INPUT);
  EXPECT_EQ(v, nullptr);
  EXPECT_NE(std::string(cicreg_last_error()).find("positive"), std::string::npos);
  EXPECT_EQ(cicreg_volume_create(4, 4, 4, nullptr, nullptr), CICREG_ERR_INVALID_INPUT);
  ASSERT_EQ(cicreg_volume_create(4, 4, 4, nullptr, &v), CICREG_OK);
  EXPECT_STREQ(cicreg_last_error(), "");
  cicreg_volume_free(v);
  cicreg_volume_free(nullptr);
  cicreg_field_free(nullptr);
  cicreg_config_free(nullptr);
  cicreg_result_free(nullptr);
}

TEST(CApi, VolumeAccessors) {
  const auto data = ramp(5);
  cicreg_volume* v = nullptr;
  ASSERT_EQ(cicreg_volume_create(5, 5, 5, data.data(), &v), CICREG_OK);
  int d[3];
  cicreg_volume_dims(v, d);
  EXPECT_EQ(d[0], 5);
  EXPECT_EQ(cicreg_volume_size(v), 125u);
  EXPECT_EQ(cicreg_volume_data(v)[7], data[7]);
  const double sp[3] = {1.5, 2.0, 2.5};
  cicreg_volume_set_spacing(v, sp);
  double got[3];
  cicreg_volume_spacing(v, got);
  EXPECT_EQ(got[2], 2.5);
  cicreg_volume_data_mut(v)[0] = 0.25f;
  EXPECT_EQ(cicreg_volume_data(v)[0], 0.25f);
  cicreg_volume_free(v);
}

TEST(CApi, IoStatusCodes) {
  cicreg_volume* v = nullptr;
  EXPECT_EQ(cicreg_volume_load(temp_path("missing.mvol").c_str(), &v), CICREG_ERR_IO);
  EXPECT_EQ(v, nullptr);
  const auto bad = temp_path("bad.mvol");
  std::FILE* f = std::fopen(bad.c_str(), "wb");
  std::fputs("NOPE and more bytes to fill a header", f);
  std::fclose(f);
  EXPECT_EQ(cicreg_volume_load(bad.c_str(), &v), CICREG_ERR_FORMAT);
  EXPECT_NE(std::string(cicreg_last_error()).find("offset"), std::string::npos);
  fs::remove(bad);
}

TEST(CApi, VolumeAndFieldRoundTrip) {
  const auto data = ramp(6);
  cicreg_volume* v = nullptr;
  ASSERT_EQ(cicreg_volume_create(6, 6, 6, data.data(), &v), CICREG_OK);
  const auto p = temp_path("v.nii.gz");
  ASSERT_EQ(cicreg_volume_save(v, p.c_str()), CICREG_OK);
  cicreg_volume* w = nullptr;
  ASSERT_EQ(cicreg_volume_load(p.c_str(), &w), CICREG_OK);
  EXPECT_EQ(std::vector<float>(cicreg_volume_data(w), cicreg_volume_data(w) + 216), data);
  fs::remove(p);

  std::vector<double> planar(3 * 216);
  for (std::size_t i = 0; i < planar.size(); ++i) planar[i] = std::sin(0.1 * static_cast<double>(i));
  cicreg_field* u = nullptr;
  ASSERT_EQ(cicreg_field_create(6, 6, 6, planar.data(), &u), CICREG_OK);
  const auto q = temp_path("u.mvol");
  ASSERT_EQ(cicreg_field_save(u, q.c_str()), CICREG_OK);
  cicreg_field* u2 = nullptr;
  ASSERT_EQ(cicreg_field_load(q.c_str(), &u2), CICREG_OK);
  for (std::size_t i = 0; i < planar.size(); ++i)
    ASSERT_EQ(cicreg_field_data(u2)[i], static_cast<double>(static_cast<float>(planar[i])));
  // A scalar volume is not a field.
  const auto r = temp_path("scalar.mvol");
  ASSERT_EQ(cicreg_volume_save(v, r.c_str()), CICREG_OK);
  cicreg_field* u3 = nullptr;
  EXPECT_EQ(cicreg_field_load(r.c_str(), &u3), CICREG_ERR_INVALID_INPUT);
  EXPECT_NE(std::string(cicreg_last_error()).find("3"), std::string::npos);
  fs::remove(q);
  fs::remove(r);
  cicreg_field_free(u);
  cicreg_field_free(u2);
  cicreg_volume_free(v);
  cicreg_volume_free(w);
}

TEST(CApi, WarpComposeMagnitude) {
  const auto data = ramp(6);
  cicreg_volume* v = nullptr;
  cicreg_field* id = nullptr;
  ASSERT_EQ(cicreg_volume_create(6, 6, 6, data.data(), &v), CICREG_OK);
  ASSERT_EQ(cicreg_field_create(6, 6, 6, nullptr, &id), CICREG_OK);
  cicreg_volume* w = nullptr;
  ASSERT_EQ(cicreg_warp(v, id, &w), CICREG_OK);
  EXPECT_EQ(std::vector<float>(cicreg_volume_data(w), cicreg_volume_data(w) + 216), data);
  cicreg_field* c = nullptr;
  ASSERT_EQ(cicreg_compose(id, id, &c), CICREG_OK);
  for (std::size_t i = 0; i < 3 * 216; ++i) ASSERT_EQ(cicreg_field_data(c)[i], 0.0);
  cicreg_volume* m = nullptr;
  ASSERT_EQ(cicreg_field_magnitude(c, &m), CICREG_OK);
  EXPECT_EQ(cicreg_volume_data(m)[100], 0.0f);

  cicreg_field* other = nullptr;
  ASSERT_EQ(cicreg_field_create(6, 6, 7, nullptr, &other), CICREG_OK);
  cicreg_field* bad = nullptr;
  EXPECT_EQ(cicreg_compose(id, other, &bad), CICREG_ERR_INVALID_INPUT);
  EXPECT_EQ(bad, nullptr);
  for (auto* p : {id, c, other}) cicreg_field_free(p);
  for (auto* p : {v, w, m}) cicreg_volume_free(p);
}

TEST(CApi, ConfigGetSet) {
  cicreg_config* cfg = nullptr;
  ASSERT_EQ(cicreg_config_create(&cfg), CICREG_OK);
  EXPECT_EQ(cicreg_config_key_count(), 18u);
  EXPECT_STREQ(cicreg_config_key(0), "levels");
  EXPECT_EQ(cicreg_config_key(18), nullptr);
  char buf[64];
  size_t need = 0;
  ASSERT_EQ(cicreg_config_get(cfg, "iters_per_level", buf, sizeof buf, &need), CICREG_OK);
  EXPECT_STREQ(buf, "100,100,50");
  EXPECT_EQ(need, 11u);
  char tiny[4];
  ASSERT_EQ(cicreg_config_get(cfg, "iters_per_level", tiny, sizeof tiny, &need), CICREG_OK);
  EXPECT_STREQ(tiny, "100");
  ASSERT_EQ(cicreg_config_set(cfg, "lambda_jac", "0"), CICREG_OK);
  ASSERT_EQ(cicreg_config_load_text(cfg, "levels=1\niters_per_level=5\n"), CICREG_OK);
  ASSERT_EQ(cicreg_config_get(cfg, "levels", buf, sizeof buf, nullptr), CICREG_OK);
  EXPECT_STREQ(buf, "1");
  EXPECT_EQ(cicreg_config_set(cfg, "nope", "1"), CICREG_ERR_INVALID_INPUT);
  EXPECT_NE(std::string(cicreg_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(cicreg_config_set(cfg, "levels", "x"), CICREG_ERR_INVALID_INPUT);
  cicreg_config_free(cfg);
}

TEST(CApi, RegisterAndInspect) {
  const int n = 14;
  std::vector<float> a(n * n * n);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        a[x + n * (y + n * z)] = static_cast<float>(0.5 + 0.4 * std::sin(0.5 * x) * std::cos(0.4 * y + 0.3 * z));
  cicreg_volume* m = nullptr;
  cicreg_volume* f = nullptr;
  ASSERT_EQ(cicreg_volume_create(n, n, n, a.data(), &m), CICREG_OK);
  ASSERT_EQ(cicreg_volume_create(n, n, n, a.data(), &f), CICREG_OK);
  cicreg_config* cfg = nullptr;
  ASSERT_EQ(cicreg_config_create(&cfg), CICREG_OK);
  ASSERT_EQ(cicreg_config_load_text(cfg, "levels=2\niters_per_level=4,4\n"), CICREG_OK);
  cicreg_result* r = nullptr;
  ASSERT_EQ(cicreg_register(m, f, cfg, &r), CICREG_OK);
  EXPECT_EQ(cicreg_result_levels(r), 2);
  EXPECT_GE(cicreg_result_iterations_run(r, 0), 1);
  EXPECT_EQ(cicreg_result_iterations_run(r, 2), -1);
  EXPECT_GE(cicreg_result_converged(r, 1), 0);
  const size_t len = cicreg_result_trace_length(r);
  ASSERT_GT(len, 0u);
  cicreg_trace_entry e;
  ASSERT_EQ(cicreg_result_trace_entry(r, len - 1, &e), CICREG_OK);
  EXPECT_EQ(e.level, 0);
  EXPECT_EQ(cicreg_result_trace_entry(r, len, &e), CICREG_ERR_INVALID_INPUT);

  cicreg_metric_report rep;
  ASSERT_EQ(cicreg_evaluate(cicreg_result_warped_mf(r), f, &rep), CICREG_OK);
  EXPECT_EQ(rep.defined, 0xffu);
  EXPECT_GT(rep.ssim, 0.99);
  cicreg_jacobian_report jr;
  ASSERT_EQ(cicreg_jacobian_report_compute(cicreg_result_field_mf(r), &jr), CICREG_OK);
  EXPECT_EQ(jr.pct_nonpositive, 0.0);
  double res = -1;
  ASSERT_EQ(cicreg_flow_cycle_residual_mean(cicreg_result_field_mf(r), cicreg_result_field_fm(r), &res), CICREG_OK);
  EXPECT_GE(res, 0.0);

  cicreg_volume* small = nullptr;
  ASSERT_EQ(cicreg_volume_create(n, n, n - 1, nullptr, &small), CICREG_OK);
  cicreg_result* r2 = nullptr;
  EXPECT_EQ(cicreg_register(m, small, cfg, &r2), CICREG_ERR_INVALID_INPUT);
  EXPECT_EQ(r2, nullptr);
  cicreg_result_free(r);
  cicreg_config_free(cfg);
  for (auto* p : {m, f, small}) cicreg_volume_free(p);
}

TEST(CApi, UndefinedMetricsAndWarnings) {
  cicreg_volume* c = nullptr;
  ASSERT_EQ(cicreg_volume_create(6, 6, 6, nullptr, &c), CICREG_OK);
  cicreg_metric_report rep;
  ASSERT_EQ(cicreg_evaluate(c, c, &rep), CICREG_OK);
  EXPECT_FALSE(rep.defined & CICREG_METRIC_NCC);
  EXPECT_TRUE(std::isnan(rep.ncc));
  EXPECT_TRUE(rep.defined & CICREG_METRIC_MSE);
  EXPECT_TRUE(std::isinf(rep.psnr));
  EXPECT_NE(std::string(cicreg_last_warnings()), "");
  cicreg_volume_free(c);
}

TEST(CApi, JacobianMaps) {
  std::vector<double> planar(3 * 125, 0.0);
  for (int i = 0; i < 125; ++i) planar[i] = 0.1 * (i % 5);
  cicreg_field* u = nullptr;
  ASSERT_EQ(cicreg_field_create(5, 5, 5, planar.data(), &u), CICREG_OK);
  std::vector<double> det(125);
  ASSERT_EQ(cicreg_jacobian_determinant(u, det.data()), CICREG_OK);
  for (double d : det) EXPECT_NEAR(d, 1.1, 1e-12);
  cicreg_volume *dv = nullptr, *lv = nullptr, *mv = nullptr;
  ASSERT_EQ(cicreg_jacobian_maps(u, 1e-6, &dv, &lv, &mv), CICREG_OK);
  EXPECT_FLOAT_EQ(cicreg_volume_data(lv)[3], static_cast<float>(std::log(1.1)));
  EXPECT_FLOAT_EQ(cicreg_volume_data(mv)[4], 0.4f);
  cicreg_field* tiny = nullptr;
  ASSERT_EQ(cicreg_field_create(2, 5, 5, nullptr, &tiny), CICREG_OK);
  EXPECT_EQ(cicreg_jacobian_determinant(tiny, det.data()), CICREG_ERR_INVALID_INPUT);
  for (auto* p : {dv, lv, mv}) cicreg_volume_free(p);
  cicreg_field_free(u);
  cicreg_field_free(tiny);
}
