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

#include "metrics.hpp"
#include "optimizer.hpp"
#include "support/synthetic.hpp"
#include "warp.hpp"

using namespace cicreg;

namespace {

double mean_magnitude(const DisplacementField& u) {
  const Volume m = field_magnitude(u);
  double s = 0.0;
  for (float v : m.data()) s += v;
  return s / static_cast<double>(m.size());
}

RegistrationConfig quick(int levels, int iters) {
  RegistrationConfig cfg;
  cfg.levels = levels;
  cfg.iters_per_level.assign(levels, iters);
  return cfg;
}

}  // namespace

TEST(Adam, ZeroGradientLeavesParameters) {
  std::vector<double> p{1.0, -2.0, 3.0}, g(3, 0.0);
  AdamState s(3);
  adam_step(p, g, s, 0.5, 0.9, 0.999, 1e-8);
  EXPECT_EQ(p, (std::vector<double>{1.0, -2.0, 3.0}));
  EXPECT_EQ(s.t, 1);
}

TEST(Adam, FirstStepHasStepSizeMagnitude) {
  std::vector<double> p(3, 0.0), g{2.0, -0.01, 40.0};
  AdamState s(3);
  adam_step(p, g, s, 0.5, 0.9, 0.999, 1e-8);
  EXPECT_NEAR(p[0], -0.5, 1e-8);
  EXPECT_NEAR(p[1], 0.5, 1e-6);
  EXPECT_NEAR(p[2], -0.5, 1e-8);
}

TEST(Adam, SecondStepNoLarger) {
  std::vector<double> p(1, 0.0), g{3.0};
  AdamState s(1);
  adam_step(p, g, s, 0.1, 0.9, 0.999, 1e-8);
  const double first = -p[0];
  adam_step(p, g, s, 0.1, 0.9, 0.999, 1e-8);
  const double second = -p[0] - first;
  EXPECT_GT(second, 0.0);
  EXPECT_LE(second, first + 1e-15);
}

TEST(Config, StepSizeHalvesPerFinerLevel) {
  const RegistrationConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.step_for_level(2), 0.5);
  EXPECT_DOUBLE_EQ(cfg.step_for_level(1), 0.25);
  EXPECT_DOUBLE_EQ(cfg.step_for_level(0), 0.125);
}

TEST(Config, Validation) {
  RegistrationConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.iters_per_level = {10, 10};
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.iters_per_level = {10, 0, 10};
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.beta1 = 1.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.step_size = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.levels = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(Pyramids, SingleLevelIsInput) {
  const Volume m = synth::random_volume({9, 9, 9}, 1), f = synth::random_volume({9, 9, 9}, 2);
  const auto p = build_pyramids(m, f, 1);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_TRUE(p[0].moving == m);
  EXPECT_TRUE(p[0].fixed == f);
}

TEST(Pyramids, CeilHalving) {
  const auto p = build_pyramids(Volume(Dims{32, 32, 32}), Volume(Dims{32, 32, 32}), 3);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].moving.dims(), (Dims{32, 32, 32}));
  EXPECT_EQ(p[1].moving.dims(), (Dims{16, 16, 16}));
  EXPECT_EQ(p[2].fixed.dims(), (Dims{8, 8, 8}));
}

TEST(Pyramids, ConstantStaysConstant) {
  const Volume c(Dims{28, 30, 32}, {}, 0.375f);
  for (const auto& l : build_pyramids(c, c, 3))
    for (float v : l.moving.data()) ASSERT_EQ(v, 0.375f);
}

TEST(Pyramids, InfeasibleThrows) {
  EXPECT_THROW(build_pyramids(Volume(Dims{27, 32, 32}), Volume(Dims{27, 32, 32}), 3), InvalidInput);
  EXPECT_NO_THROW(build_pyramids(Volume(Dims{28, 32, 32}), Volume(Dims{28, 32, 32}), 3));
}

TEST(Register, DimMismatchThrows) {
  EXPECT_THROW(register_pair(Volume(Dims{16, 16, 16}), Volume(Dims{16, 16, 15}), quick(1, 1)), InvalidInput);
}

TEST(Register, IdenticalPairStaysNearZero) {
  const Volume v = synth::brain_phantom(16);
  const RegistrationResult r = register_pair(v, v, quick(2, 20));
  EXPECT_LT(mean_magnitude(r.u_mf), 0.05);
  EXPECT_LT(mean_magnitude(r.u_fm), 0.05);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_LE(r.trace.back().loss.total, r.trace.front().loss.total);
}

TEST(Register, Deterministic) {
  const Volume m = synth::brain_phantom(16);
  const Volume f = warp_volume(m, synth::gaussian_bump(m.dims(), 1.5, 3.0, {1, 0, 0}, {7.5, 7.5, 7.5}));
  const auto cfg = quick(2, 15);
  const RegistrationResult a = register_pair(m, f, cfg), b = register_pair(m, f, cfg);
  EXPECT_TRUE(a.u_mf == b.u_mf);
  EXPECT_TRUE(a.u_fm == b.u_fm);
  EXPECT_TRUE(a.warped_mf == b.warped_mf);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].loss.total, b.trace[i].loss.total);
}

TEST(Register, WarpedOutputsAreRecomputed) {
  const Volume m = synth::brain_phantom(16);
  const Volume f = warp_volume(m, synth::gaussian_bump(m.dims(), 1.5, 3.0, {0, 1, 0}, {7.5, 7.5, 7.5}));
  const RegistrationResult r = register_pair(m, f, quick(1, 10));
  EXPECT_TRUE(r.warped_mf == warp_volume(m, r.u_mf));
  EXPECT_TRUE(r.warped_fm == warp_volume(f, r.u_fm));
}

TEST(Register, ImprovesAlignment) {
  const Volume m = synth::brain_phantom(24);
  const Volume f = warp_volume(m, synth::gaussian_bump(m.dims(), 1.5, 4.0, {1, 1, 0}, {11.5, 11.5, 11.5}));
  const RegistrationResult r = register_pair(m, f, quick(1, 40));
  EXPECT_LT(mse(r.warped_mf, f), mse(m, f));
}

TEST(Register, ZeroPenaltyFixedPoint) {
  const Volume v = synth::brain_phantom(16);
  RegistrationConfig cfg = quick(1, 10);
  cfg.weights = {0.0, 0.0, 0.0, 0.0};
  const RegistrationResult r = register_pair(v, v, cfg);
  double worst = 0.0;
  for (double x : r.u_mf.raw()) worst = std::max(worst, std::abs(x));
  for (double x : r.u_fm.raw()) worst = std::max(worst, std::abs(x));
  EXPECT_LE(worst, 1e-5 * r.iterations_run[0]);
}

TEST(Register, TraceBookkeeping) {
  const Volume m = synth::brain_phantom(16);
  const Volume f = warp_volume(m, synth::gaussian_bump(m.dims(), 2.0, 3.0, {0, 0, 1}, {7.5, 7.5, 7.5}));
  const RegistrationResult r = register_pair(m, f, quick(2, 12));
  ASSERT_EQ(r.iterations_run.size(), 2u);
  ASSERT_EQ(r.converged.size(), 2u);
  EXPECT_EQ(r.trace.front().level, 1);
  EXPECT_EQ(r.trace.back().level, 0);
  for (const auto& e : r.trace) EXPECT_LT(e.iteration, r.iterations_run[e.level]);
}

TEST(Register, FinestLevelTraceNonIncreasing) {
  const Volume m = synth::brain_phantom(16);
  const Volume f = warp_volume(m, synth::gaussian_bump(m.dims(), 2.0, 3.0, {1, 0, 1}, {7.5, 7.5, 7.5}));
  const RegistrationResult r = register_pair(m, f, quick(2, 30));
  std::vector<double> fine;
  for (const auto& e : r.trace)
    if (e.level == 0) fine.push_back(e.loss.total);
  ASSERT_GE(fine.size(), 10u);
  for (std::size_t i = fine.size() - 10 + 1; i < fine.size(); ++i)
    EXPECT_LE(fine[i], fine[i - 1] * (1.0 + 1e-4)) << i;
}

TEST(Register, EarlyStopMarksConvergence) {
  const Volume v = synth::brain_phantom(16);
  RegistrationConfig cfg = quick(1, 200);
  cfg.rel_tol = 1e-1;
  const RegistrationResult r = register_pair(v, v, cfg);
  EXPECT_TRUE(r.converged[0]);
  EXPECT_LT(r.iterations_run[0], 200);
}
