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
#include "oracles/oracles.hpp"
#include "support/synthetic.hpp"

using namespace cicreg;

namespace {

std::vector<double> vals(const Volume& v) { return {v.data().begin(), v.data().end()}; }
oracle::Vol ov(const Volume& v) { return oracle::from(v.dims().nx, v.dims().ny, v.dims().nz, v.data()); }

Volume shifted(const Volume& v, float c) {
  Volume o = v;
  for (auto& x : o.data()) x += c;
  return o;
}

}  // namespace

TEST(Ncc, Examples) {
  const Volume v = synth::random_volume({8, 8, 8}, 1);
  EXPECT_NEAR(ncc(v, v), 1.0, 1e-12);
  Volume inv = v;
  for (auto& x : inv.data()) x = 1.0f - x;
  EXPECT_NEAR(ncc(v, inv), -1.0, 1e-6);
}

TEST(Ncc, ConstantCases) {
  const Volume c(Dims{4, 4, 4}, {}, 0.3f), v = synth::random_volume({4, 4, 4}, 2);
  EXPECT_THROW(ncc(c, c), UndefinedMetric);
  EXPECT_EQ(ncc(c, v), 0.0);
  EXPECT_EQ(ncc(v, c), 0.0);
}

TEST(Ncc, AffineInvariance) {
  const Volume a = synth::random_volume({8, 8, 8}, 3), b = synth::random_volume({8, 8, 8}, 4);
  Volume s = a;
  for (auto& x : s.data()) x = 0.5f * x + 0.25f;
  EXPECT_NEAR(ncc(s, b), ncc(a, b), 1e-6);
}

TEST(MutualInformation, UniformSelfIsLog32) {
  Volume v(Dims{32, 4, 1});
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 32; ++x) v.at(x, y, 0) = (x + 0.5f) / 32.0f;
  EXPECT_NEAR(mutual_information(v, v), std::log(32.0), 1e-12);
  EXPECT_NEAR(std::log(32.0), 3.4657, 1e-4);
}

TEST(MutualInformation, ConstantGivesZero) {
  const Volume c(Dims{4, 4, 4}, {}, 0.7f), v = synth::random_volume({4, 4, 4}, 5);
  EXPECT_EQ(mutual_information(c, v), 0.0);
}

TEST(MutualInformation, OneGoesToTopBin) {
  const Volume a(Dims{2, 1, 1}, std::vector<float>{1.0f, 31.0f / 32.0f});
  EXPECT_NEAR(mutual_information(a, a), 0.0, 1e-15);
  const Volume b(Dims{2, 1, 1}, std::vector<float>{1.0f, 0.0f});
  EXPECT_NEAR(mutual_information(b, b), std::log(2.0), 1e-15);
}

TEST(MutualInformation, SelfEqualsEntropy) {
  for (std::uint32_t seed = 1; seed < 6; ++seed) {
    const Volume v = synth::random_volume({8, 8, 8}, seed);
    EXPECT_NEAR(mutual_information(v, v), oracle::entropy(vals(v)), 1e-12);
  }
}

TEST(ErrorMetrics, Examples) {
  const Volume v = synth::random_volume({4, 4, 4}, 6);
  EXPECT_EQ(mse(v, v), 0.0);
  EXPECT_EQ(mae(v, v), 0.0);
  EXPECT_TRUE(std::isinf(psnr(v, v)));
  const Volume a(Dims{4, 4, 4}, {}, 0.5), b(Dims{4, 4, 4}, {}, 0.4);
  EXPECT_NEAR(mse(a, b), 0.01, 1e-8);
  EXPECT_NEAR(mae(a, b), 0.1, 1e-7);
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-5);
}

TEST(ErrorMetrics, DimMismatchThrows) {
  EXPECT_THROW(mse(Volume(Dims{2, 2, 2}), Volume(Dims{2, 2, 3})), InvalidInput);
}

TEST(Dice, Examples) {
  Volume a(Dims{10, 10, 2}), b(Dims{10, 10, 2});
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) a.at(x, y, 0) = 0.9f;
  EXPECT_EQ(dice(a, a), 1.0);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 10; ++x) b.at(x, y, 0) = 0.9f;
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 10; ++x) b.at(x, y, 1) = 0.9f;
  EXPECT_DOUBLE_EQ(dice(a, b), 0.8);
  EXPECT_EQ(dice(Volume(Dims{3, 3, 3}), Volume(Dims{3, 3, 3})), 1.0);
}

TEST(Dice, InvariantToChangesThatKeepMasks) {
  const Volume a = synth::random_volume({8, 8, 8}, 7), b = synth::random_volume({8, 8, 8}, 8);
  Volume c = a;
  for (auto& x : c.data()) x = x > 0.1f ? 0.5f + 0.5f * x : 0.5f * x;
  EXPECT_EQ(dice(c, b), dice(a, b));
}

TEST(GradientSimilarity, SelfAndShift) {
  const Volume v = synth::smooth_random_volume({8, 8, 8}, 9);
  EXPECT_NEAR(gradient_similarity(v, v), 1.0, 1e-12);
  EXPECT_NEAR(gradient_similarity(v, shifted(v, 0.3f)), 1.0, 1e-6);
  EXPECT_THROW(gradient_similarity(Volume(Dims{4, 4, 4}), Volume(Dims{4, 4, 4})), UndefinedMetric);
}

TEST(Metrics, SymmetricUnderSwap) {
  for (std::uint32_t seed = 1; seed < 6; ++seed) {
    const Volume a = synth::random_volume({8, 8, 8}, seed), b = synth::random_volume({8, 8, 8}, seed + 50);
    EXPECT_EQ(mse(a, b), mse(b, a));
    EXPECT_EQ(mae(a, b), mae(b, a));
    EXPECT_EQ(mutual_information(a, b), mutual_information(b, a));
    EXPECT_EQ(dice(a, b), dice(b, a));
    EXPECT_EQ(ncc(a, b), ncc(b, a));
    EXPECT_EQ(gradient_similarity(a, b), gradient_similarity(b, a));
  }
}

TEST(Metrics, RescalingInvariance) {
  Volume a = synth::smooth_random_volume({8, 8, 8}, 10);
  const Volume b = synth::smooth_random_volume({8, 8, 8}, 11);
  // Dyadic data keeps the rescaled copy exact in float.
  for (auto& x : a.data()) x = std::round(x * 1024.0f) / 1024.0f;
  Volume s = a;
  for (auto& x : s.data()) x = 0.5f * x + 0.25f;
  EXPECT_NEAR(gradient_similarity(s, b), gradient_similarity(a, b), 1e-10);
  EXPECT_NEAR(ncc(s, b), ncc(a, b), 1e-10);
}

TEST(Metrics, BruteForceOracleAgreement) {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    const Volume a = synth::smooth_random_volume({8, 8, 8}, 100 + seed, 0.7);
    const Volume b = synth::smooth_random_volume({8, 8, 8}, 200 + seed, 0.7);
    const auto va = vals(a), vb = vals(b);
    EXPECT_NEAR(ssim(a, b), oracle::ssim(ov(a), ov(b)).mean_full, 1e-6);
    EXPECT_NEAR(ncc(a, b), oracle::pearson(va, vb), 1e-10);
    EXPECT_NEAR(mutual_information(a, b), oracle::mutual_information(va, vb), 1e-10);
    EXPECT_NEAR(mse(a, b), oracle::mse(va, vb), 1e-12);
    EXPECT_NEAR(mae(a, b), oracle::mae(va, vb), 1e-12);
    EXPECT_NEAR(psnr(a, b), oracle::psnr(va, vb), 1e-12);
    EXPECT_NEAR(dice(a, b), oracle::dice(va, vb), 1e-12);
    EXPECT_NEAR(gradient_similarity(a, b),
                oracle::pearson(oracle::gradient_magnitude(ov(a)), oracle::gradient_magnitude(ov(b))), 1e-10);
  }
}

TEST(EvaluateAll, IdenticalPair) {
  const Volume v = synth::smooth_random_volume({8, 8, 8}, 12);
  const MetricReport r = evaluate_all(v, v);
  EXPECT_NEAR(*r.ssim, 1.0, 1e-7);
  EXPECT_NEAR(*r.ncc, 1.0, 1e-12);
  EXPECT_EQ(*r.mse, 0.0);
  EXPECT_EQ(*r.mae, 0.0);
  EXPECT_EQ(*r.dice, 1.0);
  EXPECT_TRUE(std::isinf(*r.psnr));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(EvaluateAll, FieldsEqualStandaloneOperations) {
  const Volume a = synth::random_volume({8, 8, 8}, 13), b = synth::random_volume({8, 8, 8}, 14);
  const MetricReport r = evaluate_all(a, b);
  EXPECT_EQ(*r.ssim, ssim(a, b));
  EXPECT_EQ(*r.ncc, ncc(a, b));
  EXPECT_EQ(*r.mi, mutual_information(a, b));
  EXPECT_EQ(*r.psnr, psnr(a, b));
  EXPECT_EQ(*r.mse, mse(a, b));
  EXPECT_EQ(*r.mae, mae(a, b));
  EXPECT_EQ(*r.dice, dice(a, b));
  EXPECT_EQ(*r.gradient_similarity, gradient_similarity(a, b));
}

TEST(EvaluateAll, UndefinedMetricsBecomeWarnings) {
  const Volume c(Dims{4, 4, 4}, {}, 0.5f);
  const MetricReport r = evaluate_all(c, c);
  EXPECT_FALSE(r.ncc.has_value());
  EXPECT_FALSE(r.gradient_similarity.has_value());
  EXPECT_EQ(r.warnings.size(), 2u);
  EXPECT_TRUE(r.mse.has_value());
}

TEST(EvaluateAll, RangesHold) {
  for (std::uint32_t seed = 1; seed < 6; ++seed) {
    const MetricReport r =
        evaluate_all(synth::random_volume({8, 8, 8}, seed), synth::random_volume({8, 8, 8}, seed + 9));
    EXPECT_GE(*r.ssim, 0.0 - 1.0);
    EXPECT_LE(*r.ssim, 1.0);
    EXPECT_GE(*r.dice, 0.0);
    EXPECT_LE(*r.dice, 1.0);
    EXPECT_GE(*r.mi, 0.0);
    EXPECT_LE(std::abs(*r.ncc), 1.0);
    EXPECT_LE(std::abs(*r.gradient_similarity), 1.0);
  }
}
