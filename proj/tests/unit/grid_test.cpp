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

#include <random>

#include "grid.hpp"

using namespace cicreg;

namespace {

Grid random_grid(Dims d, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Grid g(d);
  for (double& x : g.data) x = uni(rng);
  return g;
}

double dot(const Grid& a, const Grid& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

}  // namespace

TEST(Grid, GaussianKernelSumsToOne) {
  for (double sigma : {0.5, 1.0, 1.5, 3.0}) {
    const auto k = gaussian_kernel(sigma, 3);
    double s = 0;
    for (double w : k) s += w;
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_EQ(k.size(), 7u);
  }
}

// <A x, y> = <x, A^T y> for each linear operator and its adjoint.
TEST(Grid, SeparableFilterAdjointIdentity) {
  const Dims d{7, 5, 6};
  const auto k = gaussian_kernel(1.5, 3);
  const Grid x = random_grid(d, 1), y = random_grid(d, 2);
  EXPECT_NEAR(dot(separable_filter(x, k), y), dot(x, separable_filter_adjoint(y, k)), 1e-12);
}

TEST(Grid, DownsampleAdjointIdentity) {
  for (Dims d : {Dims{8, 8, 8}, Dims{7, 6, 5}}) {
    const Grid x = random_grid(d, 3), y = random_grid(halved(d), 4);
    EXPECT_NEAR(dot(downsample2x(x), y), dot(x, downsample2x_adjoint(y, d)), 1e-12);
  }
}

TEST(Grid, DecimateAdjointIdentity) {
  const Dims d{5, 4, 3};
  const Grid x = random_grid(d, 5), y = random_grid(halved(d), 6);
  EXPECT_NEAR(dot(decimate2(x), y), dot(x, decimate2_adjoint(y, d)), 1e-14);
}

TEST(Grid, HalvedIsCeil) { EXPECT_EQ(halved({7, 8, 1}), (Dims{4, 4, 1})); }
