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

#include <vector>

#include "grid.hpp"
#include "volume.hpp"

namespace cicreg {

struct SsimParams {
  double window_sigma = 1.5;
  int window_radius = 3;  // 7^3 support
  double c1 = 1e-4;       // (0.01 L)^2, L = 1
  double c2 = 9e-4;       // (0.03 L)^2
  int num_scales = 0;     // 0 selects adaptive_num_scales()
  std::vector<double> scale_weights;  // empty selects the standard weights

  void validate() const;
};

// Standard five-scale MS-SSIM exponents.
inline constexpr double kMsSsimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

// min(3, largest s with min_dim / 2^(s-1) >= window size); 0 if none.
int adaptive_num_scales(Dims d, int window_radius = 3);

// Scale count and exponents actually used for volumes of dims d.
int resolve_num_scales(const SsimParams& p, Dims d);
std::vector<double> resolve_scale_weights(const SsimParams& p, int scales);

struct SsimResult {
  double mean = 0.0;
  Grid map;
};

SsimResult ssim_map(const Volume& a, const Volume& b, const SsimParams& p = {});
double ms_ssim(const Volume& a, const Volume& b, const SsimParams& p = {});

namespace detail {

enum class SsimTerm { kFull, kContrastStructure };

SsimResult ssim_map(const Grid& a, const Grid& b, const SsimParams& p, SsimTerm term = SsimTerm::kFull);

// Mean of the SSIM (or contrast-structure) map, and optionally its
// gradient with respect to a.
double ssim_mean(const Grid& a, const Grid& b, const SsimParams& p, SsimTerm term, Grid* grad_a);

// MS-SSIM and optionally d/da.
double ms_ssim(const Grid& a, const Grid& b, const SsimParams& p, Grid* grad_a);

}  // namespace detail

}  // namespace cicreg
