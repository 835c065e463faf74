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

#include <span>
#include <vector>

#include "types.hpp"

namespace cicreg {

// Double-precision scalar grid used for all intermediate loss and metric
// computations. Same x-fastest layout as Volume.
struct Grid {
  Dims dims;
  std::vector<double> data;

  Grid() = default;
  explicit Grid(Dims d, double fill = 0.0) : dims(d), data(d.count(), fill) {}

  double& operator()(int x, int y, int z) { return data[dims.index(x, y, z)]; }
  double operator()(int x, int y, int z) const { return data[dims.index(x, y, z)]; }
  std::size_t size() const noexcept { return data.size(); }
};

// Normalized Gaussian taps exp(-k^2 / 2 sigma^2), k in [-radius, radius].
std::vector<double> gaussian_kernel(double sigma, int radius);

// 1-D convolution along one axis with replicate borders, and its transpose.
void convolve_axis(const Grid& in, Grid& out, int axis, std::span<const double> kernel);
void convolve_axis_adjoint(const Grid& in, Grid& out, int axis, std::span<const double> kernel);

// Separable filtering along x, y, z in that order.
Grid separable_filter(const Grid& in, std::span<const double> kernel);
Grid separable_filter_adjoint(const Grid& in, std::span<const double> kernel);

// Keeps every second sample starting at 0; output dims are ceil(n/2).
Grid decimate2(const Grid& in);
Grid decimate2_adjoint(const Grid& coarse, Dims fine);

Dims halved(Dims d);

// Gaussian sigma 1 smoothing followed by decimation, and its transpose.
Grid downsample2x(const Grid& in);
Grid downsample2x_adjoint(const Grid& coarse, Dims fine);

}  // namespace cicreg
