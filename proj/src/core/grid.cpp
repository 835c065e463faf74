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

#include "grid.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace cicreg {

std::string to_string(const Dims& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

std::vector<double> gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0) || radius < 0) throw InvalidInput("gaussian_kernel: sigma must be > 0 and radius >= 0");
  std::vector<double> w(2 * static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-static_cast<double>(k) * k / (2.0 * sigma * sigma));
    w[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

namespace {

// Calls fn(base, stride, n) once per 1-D line along `axis`.
template <class Fn>
void for_each_line(Dims d, int axis, Fn&& fn) {
  const int n = d[axis];
  const std::size_t stride = d.stride(axis);
  const int a1 = axis == 0 ? 1 : 0;
  const int a2 = axis == 2 ? 1 : 2;
  const int n1 = d[a1];
  const int n2 = d[a2];
  parallel_for(n2, [&](std::ptrdiff_t j2) {
    for (int j1 = 0; j1 < n1; ++j1) {
      int c[3] = {0, 0, 0};
      c[a1] = j1;
      c[a2] = static_cast<int>(j2);
      fn(d.index(c[0], c[1], c[2]), stride, n);
    }
  });
}

}  // namespace

void convolve_axis(const Grid& in, Grid& out, int axis, std::span<const double> kernel) {
  const int r = static_cast<int>(kernel.size() / 2);
  out.dims = in.dims;
  out.data.assign(in.size(), 0.0);
  for_each_line(in.dims, axis, [&](std::size_t base, std::size_t stride, int n) {
    const double* src = in.data.data() + base;
    double* dst = out.data.data() + base;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int j = std::clamp(i + k, 0, n - 1);
        acc += kernel[static_cast<std::size_t>(k + r)] * src[static_cast<std::size_t>(j) * stride];
      }
      dst[static_cast<std::size_t>(i) * stride] = acc;
    }
  });
}

void convolve_axis_adjoint(const Grid& in, Grid& out, int axis, std::span<const double> kernel) {
  const int r = static_cast<int>(kernel.size() / 2);
  out.dims = in.dims;
  out.data.assign(in.size(), 0.0);
  // Each line is independent, so the scatter stays within one worker.
  for_each_line(in.dims, axis, [&](std::size_t base, std::size_t stride, int n) {
    const double* src = in.data.data() + base;
    double* dst = out.data.data() + base;
    for (int i = 0; i < n; ++i) {
      const double g = src[static_cast<std::size_t>(i) * stride];
      for (int k = -r; k <= r; ++k) {
        const int j = std::clamp(i + k, 0, n - 1);
        dst[static_cast<std::size_t>(j) * stride] += kernel[static_cast<std::size_t>(k + r)] * g;
      }
    }
  });
}

Grid separable_filter(const Grid& in, std::span<const double> kernel) {
  Grid a, b;
  convolve_axis(in, a, 0, kernel);
  convolve_axis(a, b, 1, kernel);
  convolve_axis(b, a, 2, kernel);
  return a;
}

Grid separable_filter_adjoint(const Grid& in, std::span<const double> kernel) {
  Grid a, b;
  convolve_axis_adjoint(in, a, 2, kernel);
  convolve_axis_adjoint(a, b, 1, kernel);
  convolve_axis_adjoint(b, a, 0, kernel);
  return a;
}

Dims halved(Dims d) { return {(d.nx + 1) / 2, (d.ny + 1) / 2, (d.nz + 1) / 2}; }

Grid decimate2(const Grid& in) {
  Grid out(halved(in.dims));
  const Dims od = out.dims;
  parallel_for(od.nz, [&](std::ptrdiff_t z) {
    for (int y = 0; y < od.ny; ++y)
      for (int x = 0; x < od.nx; ++x) out(x, y, static_cast<int>(z)) = in(2 * x, 2 * y, 2 * static_cast<int>(z));
  });
  return out;
}

Grid decimate2_adjoint(const Grid& coarse, Dims fine) {
  Grid out(fine);
  const Dims cd = coarse.dims;
  parallel_for(cd.nz, [&](std::ptrdiff_t z) {
    for (int y = 0; y < cd.ny; ++y)
      for (int x = 0; x < cd.nx; ++x) out(2 * x, 2 * y, 2 * static_cast<int>(z)) = coarse(x, y, static_cast<int>(z));
  });
  return out;
}

namespace {
const std::vector<double>& pyramid_kernel() {
  static const std::vector<double> k = gaussian_kernel(1.0, 3);
  return k;
}
}  // namespace

Grid downsample2x(const Grid& in) {
  if (in.dims.nx < 2 || in.dims.ny < 2 || in.dims.nz < 2)
    throw InvalidInput("downsample2x: every dimension must be >= 2, got " + to_string(in.dims));
  return decimate2(separable_filter(in, pyramid_kernel()));
}

Grid downsample2x_adjoint(const Grid& coarse, Dims fine) {
  return separable_filter_adjoint(decimate2_adjoint(coarse, fine), pyramid_kernel());
}

}  // namespace cicreg
