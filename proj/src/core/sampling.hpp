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

#include <algorithm>
#include <array>
#include <cmath>

#include "parallel.hpp"
#include "types.hpp"

namespace cicreg::detail {

// Trilinear cell lookup with replicate clamping. Coordinates outside
// [0, n-1] are clamped first; the clamped flag zeroes the derivative.
struct Cell {
  std::array<int, 3> lo{};
  std::array<int, 3> hi{};
  std::array<double, 3> frac{};
  std::array<bool, 3> clamped{};
};

inline Cell locate(const Dims& d, double px, double py, double pz) {
  Cell c;
  const double p[3] = {px, py, pz};
  for (int a = 0; a < 3; ++a) {
    const int n = d[a];
    double q = p[a];
    const double top = static_cast<double>(n - 1);
    c.clamped[a] = !(q >= 0.0 && q <= top);
    if (c.clamped[a]) q = q < 0.0 || std::isnan(q) ? 0.0 : top;
    if (n == 1) {
      c.lo[a] = c.hi[a] = 0;
      c.frac[a] = 0.0;
      c.clamped[a] = true;
      continue;
    }
    int i0 = static_cast<int>(std::floor(q));
    i0 = std::min(i0, n - 2);
    c.lo[a] = i0;
    c.hi[a] = i0 + 1;
    c.frac[a] = q - i0;
  }
  return c;
}

template <class T>
inline double sample(const T* v, const Dims& d, const Cell& c) {
  const double fx = c.frac[0], fy = c.frac[1], fz = c.frac[2];
  auto at = [&](int x, int y, int z) { return static_cast<double>(v[d.index(x, y, z)]); };
  const double c00 = at(c.lo[0], c.lo[1], c.lo[2]) * (1.0 - fx) + at(c.hi[0], c.lo[1], c.lo[2]) * fx;
  const double c10 = at(c.lo[0], c.hi[1], c.lo[2]) * (1.0 - fx) + at(c.hi[0], c.hi[1], c.lo[2]) * fx;
  const double c01 = at(c.lo[0], c.lo[1], c.hi[2]) * (1.0 - fx) + at(c.hi[0], c.lo[1], c.hi[2]) * fx;
  const double c11 = at(c.lo[0], c.hi[1], c.hi[2]) * (1.0 - fx) + at(c.hi[0], c.hi[1], c.hi[2]) * fx;
  const double c0 = c00 * (1.0 - fy) + c10 * fy;
  const double c1 = c01 * (1.0 - fy) + c11 * fy;
  return c0 * (1.0 - fz) + c1 * fz;
}

// Spatial derivative of the trilinear interpolant inside the cell.
template <class T>
inline std::array<double, 3> sample_gradient(const T* v, const Dims& d, const Cell& c) {
  const double fx = c.frac[0], fy = c.frac[1], fz = c.frac[2];
  auto at = [&](int x, int y, int z) { return static_cast<double>(v[d.index(x, y, z)]); };
  const double v000 = at(c.lo[0], c.lo[1], c.lo[2]), v100 = at(c.hi[0], c.lo[1], c.lo[2]);
  const double v010 = at(c.lo[0], c.hi[1], c.lo[2]), v110 = at(c.hi[0], c.hi[1], c.lo[2]);
  const double v001 = at(c.lo[0], c.lo[1], c.hi[2]), v101 = at(c.hi[0], c.lo[1], c.hi[2]);
  const double v011 = at(c.lo[0], c.hi[1], c.hi[2]), v111 = at(c.hi[0], c.hi[1], c.hi[2]);
  std::array<double, 3> g{};
  if (!c.clamped[0])
    g[0] = (1 - fy) * (1 - fz) * (v100 - v000) + fy * (1 - fz) * (v110 - v010) + (1 - fy) * fz * (v101 - v001) +
           fy * fz * (v111 - v011);
  if (!c.clamped[1])
    g[1] = (1 - fx) * (1 - fz) * (v010 - v000) + fx * (1 - fz) * (v110 - v100) + (1 - fx) * fz * (v011 - v001) +
           fx * fz * (v111 - v101);
  if (!c.clamped[2])
    g[2] = (1 - fx) * (1 - fy) * (v001 - v000) + fx * (1 - fy) * (v101 - v100) + (1 - fx) * fy * (v011 - v010) +
           fx * fy * (v111 - v110);
  return g;
}

// Transpose of sample(): distributes w over the eight cell corners.
inline void scatter(double* out, const Dims& d, const Cell& c, double w) {
  const double fx = c.frac[0], fy = c.frac[1], fz = c.frac[2];
  const double wz[2] = {1.0 - fz, fz};
  const double wy[2] = {1.0 - fy, fy};
  const double wx[2] = {1.0 - fx, fx};
  const int zs[2] = {c.lo[2], c.hi[2]};
  const int ys[2] = {c.lo[1], c.hi[1]};
  const int xs[2] = {c.lo[0], c.hi[0]};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) out[d.index(xs[i], ys[j], zs[k])] += w * wx[i] * wy[j] * wz[k];
}

// Calls fn(index, x, y, z) for every voxel, parallel over z slabs.
template <class Fn>
inline void for_each_voxel(const Dims& d, Fn&& fn) {
  parallel_for(d.nz, [&](std::ptrdiff_t zz) {
    const int z = static_cast<int>(zz);
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) fn(d.index(x, y, z), x, y, z);
  });
}

}  // namespace cicreg::detail
