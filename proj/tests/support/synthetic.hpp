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

#include <cmath>
#include <cstdint>
#include <random>

#include "field.hpp"
#include "volume.hpp"

namespace cicreg::synth {

// Smooth random volume in [0, 1].
inline Volume smooth_random_volume(Dims d, std::uint32_t seed, double sigma = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);
  Volume v(d);
  for (auto& x : v.data()) x = uni(rng);
  return minmax_normalize(gaussian_smooth(v, sigma));
}

// Brain-like phantom: a bright skull shell around an ellipsoid of smooth
// random "tissue" texture with two dark ventricles, normalized to [0, 1].
inline Volume brain_phantom(int n, std::uint32_t seed = 7, double texture_sigma = 1.0) {
  const Volume tex = smooth_random_volume(Dims{n, n, n}, seed, texture_sigma);
  Volume v(Dims{n, n, n});
  const double c = 0.5 * (n - 1);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double px = (x - c) / (0.42 * n), py = (y - c) / (0.36 * n), pz = (z - c) / (0.34 * n);
        const double r = std::sqrt(px * px + py * py + pz * pz);
        double val = 0.0;
        if (r < 1.0) {
          val = 0.5 + 0.35 * std::tanh(8.0 * (tex.at(x, y, z) - 0.5));
          const double vx = std::abs(px) - 0.22, vy = py / 0.5, vz = pz / 0.35;
          if (vx * vx / 0.02 + vy * vy + vz * vz < 0.6) val = 0.1;
        } else if (r < 1.12) {
          val = 0.95;
        }
        v.at(x, y, z) = static_cast<float>(val);
      }
  return minmax_normalize(gaussian_smooth(v, 0.6));
}

// u(x) = amplitude * dir * exp(-|x - center|^2 / (2 sigma^2)), dir unit length.
inline DisplacementField gaussian_bump(Dims d, double amplitude, double sigma, std::array<double, 3> dir,
                                       std::array<double, 3> center) {
  const double nrm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  DisplacementField u(d);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
        const double w = amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * sigma * sigma));
        const std::size_t i = d.index(x, y, z);
        for (int c = 0; c < 3; ++c) u(c, i) = w * dir[c] / nrm;
      }
  return u;
}

inline Volume random_volume(Dims d, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);
  Volume v(d);
  for (auto& x : v.data()) x = uni(rng);
  return v;
}

// Smooth random field with components scaled to at most `amplitude` voxels.
inline DisplacementField smooth_random_field(Dims d, std::uint32_t seed, double amplitude, double sigma = 1.5) {
  DisplacementField u(d);
  for (int c = 0; c < 3; ++c) {
    Volume comp = smooth_random_volume(d, seed * 3 + c, sigma);
    for (std::size_t i = 0; i < u.voxels(); ++i) u(c, i) = amplitude * (2.0 * comp[i] - 1.0);
  }
  return u;
}

}  // namespace cicreg::synth
