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

#include "volume.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace cicreg {

Volume::Volume(Dims dims, Spacing spacing, float fill) : dims_(dims), spacing_(spacing) {
  if (!dims.positive()) throw InvalidInput("Volume: dimensions must be positive, got " + to_string(dims));
  data_.assign(dims.count(), fill);
}

Volume::Volume(Dims dims, std::vector<float> data, Spacing spacing)
    : dims_(dims), spacing_(spacing), data_(std::move(data)) {
  if (!dims.positive()) throw InvalidInput("Volume: dimensions must be positive, got " + to_string(dims));
  if (data_.size() != dims.count())
    throw InvalidInput("Volume: data length " + std::to_string(data_.size()) + " does not match dims " +
                       to_string(dims));
}

std::size_t MaskVolume::count_set() const noexcept {
  std::size_t n = 0;
  for (auto b : data) n += b;
  return n;
}

Grid to_grid(const Volume& v) {
  Grid g(v.dims());
  std::copy(v.data().begin(), v.data().end(), g.data.begin());
  return g;
}

Volume to_volume(const Grid& g, Spacing spacing) {
  std::vector<float> d(g.size());
  std::transform(g.data.begin(), g.data.end(), d.begin(), [](double x) { return static_cast<float>(x); });
  return Volume(g.dims, std::move(d), spacing);
}

Volume minmax_normalize(const Volume& v) {
  if (v.size() == 0) throw InvalidInput("minmax_normalize: empty volume");
  const auto [lo_it, hi_it] = std::minmax_element(v.data().begin(), v.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Volume out(v.dims(), v.spacing(), 0.0f);
  out.geometry = v.geometry;
  if (hi == lo) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>((v[i] - lo) / range);
  return out;
}

MaskVolume binarize(const Volume& v, double threshold) {
  MaskVolume m{v.dims(), std::vector<std::uint8_t>(v.size())};
  const float t = static_cast<float>(threshold);
  for (std::size_t i = 0; i < v.size(); ++i) m.data[i] = v[i] > t ? 1 : 0;
  return m;
}

Volume crop_or_pad(const Volume& v, Dims target, float fill) {
  if (!target.positive()) throw InvalidInput("crop_or_pad: target dims must be positive, got " + to_string(target));
  // shift[a]: source index = target index - shift[a]
  int shift[3];
  for (int a = 0; a < 3; ++a) {
    const int n = v.dims()[a];
    const int t = target[a];
    shift[a] = t >= n ? (t - n) / 2 : -((n - t) / 2);
  }
  Volume out(target, v.spacing(), fill);
  out.geometry = v.geometry;
  const Dims& sd = v.dims();
  for (int z = 0; z < target.nz; ++z) {
    const int sz = z - shift[2];
    if (sz < 0 || sz >= sd.nz) continue;
    for (int y = 0; y < target.ny; ++y) {
      const int sy = y - shift[1];
      if (sy < 0 || sy >= sd.ny) continue;
      for (int x = 0; x < target.nx; ++x) {
        const int sx = x - shift[0];
        if (sx < 0 || sx >= sd.nx) continue;
        out.at(x, y, z) = v.at(sx, sy, sz);
      }
    }
  }
  return out;
}

Volume gaussian_smooth(const Volume& v, double sigma) {
  if (sigma < 0.0 || std::isnan(sigma)) throw InvalidInput("gaussian_smooth: sigma must be >= 0");
  if (sigma == 0.0) return v;
  const auto kernel = gaussian_kernel(sigma, static_cast<int>(std::ceil(3.0 * sigma)));
  Volume out = to_volume(separable_filter(to_grid(v), kernel), v.spacing());
  out.geometry = v.geometry;
  return out;
}

Volume downsample2x(const Volume& v) {
  const Spacing s = v.spacing();
  return to_volume(downsample2x(to_grid(v)), {s.sx * 2.0, s.sy * 2.0, s.sz * 2.0});
}

}  // namespace cicreg
