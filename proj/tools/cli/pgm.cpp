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

#include "pgm.hpp"

#include <algorithm>
#include <cmath>

namespace cicreg::cli {

std::array<Slice, 3> center_slices(const float* data, const int dims[3]) {
  const int nx = dims[0], ny = dims[1], nz = dims[2];
  auto at = [&](int x, int y, int z) { return data[x + static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z)]; };
  std::array<Slice, 3> out{Slice{"axial", nx, ny, {}}, Slice{"coronal", nx, nz, {}}, Slice{"sagittal", ny, nz, {}}};
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) out[0].pixels.push_back(at(x, y, nz / 2));
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < nx; ++x) out[1].pixels.push_back(at(x, ny / 2, z));
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y) out[2].pixels.push_back(at(nx / 2, y, z));
  return out;
}

std::vector<unsigned char> encode_pgm(const Slice& s) {
  const std::string header = "P5\n" + std::to_string(s.width) + " " + std::to_string(s.height) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  if (s.pixels.empty()) return out;
  const auto [lo, hi] = std::minmax_element(s.pixels.begin(), s.pixels.end());
  const double mn = *lo, range = static_cast<double>(*hi) - mn;
  for (float p : s.pixels) {
    const double t = range > 0.0 ? (p - mn) / range : 0.0;
    out.push_back(static_cast<unsigned char>(std::lround(255.0 * t)));
  }
  return out;
}

}  // namespace cicreg::cli
