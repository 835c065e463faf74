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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "grid.hpp"
#include "types.hpp"

namespace cicreg {

// Scanner-space geometry carried through NIfTI round trips. Never used for
// resampling; all registration work happens in voxel space.
struct NiftiGeometry {
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  std::array<float, 3> quatern{};
  std::array<float, 3> qoffset{};
  std::array<std::array<float, 4>, 3> srow{};
  float qfac = 1.0f;
};

// 3-D scalar image, float32 intensities, x-fastest.
class Volume {
 public:
  Volume() = default;
  explicit Volume(Dims dims, Spacing spacing = {}, float fill = 0.0f);
  Volume(Dims dims, std::vector<float> data, Spacing spacing = {});

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  void set_spacing(Spacing s) noexcept { spacing_ = s; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }
  float operator[](std::size_t i) const noexcept { return data_[i]; }
  float& operator[](std::size_t i) noexcept { return data_[i]; }
  float at(int x, int y, int z) const noexcept { return data_[dims_.index(x, y, z)]; }
  float& at(int x, int y, int z) noexcept { return data_[dims_.index(x, y, z)]; }

  std::optional<NiftiGeometry> geometry;

  friend bool operator==(const Volume& a, const Volume& b) {
    return a.dims_ == b.dims_ && a.spacing_ == b.spacing_ && a.data_ == b.data_;
  }

 private:
  Dims dims_;
  Spacing spacing_;
  std::vector<float> data_;
};

// Binary mask; every element is 0 or 1.
struct MaskVolume {
  Dims dims;
  std::vector<std::uint8_t> data;

  std::size_t count_set() const noexcept;
};

Grid to_grid(const Volume& v);
Volume to_volume(const Grid& g, Spacing spacing = {});

// (v - min) / (max - min); a constant volume maps to all zeros.
Volume minmax_normalize(const Volume& v);

// mask = 1 where v > threshold (strictly greater).
MaskVolume binarize(const Volume& v, double threshold);

// Centers v in a grid of target dims. When the size difference is odd the
// extra voxel goes on the high side.
Volume crop_or_pad(const Volume& v, Dims target, float fill);

// Separable Gaussian, radius ceil(3 sigma), replicate borders. sigma 0 is a no-op.
Volume gaussian_smooth(const Volume& v, double sigma);

// gaussian_smooth(sigma 1) then every second voxel from index 0.
Volume downsample2x(const Volume& v);

}  // namespace cicreg
