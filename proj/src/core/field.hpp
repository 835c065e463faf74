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

#include <array>
#include <span>
#include <vector>

#include "types.hpp"

namespace cicreg {

// Dense displacement u(x) = phi(x) - x in voxel units, stored channel-planar
// (all ux, then all uy, then all uz). Pull-back convention: the field lives
// on the target grid and points into the source.
class DisplacementField {
 public:
  DisplacementField() = default;
  explicit DisplacementField(Dims dims, Spacing spacing = {});
  DisplacementField(Dims dims, std::vector<double> planar, Spacing spacing = {});

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  void set_spacing(Spacing s) noexcept { spacing_ = s; }
  std::size_t voxels() const noexcept { return dims_.count(); }

  std::span<double> channel(int c) noexcept { return {data_.data() + c * voxels(), voxels()}; }
  std::span<const double> channel(int c) const noexcept { return {data_.data() + c * voxels(), voxels()}; }
  std::span<double> raw() noexcept { return data_; }
  std::span<const double> raw() const noexcept { return data_; }

  double& operator()(int c, std::size_t i) noexcept { return data_[c * voxels() + i]; }
  double operator()(int c, std::size_t i) const noexcept { return data_[c * voxels() + i]; }

  friend bool operator==(const DisplacementField& a, const DisplacementField& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

 private:
  Dims dims_;
  Spacing spacing_;
  std::vector<double> data_;
};

// Phi = Id.
DisplacementField identity_field(Dims dims);

}  // namespace cicreg
