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

#include "field.hpp"
#include "grid.hpp"
#include "volume.hpp"

namespace cicreg {

// Trilinear interpolation with replicate (clamp-to-border) boundary.
double sample_trilinear(const Volume& v, std::array<double, 3> p);

// out(x) = moving(x + u(x)) on the field's grid.
Volume warp_volume(const Volume& moving, const DisplacementField& u);

// Gradient of the moving image's interpolant at each sample location
// x + u(x). Zero along clamped axes.
DisplacementField warp_gradient(const Volume& moving, const DisplacementField& u);

// Displacement of phi_outer o phi_inner:
// result(x) = u_inner(x) + u_outer(x + u_inner(x)).
DisplacementField compose(const DisplacementField& u_outer, const DisplacementField& u_inner);

// Pyramid transfer. Displacements are in voxels, so they scale with the grid.
DisplacementField upsample_field2x(const DisplacementField& u, Dims target);
DisplacementField downsample_field2x(const DisplacementField& u);

// Per-voxel Euclidean norm of u in voxels.
Volume field_magnitude(const DisplacementField& u);
// Same, with each component scaled by the field's spacing first (mm).
Volume field_magnitude_mm(const DisplacementField& u);

namespace detail {

// Double-precision pull-back of any grid; used by the loss terms so that
// intermediate images are never rounded to float.
Grid warp_grid(const Grid& moving, const DisplacementField& u);
Grid warp_grid(const Volume& moving, const DisplacementField& u);

// Gradient of the moving interpolant at x + u(x), per channel.
std::array<Grid, 3> warp_grid_gradient(const Grid& moving, const DisplacementField& u);
std::array<Grid, 3> warp_grid_gradient(const Volume& moving, const DisplacementField& u);

// Transpose of warp_grid with respect to the moving image values:
// returns d, with d(y) = sum_x w(x, y) * adj(x), on a grid of source_dims.
Grid warp_grid_adjoint(const Grid& adj, const DisplacementField& u, Dims source_dims);

}  // namespace detail

}  // namespace cicreg
