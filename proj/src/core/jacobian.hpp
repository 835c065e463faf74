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

struct JacobianReport {
  double pct_nonpositive = 0.0;  // 100 * |{det <= 0}| / N
  double min_det = 1.0;
  double max_det = 1.0;
  double mean_log_jd = 0.0;  // over det > 0 only; NaN when no such voxel
  double std_log_jd = 0.0;   // population std, same support
  double mean_magnitude = 0.0;  // voxels
  double max_magnitude = 0.0;
};

// det(I + grad u) per voxel. Central differences inside, one-sided on faces.
// Requires every dimension >= 3.
Grid jacobian_determinant_field(const DisplacementField& u);

// ln(max(det, floor)).
Grid log_jd_map(const DisplacementField& u, double floor = 1e-6);

JacobianReport jacobian_report(const DisplacementField& u);

namespace detail {

void require_jacobian_dims(const Dims& d, const char* who);

// Finite-difference taps for d/dx_axis at coordinate i of an axis of length n.
struct Taps {
  int count;
  std::array<int, 2> offset;  // relative index along the axis
  std::array<double, 2> coeff;
};

inline Taps derivative_taps(int i, int n) {
  if (i == 0) return {2, {1, 0}, {1.0, -1.0}};
  if (i == n - 1) return {2, {0, -1}, {1.0, -1.0}};
  return {2, {1, -1}, {0.5, -0.5}};
}

// J = I + grad u at one voxel, row = component, column = axis.
using Mat3 = std::array<std::array<double, 3>, 3>;
Mat3 jacobian_at(const DisplacementField& u, int x, int y, int z);

inline double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// d det / d m_ij.
inline Mat3 cofactor3(const Mat3& m) {
  Mat3 c;
  c[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  c[0][1] = -(m[1][0] * m[2][2] - m[1][2] * m[2][0]);
  c[0][2] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  c[1][0] = -(m[0][1] * m[2][2] - m[0][2] * m[2][1]);
  c[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  c[1][2] = -(m[0][0] * m[2][1] - m[0][1] * m[2][0]);
  c[2][0] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  c[2][1] = -(m[0][0] * m[1][2] - m[0][2] * m[1][0]);
  c[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return c;
}

}  // namespace detail

}  // namespace cicreg
