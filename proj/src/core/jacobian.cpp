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

#include "jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "sampling.hpp"

namespace cicreg {

namespace detail {

void require_jacobian_dims(const Dims& d, const char* who) {
  if (d.nx < 3 || d.ny < 3 || d.nz < 3)
    throw InvalidInput(std::string(who) + ": every dimension must be >= 3, got " + to_string(d));
}

Mat3 jacobian_at(const DisplacementField& u, int x, int y, int z) {
  const Dims& d = u.dims();
  const int pos[3] = {x, y, z};
  const std::size_t base = d.index(x, y, z);
  Mat3 j{};
  for (int a = 0; a < 3; ++a) {
    const Taps t = derivative_taps(pos[a], d[a]);
    const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(d.stride(a));
    for (int c = 0; c < 3; ++c) {
      auto ch = u.channel(c);
      double deriv = 0.0;
      for (int k = 0; k < t.count; ++k)
        deriv += t.coeff[k] * ch[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) + t.offset[k] * stride)];
      j[c][a] = (c == a ? 1.0 : 0.0) + deriv;
    }
  }
  return j;
}

}  // namespace detail

Grid jacobian_determinant_field(const DisplacementField& u) {
  detail::require_jacobian_dims(u.dims(), "jacobian_determinant_field");
  Grid det(u.dims());
  detail::for_each_voxel(u.dims(), [&](std::size_t i, int x, int y, int z) {
    det.data[i] = detail::det3(detail::jacobian_at(u, x, y, z));
  });
  return det;
}

Grid log_jd_map(const DisplacementField& u, double floor) {
  Grid g = jacobian_determinant_field(u);
  for (double& v : g.data) v = std::log(std::max(v, floor));
  return g;
}

JacobianReport jacobian_report(const DisplacementField& u) {
  const Grid det = jacobian_determinant_field(u);
  const std::size_t n = det.size();
  JacobianReport r;
  std::size_t nonpos = 0, pos = 0;
  r.min_det = std::numeric_limits<double>::infinity();
  r.max_det = -std::numeric_limits<double>::infinity();
  for (double v : det.data) {
    r.min_det = std::min(r.min_det, v);
    r.max_det = std::max(r.max_det, v);
    if (v <= 0.0) ++nonpos; else ++pos;
  }
  r.pct_nonpositive = 100.0 * static_cast<double>(nonpos) / static_cast<double>(n);

  if (pos == 0) {
    r.mean_log_jd = r.std_log_jd = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double sum = ordered_sum(n, [&](std::size_t i) { return det.data[i] > 0.0 ? std::log(det.data[i]) : 0.0; });
    r.mean_log_jd = sum / static_cast<double>(pos);
    const double ss = ordered_sum(n, [&](std::size_t i) {
      if (!(det.data[i] > 0.0)) return 0.0;
      const double e = std::log(det.data[i]) - r.mean_log_jd;
      return e * e;
    });
    r.std_log_jd = std::sqrt(ss / static_cast<double>(pos));
  }

  auto magnitude = [&](std::size_t i) {
    return std::sqrt(u(0, i) * u(0, i) + u(1, i) * u(1, i) + u(2, i) * u(2, i));
  };
  r.mean_magnitude = ordered_sum(n, magnitude) / static_cast<double>(n);
  r.max_magnitude = 0.0;
  for (std::size_t i = 0; i < n; ++i) r.max_magnitude = std::max(r.max_magnitude, magnitude(i));
  return r;
}

}  // namespace cicreg
