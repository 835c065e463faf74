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

#include "warp.hpp"

#include <cmath>

#include "sampling.hpp"

namespace cicreg {

DisplacementField::DisplacementField(Dims dims, Spacing spacing) : dims_(dims), spacing_(spacing) {
  if (!dims.positive()) throw InvalidInput("DisplacementField: dimensions must be positive, got " + to_string(dims));
  data_.assign(3 * dims.count(), 0.0);
}

DisplacementField::DisplacementField(Dims dims, std::vector<double> planar, Spacing spacing)
    : dims_(dims), spacing_(spacing), data_(std::move(planar)) {
  if (!dims.positive()) throw InvalidInput("DisplacementField: dimensions must be positive, got " + to_string(dims));
  if (data_.size() != 3 * dims.count())
    throw InvalidInput("DisplacementField: expected " + std::to_string(3 * dims.count()) + " values, got " +
                       std::to_string(data_.size()));
}

DisplacementField identity_field(Dims dims) { return DisplacementField(dims); }

double sample_trilinear(const Volume& v, std::array<double, 3> p) {
  const auto cell = detail::locate(v.dims(), p[0], p[1], p[2]);
  return detail::sample(v.data().data(), v.dims(), cell);
}

namespace detail {

namespace {

template <class T>
Grid warp_impl(const T* src, const Dims& sd, const DisplacementField& u) {
  const Dims& d = u.dims();
  Grid out(d);
  auto ux = u.channel(0), uy = u.channel(1), uz = u.channel(2);
  for_each_voxel(d, [&](std::size_t i, int x, int y, int z) {
    const auto c = locate(sd, x + ux[i], y + uy[i], z + uz[i]);
    out.data[i] = sample(src, sd, c);
  });
  return out;
}

template <class T>
std::array<Grid, 3> warp_gradient_impl(const T* src, const Dims& sd, const DisplacementField& u) {
  const Dims& d = u.dims();
  std::array<Grid, 3> g{Grid(d), Grid(d), Grid(d)};
  auto ux = u.channel(0), uy = u.channel(1), uz = u.channel(2);
  for_each_voxel(d, [&](std::size_t i, int x, int y, int z) {
    const auto c = locate(sd, x + ux[i], y + uy[i], z + uz[i]);
    const auto grad = sample_gradient(src, sd, c);
    g[0].data[i] = grad[0];
    g[1].data[i] = grad[1];
    g[2].data[i] = grad[2];
  });
  return g;
}

}  // namespace

Grid warp_grid(const Grid& moving, const DisplacementField& u) {
  return warp_impl(moving.data.data(), moving.dims, u);
}
Grid warp_grid(const Volume& moving, const DisplacementField& u) {
  return warp_impl(moving.data().data(), moving.dims(), u);
}

std::array<Grid, 3> warp_grid_gradient(const Grid& moving, const DisplacementField& u) {
  return warp_gradient_impl(moving.data.data(), moving.dims, u);
}
std::array<Grid, 3> warp_grid_gradient(const Volume& moving, const DisplacementField& u) {
  return warp_gradient_impl(moving.data().data(), moving.dims(), u);
}

Grid warp_grid_adjoint(const Grid& adj, const DisplacementField& u, Dims source_dims) {
  const Dims& d = u.dims();
  Grid out(source_dims);
  auto ux = u.channel(0), uy = u.channel(1), uz = u.channel(2);
  // Serial: scatter targets overlap between voxels.
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const std::size_t i = d.index(x, y, z);
        const double w = adj.data[i];
        if (w == 0.0) continue;
        scatter(out.data.data(), source_dims, locate(source_dims, x + ux[i], y + uy[i], z + uz[i]), w);
      }
  return out;
}

}  // namespace detail

Volume warp_volume(const Volume& moving, const DisplacementField& u) {
  // Round each double sample straight to float; identity and in-bounds
  // integer shifts reproduce stored values exactly.
  Volume out = to_volume(detail::warp_grid(moving, u), moving.spacing());
  out.geometry = moving.geometry;
  return out;
}

DisplacementField warp_gradient(const Volume& moving, const DisplacementField& u) {
  auto g = detail::warp_grid_gradient(moving, u);
  DisplacementField out(u.dims(), u.spacing());
  for (int c = 0; c < 3; ++c) std::copy(g[c].data.begin(), g[c].data.end(), out.channel(c).begin());
  return out;
}

DisplacementField compose(const DisplacementField& u_outer, const DisplacementField& u_inner) {
  if (!(u_outer.dims() == u_inner.dims()))
    throw InvalidInput("compose: dimension mismatch " + to_string(u_outer.dims()) + " vs " +
                       to_string(u_inner.dims()));
  const Dims& d = u_inner.dims();
  DisplacementField out(d, u_inner.spacing());
  auto ix = u_inner.channel(0), iy = u_inner.channel(1), iz = u_inner.channel(2);
  detail::for_each_voxel(d, [&](std::size_t i, int x, int y, int z) {
    const auto c = detail::locate(d, x + ix[i], y + iy[i], z + iz[i]);
    for (int k = 0; k < 3; ++k)
      out(k, i) = u_inner(k, i) + detail::sample(u_outer.channel(k).data(), d, c);
  });
  return out;
}

DisplacementField upsample_field2x(const DisplacementField& u, Dims target) {
  const Dims& d = u.dims();
  for (int a = 0; a < 3; ++a) {
    if (target[a] != 2 * d[a] && target[a] != 2 * d[a] - 1)
      throw InvalidInput("upsample_field2x: target " + to_string(target) + " is not a 2x refinement of " +
                         to_string(d));
  }
  const Spacing s = u.spacing();
  DisplacementField out(target, Spacing{s.sx / 2.0, s.sy / 2.0, s.sz / 2.0});
  detail::for_each_voxel(target, [&](std::size_t i, int x, int y, int z) {
    const auto c = detail::locate(d, 0.5 * x, 0.5 * y, 0.5 * z);
    for (int k = 0; k < 3; ++k) out(k, i) = 2.0 * detail::sample(u.channel(k).data(), d, c);
  });
  return out;
}

DisplacementField downsample_field2x(const DisplacementField& u) {
  const Dims& d = u.dims();
  const Dims cd = halved(d);
  const Spacing s = u.spacing();
  DisplacementField out(cd, Spacing{s.sx * 2.0, s.sy * 2.0, s.sz * 2.0});
  for (int k = 0; k < 3; ++k) {
    Grid g(d);
    std::copy(u.channel(k).begin(), u.channel(k).end(), g.data.begin());
    const Grid coarse = downsample2x(g);
    auto dst = out.channel(k);
    for (std::size_t i = 0; i < coarse.size(); ++i) dst[i] = 0.5 * coarse.data[i];
  }
  return out;
}

Volume field_magnitude(const DisplacementField& u) {
  Volume out(u.dims(), u.spacing());
  for (std::size_t i = 0; i < u.voxels(); ++i)
    out[i] = static_cast<float>(std::sqrt(u(0, i) * u(0, i) + u(1, i) * u(1, i) + u(2, i) * u(2, i)));
  return out;
}

Volume field_magnitude_mm(const DisplacementField& u) {
  const Spacing s = u.spacing();
  Volume out(u.dims(), u.spacing());
  for (std::size_t i = 0; i < u.voxels(); ++i) {
    const double x = u(0, i) * s.sx, y = u(1, i) * s.sy, z = u(2, i) * s.sz;
    out[i] = static_cast<float>(std::sqrt(x * x + y * y + z * z));
  }
  return out;
}

}  // namespace cicreg
