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

#include "losses.hpp"

#include "jacobian.hpp"
#include "parallel.hpp"
#include "sampling.hpp"
#include "warp.hpp"

namespace cicreg {

void LossWeights::validate() const {
  if (!(lambda_smooth >= 0.0) || !(lambda_img_cyc >= 0.0) || !(lambda_flow_cyc >= 0.0) || !(lambda_jac >= 0.0))
    throw InvalidInput("loss weights must be finite and >= 0");
}

double combine(const LossBreakdown& b, const LossWeights& w) {
  return b.similarity + w.lambda_smooth * b.smoothness + w.lambda_img_cyc * b.image_cycle +
         w.lambda_flow_cyc * b.flow_cycle + w.lambda_jac * b.jacobian_penalty;
}

namespace {

void require_dims(const Dims& a, const Dims& b, const char* who) {
  if (!(a == b)) throw InvalidInput(std::string(who) + ": dimension mismatch " + to_string(a) + " vs " + to_string(b));
}

// grad(c, i) += g(i) * d(c)(i) for a scalar adjoint and a 3-channel derivative.
void accumulate_product(DisplacementField& grad, const Grid& g, const std::array<Grid, 3>& d) {
  for (int c = 0; c < 3; ++c) {
    auto dst = grad.channel(c);
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g.data[i] * d[c].data[i];
  }
}

// One half of the image cycle: source -> (u_first) -> (u_second) compared
// with source on the source grid. Adds gradients into g_first / g_second.
double image_cycle_half(const Volume& source, const DisplacementField& u_first, const DisplacementField& u_second,
                        DisplacementField& g_first, DisplacementField& g_second) {
  const Grid mid = detail::warp_grid(source, u_first);
  const Grid rec = detail::warp_grid(mid, u_second);
  const std::size_t n = rec.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  auto src = source.data();
  const double mse = ordered_sum(n, [&](std::size_t i) {
    const double e = rec.data[i] - src[i];
    return e * e;
  }) * inv_n;

  Grid adj(rec.dims);
  for (std::size_t i = 0; i < n; ++i) adj.data[i] = (rec.data[i] - src[i]) * inv_n;

  accumulate_product(g_second, adj, detail::warp_grid_gradient(mid, u_second));
  const Grid adj_mid = detail::warp_grid_adjoint(adj, u_second, mid.dims);
  accumulate_product(g_first, adj_mid, detail::warp_grid_gradient(source, u_first));
  return 0.5 * mse;
}

// One half of the flow cycle: r(x) = u_inner(x) + u_outer(x + u_inner(x)).
double flow_cycle_half(const DisplacementField& u_outer, const DisplacementField& u_inner,
                       DisplacementField& g_outer, DisplacementField& g_inner) {
  const Dims& d = u_inner.dims();
  const std::size_t n = d.count();
  const double inv_n = 1.0 / static_cast<double>(n);
  DisplacementField r(d);
  std::vector<detail::Cell> cells(n);
  detail::for_each_voxel(d, [&](std::size_t i, int x, int y, int z) {
    const auto c = detail::locate(d, x + u_inner(0, i), y + u_inner(1, i), z + u_inner(2, i));
    cells[i] = c;
    double gin[3] = {0.0, 0.0, 0.0};
    double res[3];
    for (int k = 0; k < 3; ++k) res[k] = u_inner(k, i) + detail::sample(u_outer.channel(k).data(), d, c);
    for (int k = 0; k < 3; ++k) {
      r(k, i) = res[k];
      const auto dk = detail::sample_gradient(u_outer.channel(k).data(), d, c);
      for (int a = 0; a < 3; ++a) gin[a] += res[k] * dk[a];
    }
    for (int a = 0; a < 3; ++a) g_inner(a, i) += inv_n * (res[a] + gin[a]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) detail::scatter(g_outer.channel(k).data(), d, cells[i], inv_n * r(k, i));
  const double ss = ordered_sum(n, [&](std::size_t i) { return r(0, i) * r(0, i) + r(1, i) * r(1, i) + r(2, i) * r(2, i); });
  return 0.5 * ss * inv_n;
}

}  // namespace

TermGrad similarity_loss_grad(const Volume& fixed, const Volume& moving, const DisplacementField& u,
                              const SsimParams& p) {
  require_dims(fixed.dims(), u.dims(), "similarity_loss_grad");
  const Grid warped = detail::warp_grid(moving, u);
  Grid g_img;
  const double ms = detail::ms_ssim(warped, to_grid(fixed), p, &g_img);
  TermGrad out{1.0 - ms, DisplacementField(u.dims(), u.spacing())};
  for (double& v : g_img.data) v = -v;
  accumulate_product(out.grad, g_img, detail::warp_grid_gradient(moving, u));
  return out;
}

TermGrad smoothness_loss_grad(const DisplacementField& u) {
  const Dims& d = u.dims();
  if (d.nx < 2 || d.ny < 2 || d.nz < 2)
    throw InvalidInput("smoothness_loss_grad: every dimension must be >= 2, got " + to_string(d));
  const std::size_t n = d.count();
  const double inv_n = 1.0 / static_cast<double>(n);
  TermGrad out{0.0, DisplacementField(d, u.spacing())};

  auto energy = [&](std::size_t i) {
    const int x = static_cast<int>(i % d.nx);
    const int y = static_cast<int>((i / d.nx) % d.ny);
    const int z = static_cast<int>(i / (static_cast<std::size_t>(d.nx) * d.ny));
    const int pos[3] = {x, y, z};
    double e = 0.0;
    for (int a = 0; a < 3; ++a) {
      if (pos[a] == d[a] - 1) continue;
      const std::size_t j = i + d.stride(a);
      for (int c = 0; c < 3; ++c) {
        const double diff = u(c, j) - u(c, i);
        e += diff * diff;
      }
    }
    return e;
  };
  out.loss = ordered_sum(n, energy) * inv_n;

  detail::for_each_voxel(d, [&](std::size_t i, int x, int y, int z) {
    const int pos[3] = {x, y, z};
    for (int c = 0; c < 3; ++c) {
      double g = 0.0;
      for (int a = 0; a < 3; ++a) {
        const std::size_t s = d.stride(a);
        if (pos[a] > 0) g += u(c, i) - u(c, i - s);
        if (pos[a] < d[a] - 1) g -= u(c, i + s) - u(c, i);
      }
      out.grad(c, i) = 2.0 * inv_n * g;
    }
  });
  return out;
}

PairGrad image_cycle_loss_grad(const Volume& moving, const Volume& fixed, const DisplacementField& u_mf,
                               const DisplacementField& u_fm) {
  require_dims(moving.dims(), fixed.dims(), "image_cycle_loss_grad");
  require_dims(u_mf.dims(), fixed.dims(), "image_cycle_loss_grad");
  require_dims(u_fm.dims(), moving.dims(), "image_cycle_loss_grad");
  PairGrad out{0.0, DisplacementField(u_mf.dims(), u_mf.spacing()), DisplacementField(u_fm.dims(), u_fm.spacing())};
  const double lm = image_cycle_half(moving, u_mf, u_fm, out.grad_mf, out.grad_fm);
  const double lf = image_cycle_half(fixed, u_fm, u_mf, out.grad_fm, out.grad_mf);
  out.loss = lm + lf;
  return out;
}

PairGrad flow_cycle_loss_grad(const DisplacementField& u_mf, const DisplacementField& u_fm) {
  require_dims(u_mf.dims(), u_fm.dims(), "flow_cycle_loss_grad");
  PairGrad out{0.0, DisplacementField(u_mf.dims(), u_mf.spacing()), DisplacementField(u_fm.dims(), u_fm.spacing())};
  const double rm = flow_cycle_half(u_mf, u_fm, out.grad_mf, out.grad_fm);
  const double rf = flow_cycle_half(u_fm, u_mf, out.grad_fm, out.grad_mf);
  out.loss = rm + rf;
  return out;
}

DisplacementField flow_cycle_residual(const DisplacementField& u_mf, const DisplacementField& u_fm) {
  require_dims(u_mf.dims(), u_fm.dims(), "flow_cycle_residual");
  return compose(u_mf, u_fm);
}

TermGrad jacobian_penalty_grad(const DisplacementField& u) {
  detail::require_jacobian_dims(u.dims(), "jacobian_penalty_grad");
  const Dims& d = u.dims();
  const std::size_t n = d.count();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Grid det = jacobian_determinant_field(u);
  TermGrad out{0.0, DisplacementField(d, u.spacing())};
  out.loss = ordered_sum(n, [&](std::size_t i) { return det.data[i] < 0.0 ? -det.data[i] : 0.0; }) * inv_n;

  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const std::size_t i = d.index(x, y, z);
        if (!(det.data[i] < 0.0)) continue;
        const auto cof = detail::cofactor3(detail::jacobian_at(u, x, y, z));
        const int pos[3] = {x, y, z};
        for (int a = 0; a < 3; ++a) {
          const auto t = detail::derivative_taps(pos[a], d[a]);
          const auto stride = static_cast<std::ptrdiff_t>(d.stride(a));
          for (int k = 0; k < t.count; ++k) {
            const auto j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + t.offset[k] * stride);
            for (int c = 0; c < 3; ++c) out.grad(c, j) -= inv_n * cof[c][a] * t.coeff[k];
          }
        }
      }
  return out;
}

TotalLoss total_loss_grad(const Volume& moving, const Volume& fixed, const DisplacementField& u_mf,
                          const DisplacementField& u_fm, const LossWeights& w, const SsimParams& p) {
  w.validate();
  require_dims(moving.dims(), fixed.dims(), "total_loss_grad");
  require_dims(u_mf.dims(), fixed.dims(), "total_loss_grad");
  require_dims(u_fm.dims(), moving.dims(), "total_loss_grad");

  const TermGrad sim_mf = similarity_loss_grad(fixed, moving, u_mf, p);
  const TermGrad sim_fm = similarity_loss_grad(moving, fixed, u_fm, p);
  const TermGrad sm_mf = smoothness_loss_grad(u_mf);
  const TermGrad sm_fm = smoothness_loss_grad(u_fm);
  const PairGrad img = image_cycle_loss_grad(moving, fixed, u_mf, u_fm);
  const PairGrad flow = flow_cycle_loss_grad(u_mf, u_fm);
  const TermGrad jac_mf = jacobian_penalty_grad(u_mf);
  const TermGrad jac_fm = jacobian_penalty_grad(u_fm);

  TotalLoss out{{}, DisplacementField(u_mf.dims(), u_mf.spacing()), DisplacementField(u_fm.dims(), u_fm.spacing())};
  LossBreakdown& b = out.breakdown;
  b.similarity = 0.5 * sim_mf.loss + 0.5 * sim_fm.loss;
  b.smoothness = 0.5 * (sm_mf.loss + sm_fm.loss);
  b.image_cycle = img.loss;
  b.flow_cycle = flow.loss;
  b.jacobian_penalty = 0.5 * (jac_mf.loss + jac_fm.loss);
  b.total = combine(b, w);

  auto gather = [&](DisplacementField& dst, const TermGrad& sim, const TermGrad& sm, const DisplacementField& gi,
                    const DisplacementField& gf, const TermGrad& jac) {
    auto o = dst.raw();
    auto s = sim.grad.raw(), m = sm.grad.raw(), ig = gi.raw(), fg = gf.raw(), jg = jac.grad.raw();
    for (std::size_t i = 0; i < o.size(); ++i)
      o[i] = 0.5 * s[i] + w.lambda_smooth * (0.5 * m[i]) + w.lambda_img_cyc * ig[i] + w.lambda_flow_cyc * fg[i] +
             w.lambda_jac * (0.5 * jg[i]);
  };
  gather(out.grad_mf, sim_mf, sm_mf, img.grad_mf, flow.grad_mf, jac_mf);
  gather(out.grad_fm, sim_fm, sm_fm, img.grad_fm, flow.grad_fm, jac_fm);
  return out;
}

}  // namespace cicreg
