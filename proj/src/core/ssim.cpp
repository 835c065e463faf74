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

#include "ssim.hpp"

#include <cmath>
#include <numeric>

#include "parallel.hpp"

namespace cicreg {

void SsimParams::validate() const {
  if (!(window_sigma > 0.0)) throw InvalidInput("ssim: window_sigma must be > 0");
  if (window_radius < 0) throw InvalidInput("ssim: window_radius must be >= 0");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidInput("ssim: c1 and c2 must be > 0");
  if (num_scales < 0) throw InvalidInput("ssim: num_scales must be >= 0 (0 = adaptive)");
  if (!scale_weights.empty()) {
    double s = 0.0;
    for (double w : scale_weights) {
      if (!(w >= 0.0)) throw InvalidInput("ssim: scale weights must be non-negative");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-9) throw InvalidInput("ssim: scale weights must sum to 1");
  }
}

int adaptive_num_scales(Dims d, int window_radius) {
  const int window = 2 * window_radius + 1;
  int s = 0;
  while (s < 3 && d.min_dim() >= (1 << s) * window) ++s;
  return s;
}

int resolve_num_scales(const SsimParams& p, Dims d) {
  const int window = 2 * p.window_radius + 1;
  const int feasible = [&] {
    int s = 0;
    while (s < 30 && d.min_dim() >= (1 << s) * window) ++s;
    return s;
  }();
  const int s = p.num_scales == 0 ? adaptive_num_scales(d, p.window_radius) : p.num_scales;
  if (s < 1 || s > feasible)
    throw InvalidInput("ms_ssim: volume " + to_string(d) + " is too small for " + std::to_string(s == 0 ? 1 : s) +
                       " scale(s) with a " + std::to_string(window) + "-voxel window; max feasible scale count is " +
                       std::to_string(feasible));
  return s;
}

std::vector<double> resolve_scale_weights(const SsimParams& p, int scales) {
  if (!p.scale_weights.empty()) {
    if (static_cast<int>(p.scale_weights.size()) != scales)
      throw InvalidInput("ms_ssim: " + std::to_string(p.scale_weights.size()) + " scale weights given for " +
                         std::to_string(scales) + " scales");
    return p.scale_weights;
  }
  if (scales > 5) throw InvalidInput("ms_ssim: standard weights cover at most 5 scales");
  std::vector<double> w(kMsSsimWeights, kMsSsimWeights + scales);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
  return w;
}

namespace detail {

namespace {

struct LocalStats {
  Grid mu_a, mu_b, s_aa, s_bb, s_ab;
};

LocalStats local_stats(const Grid& a, const Grid& b, const std::vector<double>& k) {
  Grid aa(a.dims), bb(a.dims), ab(a.dims);
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa.data[i] = a.data[i] * a.data[i];
    bb.data[i] = b.data[i] * b.data[i];
    ab.data[i] = a.data[i] * b.data[i];
  }
  return {separable_filter(a, k), separable_filter(b, k), separable_filter(aa, k), separable_filter(bb, k),
          separable_filter(ab, k)};
}

void require_same_dims(const Dims& a, const Dims& b) {
  if (!(a == b)) throw InvalidInput("ssim: dimension mismatch " + to_string(a) + " vs " + to_string(b));
}

}  // namespace

SsimResult ssim_map(const Grid& a, const Grid& b, const SsimParams& p, SsimTerm term) {
  require_same_dims(a.dims, b.dims);
  p.validate();
  const auto k = gaussian_kernel(p.window_sigma, p.window_radius);
  const LocalStats st = local_stats(a, b, k);
  SsimResult r{0.0, Grid(a.dims)};
  parallel_for(static_cast<std::ptrdiff_t>(a.size()), [&](std::ptrdiff_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double ma = st.mu_a.data[i], mb = st.mu_b.data[i];
    const double va = st.s_aa.data[i] - ma * ma, vb = st.s_bb.data[i] - mb * mb;
    const double cov = st.s_ab.data[i] - ma * mb;
    const double cs = (2.0 * cov + p.c2) / (va + vb + p.c2);
    r.map.data[i] = term == SsimTerm::kFull ? cs * (2.0 * ma * mb + p.c1) / (ma * ma + mb * mb + p.c1) : cs;
  });
  r.mean = ordered_sum(a.size(), [&](std::size_t i) { return r.map.data[i]; }) / static_cast<double>(a.size());
  return r;
}

double ssim_mean(const Grid& a, const Grid& b, const SsimParams& p, SsimTerm term, Grid* grad_a) {
  require_same_dims(a.dims, b.dims);
  p.validate();
  const auto k = gaussian_kernel(p.window_sigma, p.window_radius);
  const LocalStats st = local_stats(a, b, k);
  const std::size_t n = a.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  Grid map(a.dims), g_mu(a.dims), g_aa(a.dims), g_ab(a.dims);
  parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double ma = st.mu_a.data[i], mb = st.mu_b.data[i];
    const double va = st.s_aa.data[i] - ma * ma, vb = st.s_bb.data[i] - mb * mb;
    const double cov = st.s_ab.data[i] - ma * mb;
    const double a2 = 2.0 * cov + p.c2;
    const double b2 = va + vb + p.c2;
    if (term == SsimTerm::kContrastStructure) {
      const double s = a2 / b2;
      map.data[i] = s;
      g_mu.data[i] = inv_n * (2.0 * ma * s - 2.0 * mb) / b2;
      g_ab.data[i] = inv_n * 2.0 / b2;
      g_aa.data[i] = inv_n * (-s / b2);
    } else {
      const double a1 = 2.0 * ma * mb + p.c1;
      const double b1 = ma * ma + mb * mb + p.c1;
      const double den = b1 * b2;
      const double s = a1 * a2 / den;
      map.data[i] = s;
      const double dnum = 2.0 * mb * (a2 - a1);
      const double dden = 2.0 * ma * (b2 - b1);
      g_mu.data[i] = inv_n * (dnum - s * dden) / den;
      g_ab.data[i] = inv_n * 2.0 * a1 / den;
      g_aa.data[i] = inv_n * (-s * b1 / den);
    }
  });
  const double mean = ordered_sum(n, [&](std::size_t i) { return map.data[i]; }) * inv_n;

  if (grad_a) {
    const Grid t_mu = separable_filter_adjoint(g_mu, k);
    const Grid t_aa = separable_filter_adjoint(g_aa, k);
    const Grid t_ab = separable_filter_adjoint(g_ab, k);
    *grad_a = Grid(a.dims);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t ii) {
      const auto i = static_cast<std::size_t>(ii);
      grad_a->data[i] = t_mu.data[i] + 2.0 * a.data[i] * t_aa.data[i] + b.data[i] * t_ab.data[i];
    });
  }
  return mean;
}

double ms_ssim(const Grid& a, const Grid& b, const SsimParams& p, Grid* grad_a) {
  require_same_dims(a.dims, b.dims);
  p.validate();
  const int scales = resolve_num_scales(p, a.dims);
  const auto weights = resolve_scale_weights(p, scales);

  std::vector<Grid> pa{a}, pb{b};
  for (int s = 1; s < scales; ++s) {
    pa.push_back(downsample2x(pa.back()));
    pb.push_back(downsample2x(pb.back()));
  }

  std::vector<double> comp(scales);
  std::vector<Grid> comp_grad(grad_a ? scales : 0);
  for (int s = 0; s < scales; ++s) {
    const SsimTerm term = s == scales - 1 ? SsimTerm::kFull : SsimTerm::kContrastStructure;
    comp[s] = ssim_mean(pa[s], pb[s], p, term, grad_a ? &comp_grad[s] : nullptr);
  }

  bool floored = false;
  double ms = 1.0;
  for (int s = 0; s < scales; ++s) {
    if (!(comp[s] > 0.0)) {
      floored = true;
      break;
    }
    ms *= std::pow(comp[s], weights[s]);
  }
  if (floored) ms = 0.0;

  if (grad_a) {
    if (floored) {
      *grad_a = Grid(a.dims);
      return ms;
    }
    // Backpropagate from the coarsest scale through the pyramid.
    Grid acc;
    for (int s = scales - 1; s >= 0; --s) {
      const double scale = ms * weights[s] / comp[s];
      Grid g = comp_grad[s];
      for (double& v : g.data) v *= scale;
      if (s < scales - 1) {
        const Grid back = downsample2x_adjoint(acc, pa[s].dims);
        for (std::size_t i = 0; i < g.size(); ++i) g.data[i] += back.data[i];
      }
      acc = std::move(g);
    }
    *grad_a = std::move(acc);
  }
  return ms;
}

}  // namespace detail

SsimResult ssim_map(const Volume& a, const Volume& b, const SsimParams& p) {
  return detail::ssim_map(to_grid(a), to_grid(b), p, detail::SsimTerm::kFull);
}

double ms_ssim(const Volume& a, const Volume& b, const SsimParams& p) {
  return detail::ms_ssim(to_grid(a), to_grid(b), p, nullptr);
}

}  // namespace cicreg
