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

#include "optimizer.hpp"

#include <cmath>

#include "warp.hpp"

namespace cicreg {

namespace {
constexpr int kMinCoarseDim = 7;
constexpr int kStopWindow = 5;
}  // namespace

void RegistrationConfig::validate() const {
  if (levels < 1) throw InvalidInput("config: levels must be >= 1");
  if (static_cast<int>(iters_per_level.size()) != levels)
    throw InvalidInput("config: iters_per_level has " + std::to_string(iters_per_level.size()) +
                       " entries but levels = " + std::to_string(levels));
  for (int it : iters_per_level)
    if (it < 1) throw InvalidInput("config: iters_per_level entries must be positive");
  if (!(step_size > 0.0)) throw InvalidInput("config: step_size must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw InvalidInput("config: beta1 and beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw InvalidInput("config: epsilon must be > 0");
  if (!(rel_tol >= 0.0)) throw InvalidInput("config: rel_tol must be >= 0");
  weights.validate();
  ssim.validate();
}

double RegistrationConfig::step_for_level(int level) const {
  return step_size * std::ldexp(1.0, -(levels - 1 - level));
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double step_size,
               double beta1, double beta2, double epsilon) {
  if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size())
    throw InvalidInput("adam_step: parameter, gradient and moment sizes differ");
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, state.t);
  const double bc2 = 1.0 - std::pow(beta2, state.t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= step_size * mhat / (std::sqrt(vhat) + epsilon);
  }
}

std::vector<PyramidLevel> build_pyramids(const Volume& moving, const Volume& fixed, int levels) {
  if (!(moving.dims() == fixed.dims()))
    throw InvalidInput("dimension mismatch: moving " + to_string(moving.dims()) + " vs fixed " +
                       to_string(fixed.dims()));
  if (levels < 1) throw InvalidInput("build_pyramids: levels must be >= 1");
  const int need = kMinCoarseDim << (levels - 1);
  if (moving.dims().min_dim() < need)
    throw InvalidInput("pyramid infeasible: " + std::to_string(levels) + " levels need a minimum dimension of " +
                       std::to_string(need) + ", got " + to_string(moving.dims()));
  std::vector<PyramidLevel> out{{moving, fixed}};
  for (int l = 1; l < levels; ++l) out.push_back({downsample2x(out.back().moving), downsample2x(out.back().fixed)});
  return out;
}

RegistrationResult register_pair(const Volume& moving, const Volume& fixed, const RegistrationConfig& cfg) {
  cfg.validate();
  const auto pyramid = build_pyramids(moving, fixed, cfg.levels);

  RegistrationResult res;
  res.iterations_run.assign(cfg.levels, 0);
  res.converged.assign(cfg.levels, false);

  DisplacementField u_mf, u_fm;
  for (int level = cfg.levels - 1; level >= 0; --level) {
    const PyramidLevel& lv = pyramid[level];
    const Dims d = lv.fixed.dims();
    if (level == cfg.levels - 1) {
      u_mf = identity_field(d);
      u_fm = identity_field(d);
    } else {
      u_mf = upsample_field2x(u_mf, d);
      u_fm = upsample_field2x(u_fm, d);
    }
    u_mf.set_spacing(lv.fixed.spacing());
    u_fm.set_spacing(lv.moving.spacing());

    const double base_lr = cfg.step_for_level(level);
    double lr = base_lr;
    const int iters = cfg.iters_per_level[cfg.levels - 1 - level];
    AdamState s_mf(u_mf.raw().size()), s_fm(u_fm.raw().size());
    // Last accepted iterate. A step that raises the total is undone and
    // retried from there with half the step size.
    DisplacementField keep_mf, keep_fm;
    AdamState keep_s_mf, keep_s_fm;
    TotalLoss keep;
    bool have_keep = false;
    double prev = 0.0;
    int streak = 0;
    int run = 0;
    for (int it = 0; it < iters; ++it) {
      TotalLoss tl = total_loss_grad(lv.moving, lv.fixed, u_mf, u_fm, cfg.weights, cfg.ssim);
      run = it + 1;
      if (have_keep && tl.breakdown.total > keep.breakdown.total) {
        u_mf = keep_mf;
        u_fm = keep_fm;
        s_mf = keep_s_mf;
        s_fm = keep_s_fm;
        lr *= 0.5;
      } else {
        res.trace.push_back({level, it, tl.breakdown});
        const double total = tl.breakdown.total;
        if (have_keep) {
          const double rel = std::abs(total - prev) / std::max(total, 1e-12);
          streak = rel < cfg.rel_tol ? streak + 1 : 0;
          if (streak >= kStopWindow) {
            res.converged[level] = true;
            break;
          }
        }
        prev = total;
        keep = std::move(tl);
        keep_mf = u_mf;
        keep_fm = u_fm;
        keep_s_mf = s_mf;
        keep_s_fm = s_fm;
        have_keep = true;
        lr = std::min(base_lr, lr * 1.25);
      }
      adam_step(u_mf.raw(), keep.grad_mf.raw(), s_mf, lr, cfg.beta1, cfg.beta2, cfg.epsilon);
      adam_step(u_fm.raw(), keep.grad_fm.raw(), s_fm, lr, cfg.beta1, cfg.beta2, cfg.epsilon);
    }
    u_mf = keep_mf;
    u_fm = keep_fm;
    res.iterations_run[level] = run;
  }

  res.u_mf = std::move(u_mf);
  res.u_fm = std::move(u_fm);
  // Fields are stored as float32 on disk; round here so the in-memory
  // result, the written files and any later warp of them agree exactly.
  for (auto* f : {&res.u_mf, &res.u_fm})
    for (double& v : f->raw()) v = static_cast<double>(static_cast<float>(v));
  res.u_mf.set_spacing(fixed.spacing());
  res.u_fm.set_spacing(moving.spacing());
  res.warped_mf = warp_volume(moving, res.u_mf);
  res.warped_fm = warp_volume(fixed, res.u_fm);
  return res;
}

}  // namespace cicreg
