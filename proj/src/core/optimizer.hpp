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
#include <span>
#include <vector>

#include "field.hpp"
#include "losses.hpp"
#include "ssim.hpp"
#include "volume.hpp"

namespace cicreg {

struct RegistrationConfig {
  int levels = 3;
  std::vector<int> iters_per_level{100, 100, 50};  // coarse -> fine
  double step_size = 0.5;  // voxels at the coarsest level, halved per finer level
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double rel_tol = 1e-6;
  LossWeights weights;
  SsimParams ssim;
  std::uint64_t seed = 42;

  void validate() const;
  // Step size used at pyramid level `level` (0 = finest).
  double step_for_level(int level) const;
};

struct TraceEntry {
  int level = 0;  // 0 = finest
  int iteration = 0;
  LossBreakdown loss;
};

struct RegistrationResult {
  DisplacementField u_mf;
  DisplacementField u_fm;
  Volume warped_mf;
  Volume warped_fm;
  std::vector<TraceEntry> trace;  // in execution order, coarse level first
  std::vector<int> iterations_run;  // indexed by level, 0 = finest
  std::vector<bool> converged;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update in place; increments state.t first.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double step_size,
               double beta1, double beta2, double epsilon);

struct PyramidLevel {
  Volume moving;
  Volume fixed;
};

// Level 0 is the input pair; each next level is downsample2x of the previous.
std::vector<PyramidLevel> build_pyramids(const Volume& moving, const Volume& fixed, int levels);

RegistrationResult register_pair(const Volume& moving, const Volume& fixed, const RegistrationConfig& cfg);

}  // namespace cicreg
