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

#include "field.hpp"
#include "ssim.hpp"
#include "volume.hpp"

namespace cicreg {

struct LossWeights {
  double lambda_smooth = 0.5;
  double lambda_img_cyc = 10.0;
  double lambda_flow_cyc = 1.0;
  double lambda_jac = 1000.0;

  void validate() const;
};

struct LossBreakdown {
  double similarity = 0.0;
  double smoothness = 0.0;
  double image_cycle = 0.0;
  double flow_cycle = 0.0;
  double jacobian_penalty = 0.0;
  double total = 0.0;
};

// total = similarity + l1*smoothness + l2*image_cycle + l3*flow_cycle + l4*jacobian_penalty,
// evaluated left to right.
double combine(const LossBreakdown& b, const LossWeights& w);

struct TermGrad {
  double loss = 0.0;
  DisplacementField grad;
};

struct PairGrad {
  double loss = 0.0;
  DisplacementField grad_mf;
  DisplacementField grad_fm;
};

// 1 - MS-SSIM(moving o u, fixed).
TermGrad similarity_loss_grad(const Volume& fixed, const Volume& moving, const DisplacementField& u,
                              const SsimParams& p = {});

// Mean squared forward difference of every component, zero across the far face.
TermGrad smoothness_loss_grad(const DisplacementField& u);

// 1/2 MSE(I_M reconstructed through u_MF then u_FM, I_M) + the mirrored term on I_F.
PairGrad image_cycle_loss_grad(const Volume& moving, const Volume& fixed, const DisplacementField& u_mf,
                               const DisplacementField& u_fm);

// Mean squared residual of u_FM(x) + u_MF(x + u_FM(x)) and its mirror, each weighted 1/2.
PairGrad flow_cycle_loss_grad(const DisplacementField& u_mf, const DisplacementField& u_fm);

// mean(max(0, -det(I + grad u))).
TermGrad jacobian_penalty_grad(const DisplacementField& u);

struct TotalLoss {
  LossBreakdown breakdown;
  DisplacementField grad_mf;
  DisplacementField grad_fm;
};

TotalLoss total_loss_grad(const Volume& moving, const Volume& fixed, const DisplacementField& u_mf,
                          const DisplacementField& u_fm, const LossWeights& w, const SsimParams& p = {});

// Per-voxel flow-cycle residual r_M(x) = u_FM(x) + u_MF(x + u_FM(x)).
DisplacementField flow_cycle_residual(const DisplacementField& u_mf, const DisplacementField& u_fm);

}  // namespace cicreg
