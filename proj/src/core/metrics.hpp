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

#include <optional>
#include <string>
#include <vector>

#include "volume.hpp"

namespace cicreg {

// One evaluation row. Fields that are undefined for the inputs are empty
// and come with an entry in `warnings`. psnr is +inf when mse is 0.
struct MetricReport {
  std::optional<double> ssim;
  std::optional<double> ncc;
  std::optional<double> mi;  // nats
  std::optional<double> psnr;  // dB
  std::optional<double> mse;
  std::optional<double> mae;
  std::optional<double> dice;
  std::optional<double> gradient_similarity;
  std::vector<std::string> warnings;
};

inline constexpr double kDiceThreshold = 0.1;
inline constexpr int kMiBins = 32;

// Global Pearson correlation. Throws UndefinedMetric when both inputs are
// constant; returns 0 when exactly one is.
double ncc(const Volume& a, const Volume& b);

// Joint-histogram MI in nats over [0, 1]^2 with bins x bins equal cells.
double mutual_information(const Volume& a, const Volume& b, int bins = kMiBins);

double mse(const Volume& a, const Volume& b);
double mae(const Volume& a, const Volume& b);
// 10 log10(1 / mse), peak 1. +inf for identical inputs.
double psnr(const Volume& a, const Volume& b);

// Dice of the strict-threshold masks; 1 when both masks are empty.
double dice(const Volume& a, const Volume& b, double threshold = kDiceThreshold);

// Pearson correlation of central-difference gradient magnitude maps.
double gradient_similarity(const Volume& a, const Volume& b);

// Mean single-scale SSIM with default window parameters.
double ssim(const Volume& a, const Volume& b);

MetricReport evaluate_all(const Volume& warped, const Volume& fixed);

}  // namespace cicreg
