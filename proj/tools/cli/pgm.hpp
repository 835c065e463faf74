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
#include <string>
#include <vector>

namespace cicreg::cli {

struct Slice {
  std::string plane;  // axial, coronal or sagittal
  int width = 0;
  int height = 0;
  std::vector<float> pixels;  // row-major, width fastest
};

// Center slices of an x-fastest volume: axial (z = nz/2, x by y),
// coronal (y = ny/2, x by z) and sagittal (x = nx/2, y by z).
std::array<Slice, 3> center_slices(const float* data, const int dims[3]);

// Binary P5, maxval 255, min-max scaled per image; a constant image is 0.
std::vector<unsigned char> encode_pgm(const Slice& s);

}  // namespace cicreg::cli
