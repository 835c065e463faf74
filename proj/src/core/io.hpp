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
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"
#include "volume.hpp"

namespace cicreg {

enum class FileFormat { kMvol, kNifti, kNiftiGz };

// From the extension: .mvol, .nii, .nii.gz.
std::optional<FileFormat> format_from_path(const std::string& path);

// Decoded image of any channel count, channel-planar float32 data.
struct RawImage {
  Dims dims;
  int channels = 1;
  Spacing spacing;
  std::vector<float> data;
  std::optional<NiftiGeometry> geometry;
};

RawImage read_image(const std::string& path);
void write_image(const RawImage& img, const std::string& path);

// MVOL codec on in-memory bytes. decode reports the byte offset of any defect.
std::vector<std::uint8_t> encode_mvol(const RawImage& img);
RawImage decode_mvol(const std::vector<std::uint8_t>& bytes);

// NIfTI-1 single-file codec (uncompressed bytes). Writing always emits float32.
std::vector<std::uint8_t> encode_nifti(const RawImage& img);
RawImage decode_nifti(const std::vector<std::uint8_t>& bytes);

// Volumes must have one channel, fields three; otherwise InvalidInput.
Volume load_volume(const std::string& path);
void save_volume(const Volume& v, const std::string& path);
DisplacementField load_field(const std::string& path);
void save_field(const DisplacementField& u, const std::string& path);

// Whole-file helpers. Writes go to a temporary sibling and are renamed
// into place, so a failed write never leaves a partial file.
std::vector<std::uint8_t> read_file(const std::string& path, bool gunzip = false);
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes, bool gzip = false);

}  // namespace cicreg
