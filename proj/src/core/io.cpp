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

#include "io.hpp"

#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace cicreg {

namespace {

constexpr char kMvolMagic[8] = {'M', 'V', 'O', 'L', '1', '\0', '\0', '\0'};
constexpr std::size_t kMvolPreamble = 12;
constexpr std::size_t kNiftiHeader = 348;
constexpr std::size_t kNiftiVoxOffset = 352;
constexpr std::int16_t kIntentVector = 1007;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Little-endian / byte-swapped scalar access on a byte buffer.
template <class T>
T load(const std::uint8_t* p, bool swap) {
  std::uint8_t tmp[sizeof(T)];
  std::memcpy(tmp, p, sizeof(T));
  if (swap) std::reverse(tmp, tmp + sizeof(T));
  T v;
  std::memcpy(&v, tmp, sizeof(T));
  return v;
}

template <class T>
void store_le(std::uint8_t* p, T v) {
  std::memcpy(p, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(p, p + sizeof(T));
}

constexpr bool kHostLittle = std::endian::native == std::endian::little;

}  // namespace

std::optional<FileFormat> format_from_path(const std::string& path) {
  if (ends_with(path, ".mvol")) return FileFormat::kMvol;
  if (ends_with(path, ".nii.gz")) return FileFormat::kNiftiGz;
  if (ends_with(path, ".nii")) return FileFormat::kNifti;
  return std::nullopt;
}

std::vector<std::uint8_t> read_file(const std::string& path, bool gunzip) {
  std::vector<std::uint8_t> out;
  if (gunzip) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
    std::uint8_t buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.insert(out.end(), buf, buf + n);
    int err = 0;
    const char* msg = gzerror(f, &err);
    const bool failed = n < 0 || (err != Z_OK && err != Z_BUF_ERROR);
    const std::string what = msg ? msg : "";
    gzclose(f);
    if (failed) throw FormatError("gzip stream error in '" + path + "': " + what, out.size());
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw IoError("cannot read '" + path + "'");
  in.seekg(0, std::ios::beg);
  out.resize(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(out.data()), size)) throw IoError("cannot read '" + path + "'");
  return out;
}

void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes, bool gzip) {
  static std::atomic<unsigned> counter{0};
  const std::string tmp = path + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  bool ok = false;
  if (gzip) {
    gzFile f = gzopen(tmp.c_str(), "wb6");
    if (f) {
      ok = bytes.empty() || gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size())) == static_cast<int>(bytes.size());
      ok = (gzclose(f) == Z_OK) && ok;
    }
  } else {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (f) {
      ok = bytes.empty() || std::fwrite(bytes.data(), 1, bytes.size(), f) == bytes.size();
      ok = (std::fclose(f) == 0) && ok;
    }
  }
  if (!ok) {
    const std::string reason = std::strerror(errno);
    std::remove(tmp.c_str());
    throw IoError("cannot write '" + path + "': " + reason);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot write '" + path + "': " + ec.message());
  }
}

// ---------------------------------------------------------------- MVOL

std::vector<std::uint8_t> encode_mvol(const RawImage& img) {
  nlohmann::ordered_json h;
  h["dims"] = {img.dims.nx, img.dims.ny, img.dims.nz};
  h["channels"] = img.channels;
  h["spacing"] = {img.spacing.sx, img.spacing.sy, img.spacing.sz};
  h["dtype"] = "f32le";
  const std::string text = h.dump();
  std::vector<std::uint8_t> out(kMvolPreamble + text.size() + 4 * img.data.size());
  std::memcpy(out.data(), kMvolMagic, 8);
  store_le<std::uint32_t>(out.data() + 8, static_cast<std::uint32_t>(text.size()));
  std::memcpy(out.data() + kMvolPreamble, text.data(), text.size());
  std::uint8_t* p = out.data() + kMvolPreamble + text.size();
  for (float v : img.data) {
    store_le<float>(p, v);
    p += 4;
  }
  return out;
}

RawImage decode_mvol(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMvolPreamble)
    throw FormatError("MVOL file is " + std::to_string(bytes.size()) + " bytes, shorter than the 12-byte preamble",
                      bytes.size());
  if (std::memcmp(bytes.data(), kMvolMagic, 8) != 0) throw FormatError("bad MVOL magic", 0);
  const std::uint32_t hlen = load<std::uint32_t>(bytes.data() + 8, !kHostLittle);
  if (kMvolPreamble + hlen > bytes.size())
    throw FormatError("MVOL header length " + std::to_string(hlen) + " exceeds file size", 8);

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.begin() + kMvolPreamble, bytes.begin() + kMvolPreamble + hlen);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("MVOL header is not valid JSON: ") + e.what(), kMvolPreamble);
  }

  RawImage img;
  try {
    const auto& dims = h.at("dims");
    if (!dims.is_array() || dims.size() != 3) throw FormatError("MVOL header 'dims' must have 3 entries", kMvolPreamble);
    img.dims = {dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>()};
    img.channels = h.at("channels").get<int>();
    if (h.contains("spacing")) {
      const auto& sp = h.at("spacing");
      if (!sp.is_array() || sp.size() != 3)
        throw FormatError("MVOL header 'spacing' must have 3 entries", kMvolPreamble);
      img.spacing = {sp[0].get<double>(), sp[1].get<double>(), sp[2].get<double>()};
    }
    const std::string dtype = h.at("dtype").get<std::string>();
    if (dtype != "f32le") throw FormatError("unsupported MVOL dtype '" + dtype + "'", kMvolPreamble);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed MVOL header: ") + e.what(), kMvolPreamble);
  }
  if (!img.dims.positive() || img.channels < 1)
    throw FormatError("MVOL header has non-positive dims or channels", kMvolPreamble);

  const std::size_t offset = kMvolPreamble + hlen;
  const std::size_t count = img.dims.count() * static_cast<std::size_t>(img.channels);
  const std::size_t expected = 4 * count;
  const std::size_t actual = bytes.size() - offset;
  if (actual != expected)
    throw FormatError("MVOL payload has " + std::to_string(actual) + " bytes, expected " + std::to_string(expected),
                      offset);
  img.data.resize(count);
  const std::uint8_t* p = bytes.data() + offset;
  for (std::size_t i = 0; i < count; ++i) {
    img.data[i] = load<float>(p + 4 * i, !kHostLittle);
    if (!std::isfinite(img.data[i]))
      throw FormatError("MVOL value " + std::to_string(i) + " is not finite", offset + 4 * i);
  }
  return img;
}

// ---------------------------------------------------------------- NIfTI-1

std::vector<std::uint8_t> encode_nifti(const RawImage& img) {
  std::vector<std::uint8_t> out(kNiftiVoxOffset + 4 * img.data.size(), 0);
  std::uint8_t* h = out.data();
  store_le<std::int32_t>(h + 0, static_cast<std::int32_t>(kNiftiHeader));
  h[38] = 'r';  // regular
  const bool vector = img.channels > 1;
  const std::int16_t dim[8] = {static_cast<std::int16_t>(vector ? 5 : 3),
                               static_cast<std::int16_t>(img.dims.nx),
                               static_cast<std::int16_t>(img.dims.ny),
                               static_cast<std::int16_t>(img.dims.nz),
                               1,
                               static_cast<std::int16_t>(img.channels),
                               1,
                               1};
  for (int i = 0; i < 8; ++i) store_le<std::int16_t>(h + 40 + 2 * i, dim[i]);
  if (vector) store_le<std::int16_t>(h + 68, kIntentVector);
  store_le<std::int16_t>(h + 70, 16);  // float32
  store_le<std::int16_t>(h + 72, 32);
  const NiftiGeometry g = img.geometry.value_or(NiftiGeometry{});
  const float pixdim[8] = {g.qfac, static_cast<float>(img.spacing.sx), static_cast<float>(img.spacing.sy),
                           static_cast<float>(img.spacing.sz), 1.0f, 1.0f, 1.0f, 1.0f};
  for (int i = 0; i < 8; ++i) store_le<float>(h + 76 + 4 * i, pixdim[i]);
  store_le<float>(h + 108, static_cast<float>(kNiftiVoxOffset));
  store_le<float>(h + 112, 1.0f);
  store_le<float>(h + 116, 0.0f);
  h[123] = 2;  // mm
  store_le<std::int16_t>(h + 252, g.qform_code);
  store_le<std::int16_t>(h + 254, g.sform_code);
  for (int i = 0; i < 3; ++i) store_le<float>(h + 256 + 4 * i, g.quatern[i]);
  for (int i = 0; i < 3; ++i) store_le<float>(h + 268 + 4 * i, g.qoffset[i]);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) store_le<float>(h + 280 + 16 * r + 4 * c, g.srow[r][c]);
  std::memcpy(h + 344, "n+1\0", 4);
  std::uint8_t* p = out.data() + kNiftiVoxOffset;
  for (float v : img.data) {
    store_le<float>(p, v);
    p += 4;
  }
  return out;
}

RawImage decode_nifti(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kNiftiHeader)
    throw FormatError("NIfTI file is " + std::to_string(bytes.size()) + " bytes, shorter than the 348-byte header",
                      bytes.size());
  const std::uint8_t* h = bytes.data();
  bool swap = !kHostLittle;
  if (load<std::int32_t>(h, swap) != static_cast<std::int32_t>(kNiftiHeader)) {
    swap = !swap;
    if (load<std::int32_t>(h, swap) != static_cast<std::int32_t>(kNiftiHeader))
      throw FormatError("NIfTI sizeof_hdr is not 348", 0);
  }
  if (std::memcmp(h + 344, "n+1\0", 4) != 0)
    throw FormatError("NIfTI magic is not 'n+1' (only single-file NIfTI-1 is supported)", 344);

  std::int16_t dim[8];
  for (int i = 0; i < 8; ++i) dim[i] = load<std::int16_t>(h + 40 + 2 * i, swap);
  if (dim[0] < 1 || dim[0] > 7) throw FormatError("NIfTI dim[0] = " + std::to_string(dim[0]) + " out of range", 40);
  auto dim_or_1 = [&](int i) { return i <= dim[0] ? static_cast<int>(dim[i]) : 1; };
  RawImage img;
  img.dims = {dim_or_1(1), dim_or_1(2), dim_or_1(3)};
  if (!img.dims.positive()) throw FormatError("NIfTI spatial dims must be positive", 42);
  if (dim_or_1(4) != 1) throw FormatError("NIfTI time dimension > 1 is not supported", 48);
  img.channels = dim_or_1(5);
  if (img.channels < 1 || dim_or_1(6) != 1 || dim_or_1(7) != 1)
    throw FormatError("unsupported NIfTI dims beyond 5-D vector layout", 50);

  const std::int16_t datatype = load<std::int16_t>(h + 70, swap);
  int bytes_per = 0;
  switch (datatype) {
    case 2: bytes_per = 1; break;
    case 4: bytes_per = 2; break;
    case 16: bytes_per = 4; break;
    default:
      throw FormatError("unsupported NIfTI datatype " + std::to_string(datatype) + " (uint8, int16, float32 only)", 70);
  }
  const std::int16_t bitpix = load<std::int16_t>(h + 72, swap);
  if (bitpix != 8 * bytes_per)
    throw FormatError("NIfTI bitpix " + std::to_string(bitpix) + " does not match datatype", 72);

  auto spacing = [&](int i) {
    const float v = std::abs(load<float>(h + 76 + 4 * i, swap));
    return v > 0.0f && std::isfinite(v) ? static_cast<double>(v) : 1.0;
  };
  img.spacing = {spacing(1), spacing(2), spacing(3)};

  NiftiGeometry g;
  g.qfac = load<float>(h + 76, swap) < 0.0f ? -1.0f : 1.0f;
  g.qform_code = load<std::int16_t>(h + 252, swap);
  g.sform_code = load<std::int16_t>(h + 254, swap);
  for (int i = 0; i < 3; ++i) g.quatern[i] = load<float>(h + 256 + 4 * i, swap);
  for (int i = 0; i < 3; ++i) g.qoffset[i] = load<float>(h + 268 + 4 * i, swap);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) g.srow[r][c] = load<float>(h + 280 + 16 * r + 4 * c, swap);
  img.geometry = g;

  const float vox_offset_f = load<float>(h + 108, swap);
  if (!(vox_offset_f >= static_cast<float>(kNiftiHeader)) || !std::isfinite(vox_offset_f))
    throw FormatError("NIfTI vox_offset must be >= 348", 108);
  const auto vox_offset = static_cast<std::size_t>(vox_offset_f);
  const std::size_t count = img.dims.count() * static_cast<std::size_t>(img.channels);
  const std::size_t expected = count * static_cast<std::size_t>(bytes_per);
  const std::size_t actual = bytes.size() > vox_offset ? bytes.size() - vox_offset : 0;
  if (actual < expected)
    throw FormatError("NIfTI payload has " + std::to_string(actual) + " bytes, header declares " +
                          std::to_string(expected),
                      vox_offset);

  float slope = load<float>(h + 112, swap);
  float inter = load<float>(h + 116, swap);
  const bool scaled = slope != 0.0f && std::isfinite(slope);
  if (!std::isfinite(inter)) inter = 0.0f;

  img.data.resize(count);
  const std::uint8_t* p = bytes.data() + vox_offset;
  for (std::size_t i = 0; i < count; ++i) {
    double v;
    switch (datatype) {
      case 2: v = p[i]; break;
      case 4: v = load<std::int16_t>(p + 2 * i, swap); break;
      default: v = load<float>(p + 4 * i, swap); break;
    }
    if (scaled) v = v * static_cast<double>(slope) + static_cast<double>(inter);
    img.data[i] = static_cast<float>(v);
    if (!std::isfinite(img.data[i]))
      throw FormatError("NIfTI voxel " + std::to_string(i) + " is not finite", vox_offset + i * bytes_per);
  }
  return img;
}

// ---------------------------------------------------------------- dispatch

RawImage read_image(const std::string& path) {
  const auto fmt = format_from_path(path);
  if (!fmt) throw FormatError("unrecognized image extension for '" + path + "' (expected .mvol, .nii, .nii.gz)", 0);
  try {
    if (*fmt == FileFormat::kMvol) return decode_mvol(read_file(path));
    return decode_nifti(read_file(path, *fmt == FileFormat::kNiftiGz));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what(), e.offset());
  }
}

void write_image(const RawImage& img, const std::string& path) {
  const auto fmt = format_from_path(path);
  if (!fmt) throw InvalidInput("unrecognized output extension for '" + path + "' (expected .mvol, .nii, .nii.gz)");
  if (*fmt == FileFormat::kMvol) {
    write_file_atomic(path, encode_mvol(img));
  } else {
    if (img.dims.nx > 32767 || img.dims.ny > 32767 || img.dims.nz > 32767)
      throw InvalidInput("NIfTI-1 dims are limited to 32767");
    write_file_atomic(path, encode_nifti(img), *fmt == FileFormat::kNiftiGz);
  }
}

Volume load_volume(const std::string& path) {
  RawImage img = read_image(path);
  if (img.channels != 1)
    throw InvalidInput("'" + path + "' has " + std::to_string(img.channels) + " channels, expected a 1-channel volume");
  Volume v(img.dims, std::move(img.data), img.spacing);
  v.geometry = img.geometry;
  return v;
}

void save_volume(const Volume& v, const std::string& path) {
  RawImage img{v.dims(), 1, v.spacing(), std::vector<float>(v.data().begin(), v.data().end()), v.geometry};
  write_image(img, path);
}

DisplacementField load_field(const std::string& path) {
  RawImage img = read_image(path);
  if (img.channels != 3)
    throw InvalidInput("'" + path + "' has " + std::to_string(img.channels) +
                       " channel(s), expected a 3-channel displacement field");
  std::vector<double> planar(img.data.begin(), img.data.end());
  return DisplacementField(img.dims, std::move(planar), img.spacing);
}

void save_field(const DisplacementField& u, const std::string& path) {
  RawImage img;
  img.dims = u.dims();
  img.channels = 3;
  img.spacing = u.spacing();
  img.data.resize(u.raw().size());
  std::transform(u.raw().begin(), u.raw().end(), img.data.begin(), [](double x) { return static_cast<float>(x); });
  write_image(img, path);
}

}  // namespace cicreg
