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
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cicreg {

// Error hierarchy. The C API maps each class onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: dimension mismatches, out-of-range parameters, config errors.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported file content.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A metric is mathematically undefined for the given inputs.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  int operator[](int axis) const noexcept { return axis == 0 ? nx : axis == 1 ? ny : nz; }
  int min_dim() const noexcept { return nx < ny ? (nx < nz ? nx : nz) : (ny < nz ? ny : nz); }
  bool positive() const noexcept { return nx > 0 && ny > 0 && nz > 0; }

  // x-fastest linear index.
  std::size_t index(int x, int y, int z) const noexcept {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
  }
  std::size_t stride(int axis) const noexcept {
    return axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(nx) : static_cast<std::size_t>(nx) * ny;
  }

  friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  double operator[](int axis) const noexcept { return axis == 0 ? sx : axis == 1 ? sy : sz; }
  friend bool operator==(const Spacing&, const Spacing&) = default;
};

}  // namespace cicreg
