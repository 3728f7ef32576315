// Copyright 2026 The tensor-reid Authors
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

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "treid/errors.hpp"

namespace treid {

using Matrix = Eigen::MatrixXd;  // column-major
using Vector = Eigen::VectorXd;

using Dims3 = std::array<std::size_t, 3>;

/// Tensor mode, 1-based as in the usual multilinear notation.
class ModeIndex {
 public:
  /// Throws RangeError unless value is 1, 2 or 3.
  constexpr explicit ModeIndex(int value) : value_(value) {
    if (value < 1 || value > 3) throw RangeError("mode index must be 1, 2 or 3");
  }

  [[nodiscard]] int value() const noexcept { return value_; }
  /// Zero-based position into Dims3.
  [[nodiscard]] std::size_t axis() const noexcept {
    return static_cast<std::size_t>(value_ - 1);
  }

  friend bool operator==(ModeIndex, ModeIndex) = default;

 private:
  int value_;
};

inline constexpr ModeIndex kPartsMode{1};
inline constexpr ModeIndex kFeaturesMode{2};
inline constexpr ModeIndex kPersonsMode{3};

/// Dense 3-order tensor (parts x features x persons).
///
/// Element (i, j, k) lives at flat index i + j*m1 + k*m1*m2, so a single
/// person's slice is a contiguous column-major m1 x m2 block.
class Tensor3 {
 public:
  /// Zero-filled tensor. All dims must be >= 1.
  explicit Tensor3(const Dims3& dims);
  /// Takes ownership of data; validates length and finiteness.
  Tensor3(const Dims3& dims, std::vector<double> data);

  [[nodiscard]] const Dims3& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t dim(ModeIndex mode) const noexcept {
    return dims_[mode.axis()];
  }
  [[nodiscard]] std::size_t parts() const noexcept { return dims_[0]; }
  [[nodiscard]] std::size_t features() const noexcept { return dims_[1]; }
  [[nodiscard]] std::size_t persons() const noexcept { return dims_[2]; }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j,
                                  std::size_t k) const noexcept {
    return data_[index(i, j, k)];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
    return data_[index(i, j, k)];
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j,
                                  std::size_t k) const noexcept {
    return i + dims_[0] * (j + dims_[1] * k);
  }

  Dims3 dims_;
  std::vector<double> data_;
};

/// Mode-n unfolding: rows index `mode`, columns enumerate the two remaining
/// modes with the lower mode index varying fastest.
[[nodiscard]] Matrix unfold(const Tensor3& t, ModeIndex mode);

/// Inverse of unfold. Throws ShapeError when m does not match dims.
[[nodiscard]] Tensor3 fold(const Matrix& m, ModeIndex mode, const Dims3& dims);

/// t x_mode u^T: replaces dim(mode) by u.cols(). Only modes 1 and 2 are
/// reducible; the persons mode is rejected.
[[nodiscard]] Tensor3 mode_product(const Tensor3& t, const Matrix& u,
                                   ModeIndex mode);

/// The m1 x m2 matrix of person k.
[[nodiscard]] Matrix person_slice(const Tensor3& t, std::size_t k);

/// All person slices, in mode-3 order.
[[nodiscard]] std::vector<Matrix> person_slices(const Tensor3& t);

/// Column-major flattening.
[[nodiscard]] Vector vectorize(const Matrix& m);

/// Throws DataError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace treid
