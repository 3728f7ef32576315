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

#include "treid/tensor.hpp"

#include <cmath>
#include <string>

namespace treid {
namespace {

std::size_t volume(const Dims3& d) { return d[0] * d[1] * d[2]; }

void check_dims(const Dims3& d) {
  if (d[0] == 0 || d[1] == 0 || d[2] == 0) {
    throw ShapeError("tensor dims must all be >= 1");
  }
}

std::string dims_str(const Dims3& d) {
  return "(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + "," +
         std::to_string(d[2]) + ")";
}

// The two modes other than `axis`, lower first.
std::array<std::size_t, 2> other_axes(std::size_t axis) {
  switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

}  // namespace

Tensor3::Tensor3(const Dims3& dims) : dims_(dims) {
  check_dims(dims_);
  data_.assign(volume(dims_), 0.0);
}

Tensor3::Tensor3(const Dims3& dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != volume(dims_)) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match dims " + dims_str(dims_));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DataError("tensor contains a non-finite value");
  }
}

Matrix unfold(const Tensor3& t, ModeIndex mode) {
  const Dims3& d = t.dims();
  const std::size_t axis = mode.axis();
  const auto [a, b] = other_axes(axis);
  Matrix out(static_cast<Eigen::Index>(d[axis]),
             static_cast<Eigen::Index>(d[a] * d[b]));
  std::array<std::size_t, 3> idx{};
  for (idx[2] = 0; idx[2] < d[2]; ++idx[2]) {
    for (idx[1] = 0; idx[1] < d[1]; ++idx[1]) {
      for (idx[0] = 0; idx[0] < d[0]; ++idx[0]) {
        const std::size_t col = idx[a] + idx[b] * d[a];
        out(static_cast<Eigen::Index>(idx[axis]),
            static_cast<Eigen::Index>(col)) = t(idx[0], idx[1], idx[2]);
      }
    }
  }
  return out;
}

Tensor3 fold(const Matrix& m, ModeIndex mode, const Dims3& dims) {
  check_dims(dims);
  const std::size_t axis = mode.axis();
  const auto [a, b] = other_axes(axis);
  if (static_cast<std::size_t>(m.rows()) != dims[axis] ||
      static_cast<std::size_t>(m.cols()) != dims[a] * dims[b]) {
    throw ShapeError("cannot fold a " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + " matrix along mode " +
                     std::to_string(mode.value()) + " into dims " +
                     dims_str(dims));
  }
  require_finite(m, "fold input");
  Tensor3 out(dims);
  std::array<std::size_t, 3> idx{};
  for (idx[2] = 0; idx[2] < dims[2]; ++idx[2]) {
    for (idx[1] = 0; idx[1] < dims[1]; ++idx[1]) {
      for (idx[0] = 0; idx[0] < dims[0]; ++idx[0]) {
        const std::size_t col = idx[a] + idx[b] * dims[a];
        out(idx[0], idx[1], idx[2]) = m(static_cast<Eigen::Index>(idx[axis]),
                                        static_cast<Eigen::Index>(col));
      }
    }
  }
  return out;
}

Tensor3 mode_product(const Tensor3& t, const Matrix& u, ModeIndex mode) {
  if (mode == kPersonsMode) {
    throw RangeError("the persons mode cannot be projected");
  }
  if (static_cast<std::size_t>(u.rows()) != t.dim(mode) || u.cols() < 1) {
    throw ShapeError("projection has " + std::to_string(u.rows()) +
                     " rows, mode " + std::to_string(mode.value()) + " has " +
                     std::to_string(t.dim(mode)));
  }
  Dims3 dims = t.dims();
  dims[mode.axis()] = static_cast<std::size_t>(u.cols());
  const Matrix projected = u.transpose() * unfold(t, mode);
  return fold(projected, mode, dims);
}

Matrix person_slice(const Tensor3& t, std::size_t k) {
  if (k >= t.persons()) {
    throw RangeError("person index " + std::to_string(k) + " out of range [0," +
                     std::to_string(t.persons()) + ")");
  }
  const auto block = static_cast<std::ptrdiff_t>(t.parts() * t.features());
  return Eigen::Map<const Matrix>(t.data().data() + block * static_cast<std::ptrdiff_t>(k),
                                  static_cast<Eigen::Index>(t.parts()),
                                  static_cast<Eigen::Index>(t.features()));
}

std::vector<Matrix> person_slices(const Tensor3& t) {
  std::vector<Matrix> out;
  out.reserve(t.persons());
  for (std::size_t k = 0; k < t.persons(); ++k) out.push_back(person_slice(t, k));
  return out;
}

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DataError(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace treid
