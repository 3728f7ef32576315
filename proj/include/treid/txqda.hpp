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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "treid/tensor.hpp"
#include "treid/xqda.hpp"

namespace treid {

struct TxqdaConfig {
  std::size_t p_out = 1;  // mode-1 (parts) output dim
  std::size_t d_out = 1;  // mode-2 (features) output dim
  std::size_t max_iters = 5;
  double conv_tol = 1e-6;
  double reg_eps = 1e-3;

  /// Throws RangeError unless 1 <= p_out <= parts, 1 <= d_out <= width and
  /// max_iters >= 1.
  void validate(std::size_t parts, std::size_t width) const;
};

struct TxqdaModel {
  Matrix u1;      // parts x p_out
  Matrix u2;      // width x d_out
  Matrix metric;  // (p_out*d_out) square
  std::size_t iterations_run = 0;
  /// Per iteration, the larger of the two modes' projector changes.
  std::vector<double> convergence_trace;
  TxqdaConfig config;
  std::size_t mode1_above_one = 0;
  std::size_t mode2_above_one = 0;
  std::vector<std::string> warnings;
  /// Caller-owned data stored alongside the model (feature pipeline etc.).
  nlohmann::json extra = nlohmann::json::object();

  static constexpr double kSubspaceEps = 1e-6;

  [[nodiscard]] std::size_t parts() const noexcept { return static_cast<std::size_t>(u1.rows()); }
  [[nodiscard]] std::size_t width() const noexcept { return static_cast<std::size_t>(u2.rows()); }
  [[nodiscard]] std::size_t out_dim() const noexcept {
    return static_cast<std::size_t>(u1.cols() * u2.cols());
  }

  /// (x - y)^T M (x - y) on projected rows.
  [[nodiscard]] double distance(const Vector& x, const Vector& y) const;
};

/// Per-mode difference moments. For mode 1 each slice is first multiplied
/// on the right by u_other (= U2) and the columns of the result are the
/// samples; for mode 2 each slice is multiplied on the left by u_other^T
/// (= U1^T) and its rows are the samples. Pair counts in the result are per
/// person pair.
[[nodiscard]] ScatterPair mode_scatter(std::span<const Matrix> slices_a,
                                       std::span<const Matrix> slices_b, Labels labels,
                                       const Matrix& u_other, ModeIndex mode);

/// Alternating mode-1 / mode-2 discriminant learning on person-aligned
/// tensors, then a Mahalanobis form on the vectorized projected slices.
[[nodiscard]] TxqdaModel txqda_train(const Tensor3& view_a, const Tensor3& view_b,
                                     Labels labels, const TxqdaConfig& config);

/// Row k = vectorize(U1^T * slice_k * U2).
[[nodiscard]] Matrix project(const TxqdaModel& model, const Tensor3& t);

/// "TXQD" v1 model blob; see README for the layout.
[[nodiscard]] std::vector<std::uint8_t> serialize_model(const TxqdaModel& model);
[[nodiscard]] TxqdaModel deserialize_model(std::span<const std::uint8_t> bytes);

}  // namespace treid
