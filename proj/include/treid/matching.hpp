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
#include <span>
#include <vector>

#include "treid/tensor.hpp"

namespace treid {

/// Gallery entries for one probe, best first. `distances` and `similarities`
/// follow `order`.
struct RankedList {
  std::vector<std::size_t> order;
  std::vector<double> distances;
  std::vector<double> similarities;

  [[nodiscard]] std::size_t size() const noexcept { return order.size(); }
};

/// (x - y)^T M (x - y). M may be indefinite, so negative values are legal.
[[nodiscard]] double mahalanobis(const Matrix& m_form, const Vector& x, const Vector& y);

/// Stable ascending sort of raw distances (ties by gallery index), with
/// min-max similarities attached.
[[nodiscard]] RankedList rank_distances(std::span<const double> distances);

/// Ranks the rows of `gallery` against `probe`.
[[nodiscard]] RankedList rank_gallery(const Vector& probe, const Matrix& gallery,
                                      const Matrix& m_form);

/// s_i = (d_max - d_i) / (d_max - d_min); all ones for a constant input.
[[nodiscard]] std::vector<double> normalize_scores(std::span<const double> distances);

/// Orders indices by descending similarity, ties by index.
[[nodiscard]] std::vector<std::size_t> order_by_similarity(std::span<const double> similarities);

/// probes.rows() x gallery.rows() matrix of mahalanobis distances.
[[nodiscard]] Matrix distance_matrix(const Matrix& probes, const Matrix& gallery,
                                     const Matrix& m_form);

}  // namespace treid
