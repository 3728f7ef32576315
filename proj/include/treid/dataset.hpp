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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treid/tensor.hpp"

namespace treid {

enum class View { A, B };

[[nodiscard]] char view_char(View v) noexcept;
/// Accepts "A" or "B". Throws FormatError otherwise.
[[nodiscard]] View parse_view(std::string_view s);

using PersonId = std::int64_t;

/// Descriptor vectors of one camera view: row n belongs to person_ids[n].
struct FeatureSet {
  std::string descriptor_name;
  View view = View::A;
  std::vector<PersonId> person_ids;
  Matrix features;  // N x D_full

  [[nodiscard]] std::size_t size() const noexcept { return person_ids.size(); }
  [[nodiscard]] std::size_t dim() const noexcept {
    return static_cast<std::size_t>(features.cols());
  }

  /// Throws DataError/ShapeError on empty sets, duplicate ids, row count
  /// mismatches, or non-finite values.
  void validate() const;

  /// Rows for the given ids, in that order. Throws DataError on unknown ids.
  [[nodiscard]] FeatureSet subset(std::span<const PersonId> ids) const;
};

/// Two views restricted to the same persons in the same (ascending) order.
struct PairedViews {
  FeatureSet view_a;
  FeatureSet view_b;

  [[nodiscard]] const std::vector<PersonId>& person_ids() const noexcept {
    return view_a.person_ids;
  }
};

struct StandardizationStats {
  Vector mean;
  Vector stddev;  // floored at kStdFloor

  static constexpr double kStdFloor = 1e-12;

  /// mean 0, stddev 1.
  [[nodiscard]] static StandardizationStats identity(std::size_t dim);
};

enum class FeatureFormat { Csv, Bin };

[[nodiscard]] FeatureFormat parse_feature_format(std::string_view s);

/// CSV: header `person_id,view,f0,...,f{D-1}`; every row must name the same
/// view. Binary "TFV1": magic, u32 N, u32 D, N*D f64 row-major, N u64 ids,
/// all little-endian. The binary format carries no view or name, so both come
/// from the arguments; for CSV the file's view wins.
[[nodiscard]] FeatureSet load_feature_set(const std::filesystem::path& path,
                                          FeatureFormat format,
                                          std::string descriptor_name = {},
                                          View view = View::A);

[[nodiscard]] FeatureSet parse_feature_csv(std::string_view text,
                                           std::string descriptor_name = {});
[[nodiscard]] FeatureSet parse_feature_bin(std::span<const std::uint8_t> bytes,
                                           std::string descriptor_name,
                                           View view);

/// Values are printed in shortest round-trip form, so reloading is exact.
[[nodiscard]] std::string format_feature_csv(const FeatureSet& fs);
[[nodiscard]] std::vector<std::uint8_t> format_feature_bin(const FeatureSet& fs);

void save_feature_set(const FeatureSet& fs, const std::filesystem::path& path,
                      FeatureFormat format);

/// z-score statistics over all rows of all sets (population std).
[[nodiscard]] StandardizationStats fit_standardizer(
    std::span<const FeatureSet> train_sets);
[[nodiscard]] FeatureSet apply_standardizer(const StandardizationStats& stats,
                                            const FeatureSet& fs);

/// Splits every descriptor row into ceil(D/w) parts of width w, zero-padding
/// the last part. Result dims are (parts, w, N).
[[nodiscard]] Tensor3 tensorize(const FeatureSet& fs, std::size_t part_width);

/// Stacks b's parts after a's. Part width and person count must agree.
[[nodiscard]] Tensor3 fuse(const Tensor3& a, const Tensor3& b);

/// Restricts both sets to the ascending intersection of their ids.
[[nodiscard]] PairedViews align_views(const FeatureSet& a, const FeatureSet& b);

}  // namespace treid
