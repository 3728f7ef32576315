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

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "treid/dataset.hpp"

namespace treid {

/// Descriptor name -> person-aligned views.
using DescriptorViews = std::map<std::string, PairedViews>;
/// Descriptor name -> one view's features.
using DescriptorSets = std::map<std::string, FeatureSet>;

/// Ids present in every listed descriptor, ascending. Throws DataError if
/// a descriptor is missing or the intersection is empty.
[[nodiscard]] std::vector<PersonId> common_persons(const DescriptorViews& data,
                                                   const std::vector<std::string>& names);

/// Every listed descriptor restricted to `ids` (in that order).
[[nodiscard]] DescriptorViews restrict_persons(const DescriptorViews& data,
                                               const std::vector<std::string>& names,
                                               std::span<const PersonId> ids);

[[nodiscard]] DescriptorSets view_sets(const DescriptorViews& data, View view);

/// Standardize each descriptor, split it into parts of one shared width and
/// stack the descriptors' parts in `fusion` order.
struct FeaturePipeline {
  std::size_t part_width = 1;
  std::vector<std::string> fusion;
  bool standardize = true;
  std::map<std::string, StandardizationStats> stats;

  /// Fits standardization on both views' rows of every fused descriptor.
  void fit(const DescriptorViews& train);

  /// All sets must list the same persons in the same order.
  [[nodiscard]] Tensor3 transform(const DescriptorSets& sets) const;

  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] static FeaturePipeline from_json(const nlohmann::json& j);
};

}  // namespace treid
