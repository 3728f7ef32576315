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
#include <string>
#include <utility>

#include "treid/dataset.hpp"

namespace treid {

/// Linear latent-factor model of two camera views:
///
///   x_{p,v} = (A0 + view_shift * E_v) z_p + noise_sigma * e_{p,v}
///
/// with z_p ~ N(0, latent_scale^2 I) and A0, E_A, E_B having N(0, 1/latent_dim)
/// entries. view_shift = 0 makes both views share one map.
struct SynthConfig {
  std::size_t n_persons = 100;
  std::size_t latent_dim = 8;
  std::size_t feature_dim = 60;
  double noise_sigma = 0.2;
  double latent_scale = 1.0;
  double view_shift = 1.0;
  std::uint64_t view_transform_seed = 1;
  std::uint64_t sample_seed = 2;
  std::string descriptor_name = "synth";

  /// Throws RangeError on empty sizes, latent_dim > feature_dim or negative
  /// scales.
  void validate() const;
};

/// Draw order is part of the contract. Transform stream (view_transform_seed):
/// A0, E_A, E_B, each column-major. Sample stream (sample_seed): per person,
/// z_p, then view-A noise, then view-B noise. Person ids are 0..n-1.
[[nodiscard]] std::pair<FeatureSet, FeatureSet> generate_crossview(const SynthConfig& cfg);

}  // namespace treid
