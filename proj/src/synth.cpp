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

#include "treid/synth.hpp"

#include <cmath>

#include "treid/rng.hpp"

namespace treid {
namespace {

Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_persons < 1 || latent_dim < 1 || feature_dim < 1) {
    throw RangeError("synth: sizes must be >= 1");
  }
  if (latent_dim > feature_dim) throw RangeError("synth: latent_dim exceeds feature_dim");
  if (!(noise_sigma >= 0.0) || !(latent_scale >= 0.0) || !(view_shift >= 0.0)) {
    throw RangeError("synth: noise_sigma, latent_scale and view_shift must be >= 0");
  }
}

std::pair<FeatureSet, FeatureSet> generate_crossview(const SynthConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.n_persons);
  const auto d = static_cast<Eigen::Index>(cfg.feature_dim);
  const auto l = static_cast<Eigen::Index>(cfg.latent_dim);

  Rng transform_rng(cfg.view_transform_seed);
  const double entry_scale = 1.0 / std::sqrt(static_cast<double>(cfg.latent_dim));
  const Matrix base = gaussian_matrix(transform_rng, d, l, entry_scale);
  const Matrix shift_a = gaussian_matrix(transform_rng, d, l, entry_scale);
  const Matrix shift_b = gaussian_matrix(transform_rng, d, l, entry_scale);
  const Matrix map_a = base + cfg.view_shift * shift_a;
  const Matrix map_b = base + cfg.view_shift * shift_b;

  FeatureSet a{cfg.descriptor_name, View::A, {}, Matrix(n, d)};
  FeatureSet b{cfg.descriptor_name, View::B, {}, Matrix(n, d)};
  Rng sample_rng(cfg.sample_seed);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Vector z = gaussian_matrix(sample_rng, l, 1, cfg.latent_scale);
    const Vector noise_a = gaussian_matrix(sample_rng, d, 1, cfg.noise_sigma);
    const Vector noise_b = gaussian_matrix(sample_rng, d, 1, cfg.noise_sigma);
    a.features.row(p) = (map_a * z + noise_a).transpose();
    b.features.row(p) = (map_b * z + noise_b).transpose();
    a.person_ids.push_back(p);
    b.person_ids.push_back(p);
  }
  return {std::move(a), std::move(b)};
}

}  // namespace treid
