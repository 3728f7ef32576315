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
#include <string>
#include <vector>

#include "treid/dataset.hpp"
#include "treid/tensor.hpp"

namespace treid {

using Labels = std::span<const PersonId>;

/// Intra-personal and extra-personal second moments of cross-view
/// differences, with the number of pairs behind each.
struct ScatterPair {
  Matrix sigma_i;
  Matrix sigma_e;
  std::size_t n_i = 0;
  std::size_t n_e = 0;
};

/// Generalized eigenpairs, eigenvalues descending. Columns of `vectors` have
/// unit norm and their first non-negligible component is positive.
struct Spectrum {
  Vector values;
  Matrix vectors;

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(values.size());
  }
  /// Number of eigenvalues strictly above 1.
  [[nodiscard]] std::size_t count_above_one() const noexcept;
};

/// Running sums for difference moments. Rows of xa/xb are samples; every
/// view-A row is paired with every view-B row. Several batches may be added
/// (one per column of a projected slice, for instance); the result averages
/// over all of them.
class DifferenceMomentAccumulator {
 public:
  explicit DifferenceMomentAccumulator(std::size_t dim);

  void add(const Matrix& xa, Labels la, const Matrix& xb, Labels lb);

  /// Sigma_I = intra sum / intra count and Sigma_E from the all-pairs closed
  /// form. Throws DataError when there are no positive or negative pairs.
  [[nodiscard]] ScatterPair finish() const;

  [[nodiscard]] std::size_t intra_count() const noexcept { return n_intra_; }
  [[nodiscard]] std::size_t all_count() const noexcept { return n_all_; }

 private:
  Matrix intra_;
  Matrix all_;
  std::size_t n_intra_ = 0;
  std::size_t n_all_ = 0;
};

[[nodiscard]] ScatterPair difference_moments(const Matrix& xa, Labels la,
                                             const Matrix& xb, Labels lb);

/// s + eps * (trace(s) / d) * I, or s + eps * I when the trace is zero.
[[nodiscard]] Matrix regularize(const Matrix& s, double eps);

/// All eigenpairs of sigma_e w = lambda sigma_i w, descending.
/// Throws NumericalError if sigma_i is not positive definite.
[[nodiscard]] Spectrum solve_gen_eig_all(const Matrix& sigma_e, const Matrix& sigma_i);

/// As solve_gen_eig_all, keeping only lambda > 0.
[[nodiscard]] Spectrum solve_gen_eig(const Matrix& sigma_e, const Matrix& sigma_i);

/// inv(regularize(sigma_i)) - inv(regularize(sigma_e)).
[[nodiscard]] Matrix metric_from_moments(const ScatterPair& s, double eps);

struct XqdaConfig {
  std::size_t out_dim = 0;
  double reg_eps = 1e-3;
};

struct XqdaModel {
  Matrix projection;  // d x r
  Matrix metric;      // r x r
  double reg_eps = 0.0;
  std::size_t eigen_above_one = 0;
  std::vector<std::string> warnings;

  static constexpr double kSubspaceEps = 1e-6;

  /// Rows of `samples` mapped into the learned subspace.
  [[nodiscard]] Matrix project(const Matrix& samples) const;
  /// (x - z)^T W M W^T (x - z).
  [[nodiscard]] double distance(const Vector& x, const Vector& z) const;
};

[[nodiscard]] XqdaModel xqda_train(const Matrix& xa, Labels la, const Matrix& xb,
                                   Labels lb, const XqdaConfig& config);

}  // namespace treid
