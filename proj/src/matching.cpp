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

#include "treid/matching.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace treid {
namespace {

void check_form(const Matrix& m, Eigen::Index dim) {
  if (m.rows() != m.cols() || m.rows() != dim) {
    throw ShapeError("metric is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ", vectors have dimension " + std::to_string(dim));
  }
}

}  // namespace

double mahalanobis(const Matrix& m_form, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw ShapeError("mahalanobis: vector sizes differ");
  check_form(m_form, x.size());
  const Vector d = x - y;
  return d.dot(m_form * d);
}

std::vector<double> normalize_scores(std::span<const double> distances) {
  if (distances.empty()) return {};
  const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
  const double d_min = *lo;
  const double d_max = *hi;
  std::vector<double> out(distances.size(), 1.0);
  if (d_max == d_min) return out;
  const double range = d_max - d_min;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    out[i] = (d_max - distances[i]) / range;
  }
  return out;
}

std::vector<std::size_t> order_by_similarity(std::span<const double> similarities) {
  std::vector<std::size_t> order(similarities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return similarities[a] > similarities[b];
  });
  return order;
}

RankedList rank_distances(std::span<const double> distances) {
  if (distances.empty()) throw ShapeError("rank: empty gallery");
  RankedList out;
  out.order.resize(distances.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    return distances[a] < distances[b];
  });
  const std::vector<double> sims = normalize_scores(distances);
  out.distances.reserve(distances.size());
  out.similarities.reserve(distances.size());
  for (std::size_t idx : out.order) {
    out.distances.push_back(distances[idx]);
    out.similarities.push_back(sims[idx]);
  }
  return out;
}

RankedList rank_gallery(const Vector& probe, const Matrix& gallery, const Matrix& m_form) {
  if (gallery.rows() == 0) throw ShapeError("rank: empty gallery");
  if (gallery.cols() != probe.size()) throw ShapeError("rank: probe/gallery dimension mismatch");
  check_form(m_form, probe.size());
  std::vector<double> d(static_cast<std::size_t>(gallery.rows()));
  for (Eigen::Index g = 0; g < gallery.rows(); ++g) {
    const Vector diff = probe - gallery.row(g).transpose();
    d[static_cast<std::size_t>(g)] = diff.dot(m_form * diff);
  }
  return rank_distances(d);
}

Matrix distance_matrix(const Matrix& probes, const Matrix& gallery, const Matrix& m_form) {
  if (probes.cols() != gallery.cols()) throw ShapeError("distance matrix: dimension mismatch");
  check_form(m_form, probes.cols());
  Matrix out(probes.rows(), gallery.rows());
  Vector diff(probes.cols());
  for (Eigen::Index p = 0; p < probes.rows(); ++p) {
    for (Eigen::Index g = 0; g < gallery.rows(); ++g) {
      diff = probes.row(p).transpose() - gallery.row(g).transpose();
      out(p, g) = diff.dot(m_form * diff);
    }
  }
  return out;
}

}  // namespace treid
