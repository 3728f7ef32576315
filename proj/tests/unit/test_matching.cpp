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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "treid/matching.hpp"

using namespace treid;

TEST_CASE("mahalanobis") {
  const Vector x{{1.5, -2.0}};
  CHECK(mahalanobis(Matrix::Identity(2, 2), x, x) == 0.0);
  CHECK(mahalanobis(Matrix::Identity(2, 2), Vector{{3, 4}}, Vector{{0, 0}}) == 25.0);
  CHECK(mahalanobis(Matrix{{1, 0}, {0, -1}}, Vector{{0, 2}}, Vector{{0, 0}}) == -4.0);
  CHECK_THROWS_AS(mahalanobis(Matrix::Identity(3, 3), x, x), ShapeError);
  CHECK_THROWS_AS(mahalanobis(Matrix::Identity(2, 2), x, Vector{{1.0}}), ShapeError);

  std::mt19937_64 gen(1);
  const Matrix a = testing::random_matrix(gen, 5, 5);
  const Matrix m = a + a.transpose();  // indefinite in general
  for (int t = 0; t < 20; ++t) {
    const Vector u = testing::random_matrix(gen, 5, 1);
    const Vector v = testing::random_matrix(gen, 5, 1);
    CHECK(mahalanobis(m, u, u) == 0.0);
    const double d = mahalanobis(m, u, v);
    CHECK(std::abs(d - mahalanobis(m, v, u)) <= 1e-12 * (1.0 + std::abs(d)));
  }
}

TEST_CASE("rank_distances") {
  const std::vector<double> d{0.5, 0.2, 0.9};
  const RankedList r = rank_distances(d);
  CHECK(r.order == std::vector<std::size_t>{1, 0, 2});
  CHECK(r.distances == std::vector<double>{0.2, 0.5, 0.9});
  CHECK(r.similarities.front() == 1.0);
  CHECK(r.similarities.back() == 0.0);

  CHECK(rank_distances(std::vector<double>(4, 3.0)).order == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(rank_distances(std::vector<double>{7.0}).order == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(rank_distances(std::vector<double>{}), ShapeError);

  const std::vector<double> ties{1.0, 0.0, 1.0, 0.0};
  CHECK(rank_distances(ties).order == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("rank_gallery") {
  const Matrix gallery{{0, 0}, {3, 4}, {1, 0}};
  const RankedList r = rank_gallery(Vector{{0.9, 0.0}}, gallery, Matrix::Identity(2, 2));
  CHECK(r.order == std::vector<std::size_t>{2, 0, 1});
  CHECK_THROWS_AS(rank_gallery(Vector{{0.0}}, gallery, Matrix::Identity(1, 1)), ShapeError);
  CHECK_THROWS_AS(rank_gallery(Vector{{0.0, 0.0}}, Matrix(0, 2), Matrix::Identity(2, 2)), ShapeError);

  SUBCASE("appending a gallery entry keeps the relative order") {
    std::mt19937_64 gen(77);
    const Matrix g = testing::random_matrix(gen, 12, 3);
    const Vector p = testing::random_matrix(gen, 3, 1);
    const RankedList before = rank_gallery(p, g, Matrix::Identity(3, 3));
    Matrix g2(13, 3);
    g2 << g, testing::random_matrix(gen, 1, 3);
    RankedList after = rank_gallery(p, g2, Matrix::Identity(3, 3));
    std::erase(after.order, std::size_t{12});
    CHECK(after.order == before.order);
  }
}

TEST_CASE("normalize_scores") {
  CHECK(normalize_scores(std::vector<double>{2, 4, 6}) == std::vector<double>{1, 0.5, 0});
  CHECK(normalize_scores(std::vector<double>{5, 5}) == std::vector<double>{1, 1});
  CHECK(normalize_scores(std::vector<double>{-3}) == std::vector<double>{1});

  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> ud(-10.0, 10.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> d(2 + gen() % 30);
    for (double& v : d) v = ud(gen);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    const auto s = normalize_scores(d);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
    for (double v : s) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("similarity order matches distance order") {
  std::mt19937_64 gen(10);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> d(1 + gen() % 20);
    for (double& v : d) v = static_cast<double>(gen() % 7) - 3.0;  // plenty of ties
    const RankedList r = rank_distances(d);
    CHECK(order_by_similarity(normalize_scores(d)) == r.order);
  }
}
