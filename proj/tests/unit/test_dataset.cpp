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

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "treid/dataset.hpp"

using namespace treid;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "treid_test_dataset";
  std::filesystem::create_directories(dir);
  return dir / name;
}

FeatureSet make_set(std::vector<PersonId> ids, Matrix features, View v = View::A) {
  return FeatureSet{"d", v, std::move(ids), std::move(features)};
}

}  // namespace

TEST_CASE("csv parsing") {
  const FeatureSet fs = parse_feature_csv("person_id,view,f0,f1\n7,A,1.0,2.0\n9,A,0.5,-1.0\n", "cnn");
  CHECK(fs.size() == 2);
  CHECK(fs.dim() == 2);
  CHECK(fs.view == View::A);
  CHECK(fs.person_ids == std::vector<PersonId>{7, 9});
  CHECK(fs.features(1, 1) == -1.0);
  CHECK(fs.descriptor_name == "cnn");

  SUBCASE("CRLF line endings") {
    const FeatureSet crlf = parse_feature_csv("person_id,view,f0\r\n1,B,3\r\n2,B,4\r\n");
    CHECK(crlf.view == View::B);
    CHECK(crlf.features(1, 0) == 4.0);
  }
  SUBCASE("duplicate identity") {
    CHECK_THROWS_AS(parse_feature_csv("person_id,view,f0,f1\n7,A,1.0,2.0\n7,A,0.5,-1.0\n"),
                    DataError);
  }
  SUBCASE("errors name the line") {
    try {
      (void)parse_feature_csv("person_id,view,f0\n1,A,2\n2,A,x\n");
      FAIL("expected a parse error");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_feature_csv("id,view,f0\n1,A,2\n"), FormatError);
    CHECK_THROWS_AS(parse_feature_csv("person_id,view,f0\n1,A,2,3\n"), FormatError);
    CHECK_THROWS_AS(parse_feature_csv("person_id,view,f0\n1,A,2\n2,B,3\n"), FormatError);
    CHECK_THROWS_AS(parse_feature_csv("person_id,view,f0\n1,A,inf\n"), FormatError);
    CHECK_THROWS_AS(parse_feature_csv("person_id,view,f0\n1,C,1\n"), FormatError);
  }
}

TEST_CASE("binary format") {
  Matrix f(3, 4);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = 0.25 * static_cast<double>(i) - 1.0;
  const FeatureSet fs = make_set({5, 3, 8}, f, View::B);
  const auto bytes = format_feature_bin(fs);
  REQUIRE(bytes.size() == 4 + 8 + 8 * 12 + 8 * 3);
  CHECK(bytes[0] == 0x54);
  CHECK(bytes[1] == 0x46);
  CHECK(bytes[2] == 0x56);
  CHECK(bytes[3] == 0x31);
  CHECK(bytes[4] == 3);  // N, little-endian
  CHECK(bytes[8] == 4);  // D

  const FeatureSet back = parse_feature_bin(bytes, "d", View::B);
  CHECK(back.size() == 3);
  CHECK(back.dim() == 4);
  CHECK(back.features == fs.features);
  CHECK(back.person_ids == fs.person_ids);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_feature_bin(bad, "d", View::A), FormatError);
  bad = bytes;
  bad.pop_back();
  CHECK_THROWS_AS(parse_feature_bin(bad, "d", View::A), FormatError);
}

TEST_CASE("save/load round trip is exact for both formats") {
  std::mt19937_64 gen(17);
  const FeatureSet fs = make_set({4, 1, 9, 2}, testing::random_matrix(gen, 4, 6) * 1e3);
  for (const auto fmt : {FeatureFormat::Csv, FeatureFormat::Bin}) {
    const auto path = temp_path(fmt == FeatureFormat::Csv ? "rt.csv" : "rt.bin");
    save_feature_set(fs, path, fmt);
    const FeatureSet back = load_feature_set(path, fmt, "x", View::A);
    CHECK(back.features == fs.features);
    CHECK(back.person_ids == fs.person_ids);
    CHECK(back.view == View::A);
  }
  CHECK_THROWS_AS(load_feature_set(temp_path("missing.csv"), FeatureFormat::Csv), FormatError);
}

TEST_CASE("standardizer") {
  const FeatureSet fs = make_set({1, 2}, Matrix{{0, 0}, {2, 2}});
  const FeatureSet sets[] = {fs};
  const StandardizationStats st = fit_standardizer(sets);
  CHECK(st.mean == Vector{{1, 1}});
  CHECK(st.stddev == Vector{{1, 1}});
  CHECK(apply_standardizer(st, fs).features.row(1) == Eigen::RowVector2d(1, 1));

  SUBCASE("constant column is floored and maps to zero") {
    const FeatureSet c = make_set({1, 2, 3}, Matrix{{5, 0}, {5, 1}, {5, 2}});
    const FeatureSet cs[] = {c};
    const StandardizationStats s2 = fit_standardizer(cs);
    CHECK(s2.stddev(0) == StandardizationStats::kStdFloor);
    CHECK(apply_standardizer(s2, c).features.col(0).isZero(0.0));
  }
  SUBCASE("identity stats return input bitwise") {
    std::mt19937_64 gen(2);
    const FeatureSet r = make_set({1, 2, 3}, testing::random_matrix(gen, 3, 5));
    CHECK(apply_standardizer(StandardizationStats::identity(5), r).features == r.features);
  }
  SUBCASE("pooled fit standardizes the pool") {
    std::mt19937_64 gen(8);
    const FeatureSet a = make_set({1, 2, 3, 4, 5}, testing::random_matrix(gen, 5, 3) * 4.0);
    const FeatureSet b = make_set({1, 2, 3, 4, 5}, testing::random_matrix(gen, 5, 3) + Matrix::Constant(5, 3, 7.0));
    const FeatureSet pool[] = {a, b};
    const StandardizationStats s3 = fit_standardizer(pool);
    Matrix stacked(10, 3);
    stacked << apply_standardizer(s3, a).features, apply_standardizer(s3, b).features;
    const Eigen::RowVectorXd mean = stacked.colwise().mean();
    CHECK(mean.cwiseAbs().maxCoeff() <= 1e-9);
    const Eigen::RowVectorXd sd =
        ((stacked.rowwise() - mean).array().square().colwise().mean()).sqrt();
    CHECK((sd.array() - 1.0).abs().maxCoeff() <= 1e-9);
  }
  SUBCASE("dimension mismatch") {
    const FeatureSet w = make_set({1, 2}, Matrix::Zero(2, 3));
    const FeatureSet mixed[] = {fs, w};
    CHECK_THROWS_AS(fit_standardizer(mixed), ShapeError);
    CHECK_THROWS_AS(apply_standardizer(st, w), ShapeError);
  }
}

TEST_CASE("tensorize") {
  const FeatureSet one = make_set({1}, Matrix{{1, 2, 3, 4, 5}});
  const Tensor3 t = tensorize(one, 2);
  CHECK(t.dims() == Dims3{3, 2, 1});
  CHECK(person_slice(t, 0) == Matrix{{1, 2}, {3, 4}, {5, 0}});

  CHECK(tensorize(one, 7).dims() == Dims3{1, 7, 1});
  CHECK_THROWS_AS(tensorize(one, 0), RangeError);

  std::mt19937_64 gen(4);
  const FeatureSet many = make_set({1, 2, 3, 4}, testing::random_matrix(gen, 4, 10));
  const Tensor3 m = tensorize(many, 3);
  const Matrix persons = unfold(m, kPersonsMode);  // row k = padded vector of person k
  REQUIRE(persons.cols() == 12);
  for (Eigen::Index k = 0; k < 4; ++k) {
    for (Eigen::Index f = 0; f < 12; ++f) {
      // mode-3 column index is i + j*P; feature f sits at part f/w, offset f%w
      const Eigen::Index col = f / 3 + (f % 3) * 4;
      CHECK(persons(k, col) == (f < 10 ? many.features(k, f) : 0.0));
    }
    // concatenating the part rows recovers the padded feature row
    const Matrix slice = person_slice(m, static_cast<std::size_t>(k));
    const Matrix rows_t = slice.transpose();
    const Vector flat = vectorize(rows_t);
    CHECK(flat.head(10) == many.features.row(k).transpose());
    CHECK(flat.tail(2).isZero(0.0));
  }
}

TEST_CASE("fuse") {
  std::mt19937_64 gen(6);
  const Tensor3 a = testing::random_tensor(gen, {2, 3, 4});
  const Tensor3 b = testing::random_tensor(gen, {5, 3, 4});
  const Tensor3 c = testing::random_tensor(gen, {1, 3, 4});
  CHECK(fuse(a, b).dims() == Dims3{7, 3, 4});
  CHECK(fuse(a, c).dims() == Dims3{3, 3, 4});
  const Tensor3 f = fuse(a, b);
  for (std::size_t k = 0; k < 4; ++k) {
    Matrix stacked(7, 3);
    stacked << person_slice(a, k), person_slice(b, k);
    CHECK(person_slice(f, k) == stacked);
  }
  CHECK_THROWS_AS(fuse(a, testing::random_tensor(gen, {2, 4, 4})), ShapeError);
  CHECK_THROWS_AS(fuse(a, testing::random_tensor(gen, {2, 3, 5})), ShapeError);
}

TEST_CASE("align_views") {
  const FeatureSet a = make_set({3, 1, 2}, Matrix{{30}, {10}, {20}});
  const FeatureSet b = make_set({2, 3, 5}, Matrix{{2}, {3}, {5}}, View::B);
  const PairedViews pv = align_views(a, b);
  CHECK(pv.view_a.person_ids == std::vector<PersonId>{2, 3});
  CHECK(pv.view_b.person_ids == std::vector<PersonId>{2, 3});
  CHECK(pv.view_a.features == Matrix{{20}, {30}});
  CHECK(pv.view_b.features == Matrix{{2}, {3}});

  const PairedViews same = align_views(b, b);
  CHECK(same.view_a.person_ids == std::vector<PersonId>{2, 3, 5});

  const FeatureSet disjoint = make_set({8, 9}, Matrix{{0}, {0}}, View::B);
  CHECK_THROWS_AS(align_views(a, disjoint), DataError);
}
