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

#include "treid/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "treid/io.hpp"

namespace treid {
namespace {

constexpr std::string_view kTfvMagic = "TFV1";

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void csv_error(std::size_t line_no, const std::string& msg) {
  throw FormatError("csv line " + std::to_string(line_no) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || field.empty()) {
    csv_error(line_no, "invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

char view_char(View v) noexcept { return v == View::A ? 'A' : 'B'; }

View parse_view(std::string_view s) {
  if (s == "A") return View::A;
  if (s == "B") return View::B;
  throw FormatError("view must be A or B, got '" + std::string(s) + "'");
}

FeatureFormat parse_feature_format(std::string_view s) {
  if (s == "csv") return FeatureFormat::Csv;
  if (s == "bin") return FeatureFormat::Bin;
  throw FormatError("feature format must be csv or bin, got '" + std::string(s) + "'");
}

void FeatureSet::validate() const {
  if (person_ids.empty()) throw DataError("feature set '" + descriptor_name + "' is empty");
  if (static_cast<std::size_t>(features.rows()) != person_ids.size()) {
    throw ShapeError("feature set '" + descriptor_name + "' has " +
                     std::to_string(features.rows()) + " rows but " +
                     std::to_string(person_ids.size()) + " ids");
  }
  if (features.cols() < 1) throw ShapeError("feature set has zero-width rows");
  std::unordered_set<PersonId> seen;
  for (PersonId id : person_ids) {
    if (!seen.insert(id).second) {
      throw DataError("duplicate person_id " + std::to_string(id) + " in view " +
                      view_char(view));
    }
  }
  require_finite(features, "feature set");
}

FeatureSet FeatureSet::subset(std::span<const PersonId> ids) const {
  std::unordered_map<PersonId, Eigen::Index> row_of;
  for (std::size_t n = 0; n < person_ids.size(); ++n) {
    row_of.emplace(person_ids[n], static_cast<Eigen::Index>(n));
  }
  FeatureSet out{descriptor_name, view, {}, Matrix(static_cast<Eigen::Index>(ids.size()),
                                                   features.cols())};
  out.person_ids.reserve(ids.size());
  for (std::size_t n = 0; n < ids.size(); ++n) {
    const auto it = row_of.find(ids[n]);
    if (it == row_of.end()) {
      throw DataError("person_id " + std::to_string(ids[n]) + " not in view " +
                      view_char(view));
    }
    out.person_ids.push_back(ids[n]);
    out.features.row(static_cast<Eigen::Index>(n)) = features.row(it->second);
  }
  return out;
}

StandardizationStats StandardizationStats::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Vector::Zero(d), Vector::Ones(d)};
}

FeatureSet parse_feature_csv(std::string_view text, std::string descriptor_name) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(trim_cr(text.substr(start, end - start)));
      start = end + 1;
    }
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw FormatError("csv line 1: missing header");

  const auto header = split_commas(lines[0]);
  if (header.size() < 3 || header[0] != "person_id" || header[1] != "view") {
    csv_error(1, "header must start with person_id,view,f0");
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j + 2] != "f" + std::to_string(j)) {
      csv_error(1, "expected column f" + std::to_string(j) + ", got '" +
                       std::string(header[j + 2]) + "'");
    }
  }

  const std::size_t rows = lines.size() - 1;
  FeatureSet fs;
  fs.descriptor_name = std::move(descriptor_name);
  fs.features.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  fs.person_ids.reserve(rows);
  std::unordered_set<PersonId> seen;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t line_no = r + 2;
    const auto fields = split_commas(lines[r + 1]);
    if (fields.size() != dim + 2) {
      csv_error(line_no, "expected " + std::to_string(dim + 2) + " fields, got " +
                             std::to_string(fields.size()));
    }
    const auto id = parse_number<PersonId>(fields[0], line_no, "person_id");
    if (!seen.insert(id).second) {
      throw DataError("csv line " + std::to_string(line_no) + ": duplicate person_id " +
                      std::to_string(id));
    }
    View v;
    try {
      v = parse_view(fields[1]);
    } catch (const FormatError& e) {
      csv_error(line_no, e.what());
    }
    if (r == 0) {
      fs.view = v;
    } else if (v != fs.view) {
      csv_error(line_no, "mixed views in one file");
    }
    fs.person_ids.push_back(id);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto x = parse_number<double>(fields[j + 2], line_no, "feature value");
      if (!std::isfinite(x)) csv_error(line_no, "non-finite feature value");
      fs.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = x;
    }
  }
  fs.validate();
  return fs;
}

FeatureSet parse_feature_bin(std::span<const std::uint8_t> bytes,
                             std::string descriptor_name, View view) {
  io::ByteReader in(bytes, "TFV1");
  if (in.raw(kTfvMagic.size()) != kTfvMagic) throw FormatError("TFV1: bad magic bytes");
  const std::uint32_t n = in.u32();
  const std::uint32_t d = in.u32();
  if (n == 0 || d == 0) throw FormatError("TFV1: zero rows or columns");
  const std::uint64_t expected = 8ull * n * d + 8ull * n;
  if (in.remaining() != expected) {
    throw FormatError("TFV1: payload is " + std::to_string(in.remaining()) +
                      " bytes, expected " + std::to_string(expected));
  }
  FeatureSet fs{std::move(descriptor_name), view, {}, Matrix(n, d)};
  for (std::uint32_t r = 0; r < n; ++r) {
    for (std::uint32_t c = 0; c < d; ++c) {
      const double x = in.f64();
      if (!std::isfinite(x)) {
        throw DataError("TFV1: non-finite value at byte offset " +
                        std::to_string(in.offset() - 8));
      }
      fs.features(r, c) = x;
    }
  }
  fs.person_ids.reserve(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    fs.person_ids.push_back(static_cast<PersonId>(in.u64()));
  }
  fs.validate();
  return fs;
}

FeatureSet load_feature_set(const std::filesystem::path& path, FeatureFormat format,
                            std::string descriptor_name, View view) {
  if (descriptor_name.empty()) descriptor_name = path.stem().string();
  try {
    if (format == FeatureFormat::Csv) {
      return parse_feature_csv(io::read_file_text(path), std::move(descriptor_name));
    }
    return parse_feature_bin(io::read_file_bytes(path), std::move(descriptor_name), view);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_feature_csv(const FeatureSet& fs) {
  fs.validate();
  std::string out = "person_id,view";
  for (Eigen::Index j = 0; j < fs.features.cols(); ++j) out += ",f" + std::to_string(j);
  out += '\n';
  for (Eigen::Index r = 0; r < fs.features.rows(); ++r) {
    out += std::to_string(fs.person_ids[static_cast<std::size_t>(r)]);
    out += ',';
    out += view_char(fs.view);
    for (Eigen::Index j = 0; j < fs.features.cols(); ++j) {
      out += ',';
      out += io::format_double(fs.features(r, j));
    }
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> format_feature_bin(const FeatureSet& fs) {
  fs.validate();
  io::ByteWriter w;
  w.raw(kTfvMagic);
  w.u32(static_cast<std::uint32_t>(fs.features.rows()));
  w.u32(static_cast<std::uint32_t>(fs.features.cols()));
  for (Eigen::Index r = 0; r < fs.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < fs.features.cols(); ++c) w.f64(fs.features(r, c));
  }
  for (PersonId id : fs.person_ids) w.u64(static_cast<std::uint64_t>(id));
  return w.take();
}

void save_feature_set(const FeatureSet& fs, const std::filesystem::path& path,
                      FeatureFormat format) {
  if (format == FeatureFormat::Csv) {
    io::write_file_atomic(path, format_feature_csv(fs));
  } else {
    io::write_file_atomic(path, format_feature_bin(fs));
  }
}

StandardizationStats fit_standardizer(std::span<const FeatureSet> train_sets) {
  if (train_sets.empty()) throw DataError("standardizer needs at least one set");
  const Eigen::Index dim = train_sets.front().features.cols();
  Eigen::Index rows = 0;
  for (const auto& fs : train_sets) {
    if (fs.features.cols() != dim) {
      throw ShapeError("standardizer inputs disagree on dimension: " +
                       std::to_string(dim) + " vs " + std::to_string(fs.features.cols()));
    }
    rows += fs.features.rows();
  }
  if (rows < 2) throw DataError("standardizer needs at least 2 rows");

  Vector sum = Vector::Zero(dim);
  for (const auto& fs : train_sets) sum += fs.features.colwise().sum().transpose();
  const Vector mean = sum / static_cast<double>(rows);
  Vector sq = Vector::Zero(dim);
  for (const auto& fs : train_sets) {
    sq += (fs.features.rowwise() - mean.transpose()).array().square().colwise().sum().matrix().transpose();
  }
  Vector stddev = (sq / static_cast<double>(rows)).cwiseSqrt();
  stddev = stddev.cwiseMax(StandardizationStats::kStdFloor);
  return {mean, stddev};
}

FeatureSet apply_standardizer(const StandardizationStats& stats, const FeatureSet& fs) {
  if (stats.mean.size() != fs.features.cols() || stats.stddev.size() != fs.features.cols()) {
    throw ShapeError("standardizer dimension " + std::to_string(stats.mean.size()) +
                     " does not match features " + std::to_string(fs.features.cols()));
  }
  FeatureSet out = fs;
  out.features = ((fs.features.rowwise() - stats.mean.transpose()).array().rowwise() /
                  stats.stddev.transpose().array())
                     .matrix();
  return out;
}

Tensor3 tensorize(const FeatureSet& fs, std::size_t part_width) {
  if (part_width < 1) throw RangeError("part width must be >= 1");
  const std::size_t dim = fs.dim();
  const std::size_t parts = (dim + part_width - 1) / part_width;
  Tensor3 t({parts, part_width, fs.size()});
  for (std::size_t k = 0; k < fs.size(); ++k) {
    for (std::size_t f = 0; f < dim; ++f) {
      t(f / part_width, f % part_width, k) =
          fs.features(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(f));
    }
  }
  return t;
}

Tensor3 fuse(const Tensor3& a, const Tensor3& b) {
  if (a.features() != b.features()) {
    throw ShapeError("fuse: part widths differ (" + std::to_string(a.features()) + " vs " +
                     std::to_string(b.features()) + ")");
  }
  if (a.persons() != b.persons()) {
    throw ShapeError("fuse: person counts differ (" + std::to_string(a.persons()) + " vs " +
                     std::to_string(b.persons()) + ")");
  }
  Tensor3 out({a.parts() + b.parts(), a.features(), a.persons()});
  for (std::size_t k = 0; k < a.persons(); ++k) {
    for (std::size_t j = 0; j < a.features(); ++j) {
      for (std::size_t i = 0; i < a.parts(); ++i) out(i, j, k) = a(i, j, k);
      for (std::size_t i = 0; i < b.parts(); ++i) out(a.parts() + i, j, k) = b(i, j, k);
    }
  }
  return out;
}

PairedViews align_views(const FeatureSet& a, const FeatureSet& b) {
  std::vector<PersonId> ia = a.person_ids;
  std::vector<PersonId> ib = b.person_ids;
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  std::vector<PersonId> common;
  std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(),
                        std::back_inserter(common));
  if (common.empty()) {
    throw DataError("views of '" + a.descriptor_name + "' share no person ids");
  }
  return {a.subset(common), b.subset(common)};
}

}  // namespace treid
