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

#include "treid/txqda.hpp"

#include <algorithm>
#include <string_view>

#include "treid/io.hpp"

namespace treid {
namespace {

constexpr std::string_view kModelMagic = "TXQD";
constexpr std::uint32_t kModelVersion = 1;

Matrix leading_identity(std::size_t rows, std::size_t cols) {
  return Matrix::Identity(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

double projector_change(const Matrix& now, const Matrix& before) {
  const Matrix diff = now * now.transpose() - before * before.transpose();
  return diff.norm() / static_cast<double>(now.rows());
}

Matrix top_columns(const Spectrum& s, std::size_t count, const char* mode_name,
                   std::vector<std::string>* warnings) {
  const auto n = static_cast<Eigen::Index>(count);
  if (warnings != nullptr && !(s.values(n - 1) > 0.0)) {
    warnings->push_back(std::string(mode_name) + ": only " +
                        std::to_string((s.values.array() > 0.0).count()) +
                        " positive eigenvalues for " + std::to_string(count) +
                        " requested directions");
  }
  return s.vectors.leftCols(n);
}

nlohmann::json config_to_json(const TxqdaConfig& c) {
  return {{"p_out", c.p_out},         {"d_out", c.d_out},
          {"max_iters", c.max_iters}, {"conv_tol", c.conv_tol},
          {"reg_eps", c.reg_eps}};
}

TxqdaConfig config_from_json(const nlohmann::json& j) {
  TxqdaConfig c;
  c.p_out = j.at("p_out").get<std::size_t>();
  c.d_out = j.at("d_out").get<std::size_t>();
  c.max_iters = j.at("max_iters").get<std::size_t>();
  c.conv_tol = j.at("conv_tol").get<double>();
  c.reg_eps = j.at("reg_eps").get<double>();
  return c;
}

void write_block(io::ByteWriter& w, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) w.f64(m.data()[i]);
}

Matrix read_block(io::ByteReader& in, std::uint32_t rows, std::uint32_t cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = in.f64();
  if (!m.allFinite()) throw FormatError("TXQD: non-finite matrix entry");
  return m;
}

}  // namespace

void TxqdaConfig::validate(std::size_t parts, std::size_t width) const {
  if (p_out < 1 || p_out > parts) {
    throw RangeError("txqda: p_out=" + std::to_string(p_out) + " must lie in [1," +
                     std::to_string(parts) + "]");
  }
  if (d_out < 1 || d_out > width) {
    throw RangeError("txqda: d_out=" + std::to_string(d_out) + " must lie in [1," +
                     std::to_string(width) + "]");
  }
  if (max_iters < 1) throw RangeError("txqda: max_iters must be >= 1");
  if (!(reg_eps > 0.0)) throw RangeError("txqda: reg_eps must be positive");
  if (!(conv_tol >= 0.0)) throw RangeError("txqda: conv_tol must be non-negative");
}

double TxqdaModel::distance(const Vector& x, const Vector& y) const {
  if (x.size() != metric.rows() || y.size() != metric.rows()) {
    throw ShapeError("txqda distance: vector dimension mismatch");
  }
  const Vector d = x - y;
  return d.dot(metric * d);
}

ScatterPair mode_scatter(std::span<const Matrix> slices_a, std::span<const Matrix> slices_b,
                         Labels labels, const Matrix& u_other, ModeIndex mode) {
  if (mode == kPersonsMode) throw RangeError("mode_scatter: persons mode has no scatter");
  if (slices_a.empty() || slices_a.size() != slices_b.size() ||
      slices_a.size() != labels.size()) {
    throw ShapeError("mode_scatter: slice and label counts must agree");
  }
  const Eigen::Index rows = slices_a.front().rows();
  const Eigen::Index cols = slices_a.front().cols();
  for (std::size_t k = 0; k < slices_a.size(); ++k) {
    if (slices_a[k].rows() != rows || slices_a[k].cols() != cols ||
        slices_b[k].rows() != rows || slices_b[k].cols() != cols) {
      throw ShapeError("mode_scatter: slices differ in shape");
    }
  }
  const bool parts_mode = mode == kPartsMode;
  if (u_other.rows() != (parts_mode ? cols : rows)) {
    throw ShapeError("mode_scatter: projection of the other mode has " +
                     std::to_string(u_other.rows()) + " rows, expected " +
                     std::to_string(parts_mode ? cols : rows));
  }

  const auto n = static_cast<Eigen::Index>(slices_a.size());
  const Eigen::Index batches = u_other.cols();
  const Eigen::Index dim = parts_mode ? rows : cols;
  std::vector<Matrix> pa(slices_a.size()), pb(slices_b.size());
  for (std::size_t k = 0; k < slices_a.size(); ++k) {
    if (parts_mode) {
      pa[k] = slices_a[k] * u_other;
      pb[k] = slices_b[k] * u_other;
    } else {
      pa[k] = u_other.transpose() * slices_a[k];
      pb[k] = u_other.transpose() * slices_b[k];
    }
  }

  DifferenceMomentAccumulator acc(static_cast<std::size_t>(dim));
  Matrix xa(n, dim), xb(n, dim);
  for (Eigen::Index c = 0; c < batches; ++c) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (parts_mode) {
        xa.row(k) = pa[ku].col(c).transpose();
        xb.row(k) = pb[ku].col(c).transpose();
      } else {
        xa.row(k) = pa[ku].row(c);
        xb.row(k) = pb[ku].row(c);
      }
    }
    acc.add(xa, labels, xb, labels);
  }
  ScatterPair out = acc.finish();
  out.n_i /= static_cast<std::size_t>(batches);
  out.n_e /= static_cast<std::size_t>(batches);
  return out;
}

TxqdaModel txqda_train(const Tensor3& view_a, const Tensor3& view_b, Labels labels,
                       const TxqdaConfig& config) {
  if (view_a.dims() != view_b.dims()) throw ShapeError("txqda: view tensors differ in dims");
  if (labels.size() != view_a.persons()) {
    throw ShapeError("txqda: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(view_a.persons()) + " persons");
  }
  const std::size_t parts = view_a.parts();
  const std::size_t width = view_a.features();
  config.validate(parts, width);

  const std::vector<Matrix> slices_a = person_slices(view_a);
  const std::vector<Matrix> slices_b = person_slices(view_b);

  TxqdaModel model;
  model.config = config;
  Matrix u1 = leading_identity(parts, config.p_out);
  Matrix u2 = leading_identity(width, config.d_out);
  Spectrum spec1, spec2;
  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    const ScatterPair s1 = mode_scatter(slices_a, slices_b, labels, u2, kPartsMode);
    spec1 = solve_gen_eig_all(s1.sigma_e, regularize(s1.sigma_i, config.reg_eps));
    const Matrix u1_next = top_columns(spec1, config.p_out, "mode 1", nullptr);

    const ScatterPair s2 = mode_scatter(slices_a, slices_b, labels, u1_next, kFeaturesMode);
    spec2 = solve_gen_eig_all(s2.sigma_e, regularize(s2.sigma_i, config.reg_eps));
    const Matrix u2_next = top_columns(spec2, config.d_out, "mode 2", nullptr);

    const double delta =
        std::max(projector_change(u1_next, u1), projector_change(u2_next, u2));
    u1 = u1_next;
    u2 = u2_next;
    model.convergence_trace.push_back(delta);
    model.iterations_run = iter;
    if (delta < config.conv_tol) break;
  }
  (void)top_columns(spec1, config.p_out, "mode 1", &model.warnings);
  (void)top_columns(spec2, config.d_out, "mode 2", &model.warnings);
  model.mode1_above_one = spec1.count_above_one();
  model.mode2_above_one = spec2.count_above_one();
  model.u1 = std::move(u1);
  model.u2 = std::move(u2);

  model.metric.resize(0, 0);
  const Matrix ya = project(model, view_a);
  const Matrix yb = project(model, view_b);
  const ScatterPair sub = difference_moments(ya, labels, yb, labels);
  model.metric = metric_from_moments(sub, TxqdaModel::kSubspaceEps);
  return model;
}

Matrix project(const TxqdaModel& model, const Tensor3& t) {
  if (t.parts() != model.parts() || t.features() != model.width()) {
    throw ShapeError("txqda project: tensor has parts x width " + std::to_string(t.parts()) +
                     "x" + std::to_string(t.features()) + ", model expects " +
                     std::to_string(model.parts()) + "x" + std::to_string(model.width()));
  }
  Matrix out(static_cast<Eigen::Index>(t.persons()),
             static_cast<Eigen::Index>(model.out_dim()));
  for (std::size_t k = 0; k < t.persons(); ++k) {
    const Matrix y = model.u1.transpose() * person_slice(t, k) * model.u2;
    out.row(static_cast<Eigen::Index>(k)) = vectorize(y).transpose();
  }
  return out;
}

std::vector<std::uint8_t> serialize_model(const TxqdaModel& model) {
  io::ByteWriter w;
  w.raw(kModelMagic);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(model.u1.rows()));
  w.u32(static_cast<std::uint32_t>(model.u2.rows()));
  w.u32(static_cast<std::uint32_t>(model.u1.cols()));
  w.u32(static_cast<std::uint32_t>(model.u2.cols()));
  write_block(w, model.u1);
  write_block(w, model.u2);
  write_block(w, model.metric);

  const nlohmann::json meta = {
      {"config", config_to_json(model.config)},
      {"iterations_run", model.iterations_run},
      {"convergence_trace", model.convergence_trace},
      {"eigen_above_one", {{"mode1", model.mode1_above_one}, {"mode2", model.mode2_above_one}}},
      {"warnings", model.warnings},
      {"extra", model.extra}};
  const std::string text = meta.dump();
  w.u64(text.size());
  w.raw(text);
  return w.take();
}

TxqdaModel deserialize_model(std::span<const std::uint8_t> bytes) {
  io::ByteReader in(bytes, "TXQD");
  if (in.raw(kModelMagic.size()) != kModelMagic) throw FormatError("TXQD: bad magic bytes");
  const std::uint32_t version = in.u32();
  if (version != kModelVersion) {
    throw FormatError("TXQD: unsupported version " + std::to_string(version));
  }
  const std::uint32_t parts = in.u32();
  const std::uint32_t width = in.u32();
  const std::uint32_t p_out = in.u32();
  const std::uint32_t d_out = in.u32();
  if (parts == 0 || width == 0 || p_out == 0 || d_out == 0 || p_out > parts ||
      d_out > width) {
    throw FormatError("TXQD: invalid dimensions in header");
  }
  TxqdaModel model;
  model.u1 = read_block(in, parts, p_out);
  model.u2 = read_block(in, width, d_out);
  model.metric = read_block(in, p_out * d_out, p_out * d_out);
  const std::uint64_t len = in.u64();
  if (len != in.remaining()) throw FormatError("TXQD: metadata length does not match file size");
  const std::string_view text = in.raw(static_cast<std::size_t>(len));
  try {
    const nlohmann::json meta = nlohmann::json::parse(text);
    model.config = config_from_json(meta.at("config"));
    model.iterations_run = meta.at("iterations_run").get<std::size_t>();
    model.convergence_trace = meta.at("convergence_trace").get<std::vector<double>>();
    model.mode1_above_one = meta.at("eigen_above_one").at("mode1").get<std::size_t>();
    model.mode2_above_one = meta.at("eigen_above_one").at("mode2").get<std::size_t>();
    model.warnings = meta.at("warnings").get<std::vector<std::string>>();
    model.extra = meta.at("extra");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("TXQD: bad metadata: ") + e.what());
  }
  if (model.config.p_out != p_out || model.config.d_out != d_out) {
    throw FormatError("TXQD: metadata config disagrees with header dimensions");
  }
  return model;
}

}  // namespace treid
