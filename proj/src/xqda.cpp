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

#include "treid/xqda.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace treid {
namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

std::size_t distinct_count(Labels labels) {
  return std::unordered_set<PersonId>(labels.begin(), labels.end()).size();
}

// Magnitude below which a unit-vector component counts as zero for the sign rule.
constexpr double kSignTolerance = 1e-12;

void canonicalize_sign(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kSignTolerance) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

Matrix spd_inverse(const Matrix& s, const char* what) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + " is not positive definite");
  }
  return symmetrized(llt.solve(Matrix::Identity(s.rows(), s.cols())));
}

}  // namespace

std::size_t Spectrum::count_above_one() const noexcept {
  return static_cast<std::size_t>((values.array() > 1.0).count());
}

DifferenceMomentAccumulator::DifferenceMomentAccumulator(std::size_t dim)
    : intra_(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))),
      all_(intra_) {}

void DifferenceMomentAccumulator::add(const Matrix& xa, Labels la, const Matrix& xb,
                                      Labels lb) {
  if (xa.cols() != intra_.rows() || xb.cols() != intra_.rows()) {
    throw ShapeError("difference moments: sample dimension " + std::to_string(xa.cols()) +
                     "/" + std::to_string(xb.cols()) + " does not match " +
                     std::to_string(intra_.rows()));
  }
  if (static_cast<std::size_t>(xa.rows()) != la.size() ||
      static_cast<std::size_t>(xb.rows()) != lb.size()) {
    throw ShapeError("difference moments: label count does not match sample count");
  }
  if (distinct_count(la) < 2 || distinct_count(lb) < 2) {
    throw DataError("difference moments: each view needs at least 2 distinct labels");
  }

  std::unordered_map<PersonId, std::vector<Eigen::Index>> rows_b;
  for (std::size_t j = 0; j < lb.size(); ++j) {
    rows_b[lb[j]].push_back(static_cast<Eigen::Index>(j));
  }
  Vector delta(xa.cols());
  for (std::size_t i = 0; i < la.size(); ++i) {
    const auto it = rows_b.find(la[i]);
    if (it == rows_b.end()) continue;
    for (Eigen::Index j : it->second) {
      delta = xa.row(static_cast<Eigen::Index>(i)).transpose() - xb.row(j).transpose();
      intra_.selfadjointView<Eigen::Lower>().rankUpdate(delta);
      ++n_intra_;
    }
  }

  // sum_{i,j} (x_i - z_j)(x_i - z_j)^T
  //   = N_b X^T X + N_a Z^T Z - (sum x)(sum z)^T - (sum z)(sum x)^T
  const double na = static_cast<double>(xa.rows());
  const double nb = static_cast<double>(xb.rows());
  const Vector sx = xa.colwise().sum().transpose();
  const Vector sz = xb.colwise().sum().transpose();
  const Matrix cross = sx * sz.transpose();
  all_.noalias() += nb * (xa.transpose() * xa);
  all_.noalias() += na * (xb.transpose() * xb);
  all_ -= cross + cross.transpose();
  n_all_ += static_cast<std::size_t>(xa.rows()) * static_cast<std::size_t>(xb.rows());
}

ScatterPair DifferenceMomentAccumulator::finish() const {
  if (n_intra_ == 0) throw DataError("difference moments: no same-label cross-view pairs");
  if (n_all_ == n_intra_) {
    throw DataError("difference moments: no different-label cross-view pairs");
  }
  Matrix intra = intra_.selfadjointView<Eigen::Lower>();
  ScatterPair out;
  out.n_i = n_intra_;
  out.n_e = n_all_ - n_intra_;
  out.sigma_i = intra / static_cast<double>(out.n_i);
  out.sigma_e = symmetrized(all_ - intra) / static_cast<double>(out.n_e);
  return out;
}

ScatterPair difference_moments(const Matrix& xa, Labels la, const Matrix& xb, Labels lb) {
  DifferenceMomentAccumulator acc(static_cast<std::size_t>(xa.cols()));
  acc.add(xa, la, xb, lb);
  return acc.finish();
}

Matrix regularize(const Matrix& s, double eps) {
  if (s.rows() != s.cols()) throw ShapeError("regularize: matrix is not square");
  if (!(eps > 0.0)) throw RangeError("regularize: eps must be positive");
  const double trace = s.trace();
  const double shift = trace == 0.0 ? eps : eps * trace / static_cast<double>(s.rows());
  Matrix out = s;
  out.diagonal().array() += shift;
  return out;
}

Spectrum solve_gen_eig_all(const Matrix& sigma_e, const Matrix& sigma_i) {
  if (sigma_e.rows() != sigma_e.cols() || sigma_i.rows() != sigma_i.cols() ||
      sigma_e.rows() != sigma_i.rows()) {
    throw ShapeError("generalized eigenproblem: matrices must be square and equal-sized");
  }
  Eigen::LLT<Matrix> llt(sigma_i);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "generalized eigenproblem: intra-personal moment is not positive definite "
        "(increase regularization)");
  }
  const auto lower = llt.matrixL();
  // C = L^-1 Sigma_E L^-T
  Matrix c = lower.solve(sigma_e);
  c = lower.solve(c.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(c));
  if (eig.info() != Eigen::Success) {
    throw NumericalError("generalized eigenproblem: symmetric eigensolver failed");
  }
  const Eigen::Index n = sigma_e.rows();
  Spectrum out;
  out.values = eig.eigenvalues().reverse();
  // w = L^-T v
  out.vectors = llt.matrixU().solve(eig.eigenvectors().rowwise().reverse());
  for (Eigen::Index c2 = 0; c2 < n; ++c2) {
    out.vectors.col(c2).normalize();
    canonicalize_sign(out.vectors.col(c2));
  }
  return out;
}

Spectrum solve_gen_eig(const Matrix& sigma_e, const Matrix& sigma_i) {
  Spectrum all = solve_gen_eig_all(sigma_e, sigma_i);
  const auto keep = static_cast<Eigen::Index>((all.values.array() > 0.0).count());
  return {all.values.head(keep), all.vectors.leftCols(keep)};
}

Matrix metric_from_moments(const ScatterPair& s, double eps) {
  return symmetrized(spd_inverse(regularize(s.sigma_i, eps), "subspace intra-personal moment") -
                     spd_inverse(regularize(s.sigma_e, eps), "subspace extra-personal moment"));
}

Matrix XqdaModel::project(const Matrix& samples) const {
  if (samples.cols() != projection.rows()) {
    throw ShapeError("xqda project: samples have " + std::to_string(samples.cols()) +
                     " columns, model expects " + std::to_string(projection.rows()));
  }
  return samples * projection;
}

double XqdaModel::distance(const Vector& x, const Vector& z) const {
  if (x.size() != projection.rows() || z.size() != projection.rows()) {
    throw ShapeError("xqda distance: vector dimension mismatch");
  }
  const Vector d = projection.transpose() * (x - z);
  return d.dot(metric * d);
}

XqdaModel xqda_train(const Matrix& xa, Labels la, const Matrix& xb, Labels lb,
                     const XqdaConfig& config) {
  if (config.out_dim == 0) throw RangeError("xqda: output dimension must be >= 1");
  if (config.out_dim > static_cast<std::size_t>(xa.cols())) {
    throw RangeError("xqda: output dimension " + std::to_string(config.out_dim) +
                     " exceeds feature dimension " + std::to_string(xa.cols()));
  }
  const ScatterPair moments = difference_moments(xa, la, xb, lb);
  const Spectrum spectrum =
      solve_gen_eig(moments.sigma_e, regularize(moments.sigma_i, config.reg_eps));

  XqdaModel model;
  model.reg_eps = config.reg_eps;
  model.eigen_above_one = spectrum.count_above_one();
  std::size_t r = config.out_dim;
  if (spectrum.size() < r) {
    model.warnings.push_back("requested " + std::to_string(r) + " dimensions but only " +
                             std::to_string(spectrum.size()) +
                             " positive eigenvalues; truncated");
    r = spectrum.size();
  }
  if (r == 0) throw NumericalError("xqda: no positive generalized eigenvalues");
  model.projection = spectrum.vectors.leftCols(static_cast<Eigen::Index>(r));

  ScatterPair sub;
  sub.sigma_i = symmetrized(model.projection.transpose() * moments.sigma_i * model.projection);
  sub.sigma_e = symmetrized(model.projection.transpose() * moments.sigma_e * model.projection);
  sub.n_i = moments.n_i;
  sub.n_e = moments.n_e;
  model.metric = metric_from_moments(sub, XqdaModel::kSubspaceEps);
  return model;
}

}  // namespace treid
