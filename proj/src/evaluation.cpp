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

#include "treid/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "treid/io.hpp"
#include "treid/rng.hpp"

namespace treid {
namespace {

CmcCurve cmc_from_distances(const Matrix& d) {
  std::vector<RankedList> ranked;
  std::vector<std::size_t> truth;
  ranked.reserve(static_cast<std::size_t>(d.rows()));
  std::vector<double> row(static_cast<std::size_t>(d.cols()));
  for (Eigen::Index p = 0; p < d.rows(); ++p) {
    for (Eigen::Index g = 0; g < d.cols(); ++g) row[static_cast<std::size_t>(g)] = d(p, g);
    ranked.push_back(rank_distances(row));
    truth.push_back(static_cast<std::size_t>(p));
  }
  return compute_cmc(ranked, truth);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

FoldPlan make_folds(std::span<const PersonId> person_ids, std::size_t n_folds,
                    double train_fraction, std::uint64_t seed) {
  const std::size_t n = person_ids.size();
  if (n < 4) throw DataError("folds need at least 4 persons, got " + std::to_string(n));
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw RangeError("train_fraction must lie in (0, 1)");
  }
  if (n_folds < 1) throw RangeError("need at least one fold");
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  if (n_train < 2 || n - n_train < 1) {
    throw DataError("split of " + std::to_string(n) + " persons at fraction " +
                    io::format_double(train_fraction) +
                    " leaves fewer than 2 train or no test identities");
  }
  FoldPlan plan;
  plan.seed = seed;
  plan.train_fraction = train_fraction;
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::vector<PersonId> ids(person_ids.begin(), person_ids.end());
    Rng rng(seed + f);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(ids[i], ids[rng.below(i + 1)]);
    }
    Fold fold;
    fold.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    fold.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
    std::sort(fold.train.begin(), fold.train.end());
    std::sort(fold.test.begin(), fold.test.end());
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

double CmcCurve::at_rank(std::size_t rank) const {
  if (rank < 1 || rank > values.size()) {
    throw RangeError("rank " + std::to_string(rank) + " outside gallery of size " +
                     std::to_string(values.size()));
  }
  return values[rank - 1];
}

CmcCurve compute_cmc(std::span<const RankedList> ranked, std::span<const std::size_t> true_index) {
  if (ranked.empty() || ranked.size() != true_index.size()) {
    throw ShapeError("cmc: need one true index per probe");
  }
  const std::size_t gallery = ranked.front().size();
  std::vector<std::size_t> hits(gallery, 0);
  for (std::size_t p = 0; p < ranked.size(); ++p) {
    if (ranked[p].size() != gallery) throw ShapeError("cmc: probes ranked different galleries");
    if (true_index[p] >= gallery) {
      throw RangeError("cmc: true index " + std::to_string(true_index[p]) +
                       " outside gallery of size " + std::to_string(gallery));
    }
    const auto& order = ranked[p].order;
    const auto pos = static_cast<std::size_t>(
        std::find(order.begin(), order.end(), true_index[p]) - order.begin());
    if (pos == gallery) throw DataError("cmc: true match missing from ranked list");
    ++hits[pos];
  }
  CmcCurve out;
  out.values.resize(gallery);
  std::size_t cumulative = 0;
  for (std::size_t r = 0; r < gallery; ++r) {
    cumulative += hits[r];
    out.values[r] = static_cast<double>(cumulative) / static_cast<double>(ranked.size());
  }
  return out;
}

CmcCurve aggregate_cmc(std::span<const CmcCurve> curves) {
  if (curves.empty()) throw ShapeError("aggregate: no curves");
  CmcCurve out;
  out.values.assign(curves.front().size(), 0.0);
  for (const auto& c : curves) {
    if (c.size() != out.size()) throw ShapeError("aggregate: curve lengths differ");
    for (std::size_t r = 0; r < c.size(); ++r) out.values[r] += c.values[r];
  }
  for (double& v : out.values) v /= static_cast<double>(curves.size());
  return out;
}

std::string to_string(MatchDirection d) {
  switch (d) {
    case MatchDirection::AtoB: return "A->B";
    case MatchDirection::BtoA: return "B->A";
    default: return "both";
  }
}

MatchDirection parse_direction(const std::string& s) {
  if (s == "A->B") return MatchDirection::AtoB;
  if (s == "B->A") return MatchDirection::BtoA;
  if (s == "both") return MatchDirection::Both;
  throw RangeError("direction must be A->B, B->A or both, got '" + s + "'");
}

nlohmann::json ProtocolConfig::to_json() const {
  return {{"part_width", part_width},
          {"fusion", fusion},
          {"standardize", standardize},
          {"txqda",
           {{"p_out", txqda.p_out},
            {"d_out", txqda.d_out},
            {"max_iters", txqda.max_iters},
            {"conv_tol", txqda.conv_tol},
            {"reg_eps", txqda.reg_eps}}},
          {"folds", n_folds},
          {"train_fraction", train_fraction},
          {"seed", seed},
          {"direction", to_string(direction)}};
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json folds_json = nlohmann::json::array();
  for (const auto& f : folds) {
    folds_json.push_back({{"index", f.index},
                          {"train_size", f.train_size},
                          {"test_size", f.test_size},
                          {"iterations_run", f.iterations_run},
                          {"cmc", f.cmc.values}});
  }
  nlohmann::json summary_json = nlohmann::json::array();
  for (const auto& [rank, value] : summary) {
    summary_json.push_back({{"rank", rank}, {"value", value}});
  }
  return {{"config", config},
          {"folds", folds_json},
          {"mean_cmc", mean.values},
          {"summary", summary_json}};
}

nlohmann::json ExperimentReport::timing_json() const {
  nlohmann::json per_fold = nlohmann::json::array();
  for (const auto& f : folds) per_fold.push_back(f.seconds);
  return {{"fold_seconds", per_fold}, {"total_seconds", total_seconds}};
}

CmcCurve evaluate_split(const TxqdaModel& model, const Tensor3& view_a, const Tensor3& view_b,
                        MatchDirection direction) {
  if (view_a.persons() != view_b.persons()) throw ShapeError("evaluate: views differ in persons");
  const Matrix pa = project(model, view_a);
  const Matrix pb = project(model, view_b);
  const Matrix d = distance_matrix(pa, pb, model.metric);
  switch (direction) {
    case MatchDirection::AtoB: return cmc_from_distances(d);
    case MatchDirection::BtoA: return cmc_from_distances(d.transpose());
    default: {
      const CmcCurve both[] = {cmc_from_distances(d), cmc_from_distances(d.transpose())};
      return aggregate_cmc(both);
    }
  }
}

ExperimentReport run_protocol(const DescriptorViews& data, const ProtocolConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<PersonId> ids = common_persons(data, config.fusion);
  const FoldPlan plan = make_folds(ids, config.n_folds, config.train_fraction, config.seed);

  ExperimentReport report;
  report.config = config.to_json();
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto fold_start = std::chrono::steady_clock::now();
    const Fold& fold = plan.folds[f];
    FoldResult result;
    result.index = f;
    result.train_size = fold.train.size();
    result.test_size = fold.test.size();
    try {
      const DescriptorViews train = restrict_persons(data, config.fusion, fold.train);
      const DescriptorViews test = restrict_persons(data, config.fusion, fold.test);
      FeaturePipeline pipeline{config.part_width, config.fusion, config.standardize, {}};
      pipeline.fit(train);
      const TxqdaModel model =
          txqda_train(pipeline.transform(view_sets(train, View::A)),
                      pipeline.transform(view_sets(train, View::B)), fold.train, config.txqda);
      result.iterations_run = model.iterations_run;
      result.cmc = evaluate_split(model, pipeline.transform(view_sets(test, View::A)),
                                  pipeline.transform(view_sets(test, View::B)), config.direction);
    } catch (const NumericalError& e) {
      throw FoldError(f, true, e.what());
    } catch (const Error& e) {
      throw FoldError(f, false, e.what());
    }
    result.seconds = seconds_since(fold_start);
    report.folds.push_back(std::move(result));
  }

  std::vector<CmcCurve> curves;
  for (const auto& f : report.folds) curves.push_back(f.cmc);
  report.mean = aggregate_cmc(curves);
  for (std::size_t rank : kSummaryRanks) {
    if (rank <= report.mean.size()) report.summary.emplace_back(rank, report.mean.at_rank(rank));
  }
  report.total_seconds = seconds_since(start);
  return report;
}

std::string format_table_row(std::size_t dim, std::span<const double> values) {
  std::string row = std::to_string(dim);
  char buf[32];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
    row += " | ";
    row += buf;
  }
  return row;
}

FormattedTable format_table(std::span<const ExperimentReport> reports,
                            std::span<const std::size_t> ranks) {
  FormattedTable out;
  out.text = "Dim";
  out.csv = "Dim";
  for (std::size_t r : ranks) {
    out.text += " | Rank-" + std::to_string(r);
    out.csv += ",Rank-" + std::to_string(r);
  }
  out.text += '\n';
  out.csv += '\n';
  for (const auto& report : reports) {
    std::vector<double> values;
    for (std::size_t r : ranks) values.push_back(report.mean.at_rank(r));
    out.text += format_table_row(report.dim(), values) + '\n';
    out.csv += std::to_string(report.dim());
    for (double v : values) out.csv += "," + io::format_double(v);
    out.csv += '\n';
  }
  return out;
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace treid
