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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "treid/matching.hpp"
#include "treid/pipeline.hpp"
#include "treid/txqda.hpp"

namespace treid {

struct Fold {
  std::vector<PersonId> train;
  std::vector<PersonId> test;

  friend bool operator==(const Fold&, const Fold&) = default;
};

struct FoldPlan {
  std::uint64_t seed = 0;
  double train_fraction = 0.5;
  std::vector<Fold> folds;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Fold f shuffles `person_ids` (Fisher-Yates driven by Rng(seed + f)) and
/// takes the first floor(N * train_fraction) as training identities.
[[nodiscard]] FoldPlan make_folds(std::span<const PersonId> person_ids, std::size_t n_folds = 10,
                                  double train_fraction = 0.5, std::uint64_t seed = 0);

/// CMC(k) for k = 1..G stored at index k-1.
struct CmcCurve {
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  /// 1-based. Throws RangeError outside [1, G].
  [[nodiscard]] double at_rank(std::size_t rank) const;

  friend bool operator==(const CmcCurve&, const CmcCurve&) = default;
};

/// Single-shot: true_index[p] is the gallery index of probe p's match.
[[nodiscard]] CmcCurve compute_cmc(std::span<const RankedList> ranked,
                                   std::span<const std::size_t> true_index);

/// Elementwise mean.
[[nodiscard]] CmcCurve aggregate_cmc(std::span<const CmcCurve> curves);

enum class MatchDirection { AtoB, BtoA, Both };

[[nodiscard]] std::string to_string(MatchDirection d);
[[nodiscard]] MatchDirection parse_direction(const std::string& s);

struct ProtocolConfig {
  std::size_t part_width = 1;
  std::vector<std::string> fusion;
  bool standardize = true;
  TxqdaConfig txqda;
  std::size_t n_folds = 10;
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  MatchDirection direction = MatchDirection::AtoB;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Ranks reported in the summary; only those within the gallery are kept.
inline constexpr std::size_t kSummaryRanks[] = {1, 5, 10, 15, 20};

struct FoldResult {
  std::size_t index = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t iterations_run = 0;
  CmcCurve cmc;
  double seconds = 0.0;
};

struct ExperimentReport {
  nlohmann::json config;
  std::vector<FoldResult> folds;
  CmcCurve mean;
  std::vector<std::pair<std::size_t, double>> summary;  // (rank, mean CMC)
  double total_seconds = 0.0;

  /// Deterministic content only; runtimes live in timing_json().
  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] nlohmann::json timing_json() const;
  [[nodiscard]] std::size_t dim() const { return config.at("txqda").at("d_out").get<std::size_t>(); }
};

/// A fold failed; `numerical` tells factorization failures apart from data errors.
class FoldError : public Error {
 public:
  FoldError(std::size_t fold, bool numerical, const std::string& what)
      : Error("fold " + std::to_string(fold) + ": " + what), fold_(fold), numerical_(numerical) {}
  [[nodiscard]] std::size_t fold() const noexcept { return fold_; }
  [[nodiscard]] bool numerical() const noexcept { return numerical_; }

 private:
  std::size_t fold_;
  bool numerical_;
};

/// Probes/gallery of one test split, already projected.
[[nodiscard]] CmcCurve evaluate_split(const TxqdaModel& model, const Tensor3& view_a,
                                      const Tensor3& view_b, MatchDirection direction);

/// Folds -> standardize/tensorize/fuse -> TXQDA -> project -> rank -> CMC.
[[nodiscard]] ExperimentReport run_protocol(const DescriptorViews& data,
                                            const ProtocolConfig& config);

struct FormattedTable {
  std::string text;
  std::string csv;
};

/// "200 | 70.40 | 93.64 | 96.44 | 98.76": percentages to two decimals.
[[nodiscard]] std::string format_table_row(std::size_t dim, std::span<const double> values);

/// One row per report (its d_out as Dim). The text table prints percentages;
/// the CSV keeps the exact fractions.
[[nodiscard]] FormattedTable format_table(std::span<const ExperimentReport> reports,
                                          std::span<const std::size_t> ranks);

/// 16 hex digits of FNV-1a over the compact JSON dump.
[[nodiscard]] std::string config_hash(const nlohmann::json& config);

}  // namespace treid
