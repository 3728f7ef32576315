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

#include "treid/pipeline.hpp"

#include <algorithm>
#include <optional>

namespace treid {
namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::vector<PersonId> common_persons(const DescriptorViews& data,
                                     const std::vector<std::string>& names) {
  if (names.empty()) throw DataError("no descriptors selected");
  std::vector<PersonId> common;
  for (std::size_t n = 0; n < names.size(); ++n) {
    const auto it = data.find(names[n]);
    if (it == data.end()) throw DataError("descriptor '" + names[n] + "' has no data");
    std::vector<PersonId> ids = it->second.person_ids();
    std::sort(ids.begin(), ids.end());
    if (n == 0) {
      common = std::move(ids);
    } else {
      std::vector<PersonId> next;
      std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(),
                            std::back_inserter(next));
      common = std::move(next);
    }
  }
  if (common.empty()) throw DataError("selected descriptors share no persons");
  return common;
}

DescriptorViews restrict_persons(const DescriptorViews& data,
                                 const std::vector<std::string>& names,
                                 std::span<const PersonId> ids) {
  DescriptorViews out;
  for (const auto& name : names) {
    const PairedViews& pv = data.at(name);
    out.emplace(name, PairedViews{pv.view_a.subset(ids), pv.view_b.subset(ids)});
  }
  return out;
}

DescriptorSets view_sets(const DescriptorViews& data, View view) {
  DescriptorSets out;
  for (const auto& [name, pv] : data) out.emplace(name, view == View::A ? pv.view_a : pv.view_b);
  return out;
}

void FeaturePipeline::fit(const DescriptorViews& train) {
  stats.clear();
  for (const auto& name : fusion) {
    const auto it = train.find(name);
    if (it == train.end()) throw DataError("descriptor '" + name + "' has no training data");
    if (standardize) {
      const FeatureSet both[] = {it->second.view_a, it->second.view_b};
      stats.emplace(name, fit_standardizer(both));
    } else {
      stats.emplace(name, StandardizationStats::identity(it->second.view_a.dim()));
    }
  }
}

Tensor3 FeaturePipeline::transform(const DescriptorSets& sets) const {
  if (fusion.empty()) throw DataError("pipeline has no descriptors");
  std::optional<Tensor3> fused;
  const std::vector<PersonId>* order = nullptr;
  for (const auto& name : fusion) {
    const auto it = sets.find(name);
    if (it == sets.end()) throw DataError("descriptor '" + name + "' missing from input");
    const auto st = stats.find(name);
    if (st == stats.end()) throw DataError("pipeline not fitted for '" + name + "'");
    if (order == nullptr) {
      order = &it->second.person_ids;
    } else if (*order != it->second.person_ids) {
      throw ShapeError("descriptors list different persons or orders");
    }
    Tensor3 t = tensorize(apply_standardizer(st->second, it->second), part_width);
    fused = fused ? fuse(*fused, t) : std::move(t);
  }
  return std::move(*fused);
}

nlohmann::json FeaturePipeline::to_json() const {
  nlohmann::json st = nlohmann::json::object();
  for (const auto& [name, s] : stats) {
    st[name] = {{"mean", to_std(s.mean)}, {"stddev", to_std(s.stddev)}};
  }
  return {{"part_width", part_width},
          {"fusion", fusion},
          {"standardize", standardize},
          {"stats", st}};
}

FeaturePipeline FeaturePipeline::from_json(const nlohmann::json& j) {
  FeaturePipeline p;
  p.part_width = j.at("part_width").get<std::size_t>();
  p.fusion = j.at("fusion").get<std::vector<std::string>>();
  p.standardize = j.at("standardize").get<bool>();
  for (const auto& [name, s] : j.at("stats").items()) {
    p.stats.emplace(name, StandardizationStats{from_std(s.at("mean").get<std::vector<double>>()),
                                               from_std(s.at("stddev").get<std::vector<double>>())});
  }
  return p;
}

}  // namespace treid
