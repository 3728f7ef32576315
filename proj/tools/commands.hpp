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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace treid::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2 };

struct CommonOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> format;  // csv | bin
};

struct MatchOptions {
  std::filesystem::path model;
  std::vector<std::string> probe;    // path or name=path
  std::vector<std::string> gallery;  // path or name=path
  std::optional<std::string> format;
  std::optional<std::size_t> part_width;
  std::optional<std::size_t> top;
  std::optional<std::filesystem::path> out;
};

int cmd_synth(const CommonOptions& opts);
int cmd_ingest(const CommonOptions& opts);
int cmd_train(const CommonOptions& opts);
int cmd_evaluate(const CommonOptions& opts);
int cmd_match(const MatchOptions& opts);

}  // namespace treid::cli
