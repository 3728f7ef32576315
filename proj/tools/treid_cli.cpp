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

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

constexpr const char* kConfigHelp = R"(Run configuration (JSON) used by ingest, train and evaluate:
  descriptors     {name: {"A": path, "B": path, "format": "csv"|"bin"}}  (required;
                  relative paths resolve against the config file's directory)
  fusion          descriptor names to fuse, in part order  (default: all, by name)
  part_width      part width w shared by every descriptor  (required)
  p_out           mode-1 output dim                        (required)
  d_out           mode-2 output dim, or a list for a sweep (required)
  max_iters       alternation rounds                       (default 5)
  conv_tol        projector-change stopping threshold      (default 1e-6)
  reg_eps         scatter regularization fraction          (default 1e-3)
  standardize     z-score each descriptor on training rows (default true)
  folds           cross-validation folds                   (default 10)
  train_fraction  identities used for training per fold    (default 0.5)
  seed            fold shuffling seed                      (default 0)
  direction       "A->B", "B->A" or "both"                 (default "A->B")
  table_ranks     ranks in the CSV/text tables             (default 1,5,10,20 within gallery)
  out             output directory (evaluate) or model path (train)

Synth configuration (JSON, optional):
  n_persons 100, latent_dim 8, feature_dim 60, noise_sigma 0.2, latent_scale 1.0,
  view_shift 1.0, view_transform_seed 1, sample_seed 2, descriptor "synth",
  format "csv", out ".", descriptors [ {per-descriptor overrides incl. "descriptor"} ]

Exit status: 0 success, 1 configuration/input error, 2 numerical failure.)";

}  // namespace

int main(int argc, char** argv) {
  using namespace treid::cli;
  CLI::App app{"Tensor cross-view discriminant learning for person re-identification"};
  app.footer(kConfigHelp);
  app.require_subcommand(1);

  CommonOptions common;
  MatchOptions match;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", common.config, "JSON configuration file");
    if (config_required) c->required();
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", out, "Output path (overrides the config's \"out\")");
    sub->add_option("--format", format, "Feature file format: csv or bin")
        ->check(CLI::IsMember({"csv", "bin"}));
  };

  auto* synth = app.add_subcommand("synth", "Generate synthetic cross-view feature files");
  add_common(synth, false);
  auto* ingest = app.add_subcommand("ingest", "Load, validate and align feature files");
  add_common(ingest, true);
  auto* train = app.add_subcommand("train", "Train a model on all aligned persons");
  add_common(train, true);
  auto* evaluate = app.add_subcommand("evaluate", "Run the cross-validation protocol");
  add_common(evaluate, true);

  auto* m = app.add_subcommand("match", "Rank gallery persons for every probe");
  m->add_option("--model", match.model, "Model file written by train")->required();
  m->add_option("--probe", match.probe, "Probe features: path or name=path (repeatable)")
      ->required();
  m->add_option("--gallery", match.gallery, "Gallery features: path or name=path (repeatable)")
      ->required();
  std::size_t part_width = 0;
  std::size_t top = 0;
  m->add_option("--part-width", part_width, "Tensorize at this width instead of the model's");
  m->add_option("--top", top, "Only emit the best N gallery entries per probe");
  m->add_option("--format", format, "Feature file format: csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  m->add_option("--out", out, "Ranked CSV output (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  const auto fill = [&](CLI::App* sub) {
    if (sub->count("--seed") > 0) common.seed = seed;
    if (sub->count("--out") > 0) common.out = out;
    if (sub->count("--format") > 0) common.format = format;
  };
  if (synth->parsed()) {
    fill(synth);
    return cmd_synth(common);
  }
  if (ingest->parsed()) {
    fill(ingest);
    return cmd_ingest(common);
  }
  if (train->parsed()) {
    fill(train);
    return cmd_train(common);
  }
  if (evaluate->parsed()) {
    fill(evaluate);
    return cmd_evaluate(common);
  }
  if (m->count("--part-width") > 0) match.part_width = part_width;
  if (m->count("--top") > 0) match.top = top;
  if (m->count("--out") > 0) match.out = out;
  if (m->count("--format") > 0) match.format = format;
  return cmd_match(match);
}
