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

#include "commands.hpp"

#include <iostream>
#include <map>

#include <json.hpp>

#include "treid/evaluation.hpp"
#include "treid/io.hpp"
#include "treid/synth.hpp"

namespace treid::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct DescriptorFiles {
  fs::path view_a;
  fs::path view_b;
  FeatureFormat format = FeatureFormat::Csv;
};

struct RunConfig {
  fs::path base_dir;
  std::map<std::string, DescriptorFiles> descriptors;
  ProtocolConfig protocol;
  std::vector<std::size_t> d_out_sweep;
  std::optional<std::vector<std::size_t>> table_ranks;
  std::optional<fs::path> out;
  json inputs;  // descriptor section as written, for provenance
};

json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  try {
    return json::parse(io::read_file_text(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

RunConfig parse_run_config(const CommonOptions& opts) {
  const json j = read_json(opts.config);
  RunConfig rc;
  rc.base_dir = opts.config.parent_path();
  try {
    if (!j.contains("descriptors") || !j.at("descriptors").is_object() ||
        j.at("descriptors").empty()) {
      throw ConfigError("config needs a non-empty \"descriptors\" object");
    }
    rc.inputs = j.at("descriptors");
    for (const auto& [name, d] : j.at("descriptors").items()) {
      DescriptorFiles files;
      files.view_a = resolve(rc.base_dir, d.at("A").get<std::string>());
      files.view_b = resolve(rc.base_dir, d.at("B").get<std::string>());
      files.format = parse_feature_format(
          opts.format.value_or(get_or<std::string>(d, "format", "csv")));
      rc.descriptors.emplace(name, files);
    }
    ProtocolConfig& pc = rc.protocol;
    if (j.contains("fusion")) {
      pc.fusion = j.at("fusion").get<std::vector<std::string>>();
    } else {
      for (const auto& [name, files] : rc.descriptors) pc.fusion.push_back(name);
    }
    if (pc.fusion.empty()) throw ConfigError("\"fusion\" must not be empty");
    for (const auto& name : pc.fusion) {
      if (!rc.descriptors.contains(name)) {
        throw ConfigError("fusion names unknown descriptor '" + name + "'");
      }
    }
    pc.part_width = j.at("part_width").get<std::size_t>();
    pc.txqda.p_out = j.at("p_out").get<std::size_t>();
    const json& dout = j.at("d_out");
    rc.d_out_sweep = dout.is_array() ? dout.get<std::vector<std::size_t>>()
                                     : std::vector<std::size_t>{dout.get<std::size_t>()};
    if (rc.d_out_sweep.empty()) throw ConfigError("\"d_out\" sweep must not be empty");
    pc.txqda.d_out = rc.d_out_sweep.front();
    pc.txqda.max_iters = get_or<std::size_t>(j, "max_iters", 5);
    pc.txqda.conv_tol = get_or<double>(j, "conv_tol", 1e-6);
    pc.txqda.reg_eps = get_or<double>(j, "reg_eps", 1e-3);
    pc.standardize = get_or<bool>(j, "standardize", true);
    pc.n_folds = get_or<std::size_t>(j, "folds", 10);
    pc.train_fraction = get_or<double>(j, "train_fraction", 0.5);
    pc.seed = opts.seed.value_or(get_or<std::uint64_t>(j, "seed", 0));
    pc.direction = parse_direction(get_or<std::string>(j, "direction", "A->B"));
    if (j.contains("table_ranks")) rc.table_ranks = j.at("table_ranks").get<std::vector<std::size_t>>();
    if (opts.out) {
      rc.out = *opts.out;
    } else if (j.contains("out")) {
      rc.out = resolve(rc.base_dir, j.at("out").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(opts.config.string() + ": " + e.what());
  }
  return rc;
}

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw ConfigError("feature file not found: " + p.string());
}

DescriptorViews load_views(const RunConfig& rc) {
  DescriptorViews data;
  for (const auto& name : rc.protocol.fusion) {
    const DescriptorFiles& files = rc.descriptors.at(name);
    require_file(files.view_a);
    require_file(files.view_b);
    FeatureSet a = load_feature_set(files.view_a, files.format, name, View::A);
    FeatureSet b = load_feature_set(files.view_b, files.format, name, View::B);
    if (a.dim() != b.dim()) {
      throw DataError("descriptor '" + name + "': views have dimensions " +
                      std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    }
    data.emplace(name, align_views(a, b));
  }
  return data;
}

const char* extension(FeatureFormat f) { return f == FeatureFormat::Csv ? ".csv" : ".bin"; }

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const FoldError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.numerical() ? kNumericalError : kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

SynthConfig synth_from_json(const json& j, SynthConfig c) {
  c.n_persons = get_or(j, "n_persons", c.n_persons);
  c.latent_dim = get_or(j, "latent_dim", c.latent_dim);
  c.feature_dim = get_or(j, "feature_dim", c.feature_dim);
  c.noise_sigma = get_or(j, "noise_sigma", c.noise_sigma);
  c.latent_scale = get_or(j, "latent_scale", c.latent_scale);
  c.view_shift = get_or(j, "view_shift", c.view_shift);
  c.view_transform_seed = get_or(j, "view_transform_seed", c.view_transform_seed);
  c.sample_seed = get_or(j, "sample_seed", c.sample_seed);
  c.descriptor_name = get_or(j, "descriptor", c.descriptor_name);
  return c;
}

std::pair<std::string, fs::path> split_named(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) return {"", fs::path(arg)};
  return {arg.substr(0, eq), fs::path(arg.substr(eq + 1))};
}

// Loads one side of a match request and lines every descriptor up on the
// persons they share, ascending.
DescriptorSets load_side(const std::vector<std::string>& args,
                         const std::vector<std::string>& fusion, FeatureFormat format,
                         View default_view) {
  DescriptorSets sets;
  for (const auto& arg : args) {
    auto [name, path] = split_named(arg);
    if (name.empty()) {
      if (fusion.size() != 1) {
        throw ConfigError("model fuses several descriptors; pass name=path for each");
      }
      name = fusion.front();
    }
    require_file(path);
    sets.insert_or_assign(name, load_feature_set(path, format, name, default_view));
  }
  std::vector<PersonId> common;
  bool first = true;
  for (const auto& name : fusion) {
    const auto it = sets.find(name);
    if (it == sets.end()) throw ConfigError("no features given for descriptor '" + name + "'");
    std::vector<PersonId> ids = it->second.person_ids;
    std::sort(ids.begin(), ids.end());
    if (first) {
      common = std::move(ids);
      first = false;
    } else {
      std::vector<PersonId> next;
      std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(),
                            std::back_inserter(next));
      common = std::move(next);
    }
  }
  if (common.empty()) throw DataError("descriptors share no persons");
  DescriptorSets out;
  for (const auto& name : fusion) out.emplace(name, sets.at(name).subset(common));
  return out;
}

}  // namespace

int cmd_synth(const CommonOptions& opts) {
  return guarded([&] {
    json j = json::object();
    if (!opts.config.empty()) j = read_json(opts.config);
    const SynthConfig base = synth_from_json(j, SynthConfig{});
    const FeatureFormat format =
        parse_feature_format(opts.format.value_or(get_or<std::string>(j, "format", "csv")));
    fs::path out_dir = opts.out.value_or(fs::path(get_or<std::string>(j, "out", ".")));
    if (!opts.out && !opts.config.empty() && out_dir.is_relative()) {
      out_dir = opts.config.parent_path() / out_dir;
    }

    std::vector<SynthConfig> configs;
    if (j.contains("descriptors")) {
      for (const auto& d : j.at("descriptors")) configs.push_back(synth_from_json(d, base));
    } else {
      configs.push_back(base);
    }
    for (SynthConfig& c : configs) {
      if (opts.seed) c.sample_seed = *opts.seed;
      const auto [a, b] = generate_crossview(c);
      const fs::path pa = out_dir / (c.descriptor_name + "_A" + extension(format));
      const fs::path pb = out_dir / (c.descriptor_name + "_B" + extension(format));
      save_feature_set(a, pa, format);
      save_feature_set(b, pb, format);
      std::cout << pa.string() << '\n' << pb.string() << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_ingest(const CommonOptions& opts) {
  return guarded([&] {
    const RunConfig rc = parse_run_config(opts);
    const DescriptorViews data = load_views(rc);
    const std::vector<PersonId> common = common_persons(data, rc.protocol.fusion);
    std::size_t parts = 0;
    for (const auto& name : rc.protocol.fusion) {
      const PairedViews& pv = data.at(name);
      const std::size_t p = (pv.view_a.dim() + rc.protocol.part_width - 1) / rc.protocol.part_width;
      parts += p;
      std::cout << name << ": " << pv.view_a.size() << " paired persons, dim "
                << pv.view_a.dim() << ", " << p << " parts of width " << rc.protocol.part_width
                << '\n';
    }
    std::cout << "fused tensor: " << parts << " x " << rc.protocol.part_width << " x "
              << common.size() << '\n';
    if (opts.out) {
      const FeatureFormat format = parse_feature_format(opts.format.value_or("csv"));
      const DescriptorViews aligned = restrict_persons(data, rc.protocol.fusion, common);
      for (const auto& [name, pv] : aligned) {
        save_feature_set(pv.view_a, *opts.out / (name + "_A" + extension(format)), format);
        save_feature_set(pv.view_b, *opts.out / (name + "_B" + extension(format)), format);
      }
    }
    return static_cast<int>(kOk);
  });
}

int cmd_train(const CommonOptions& opts) {
  return guarded([&] {
    const RunConfig rc = parse_run_config(opts);
    const DescriptorViews loaded = load_views(rc);
    const std::vector<PersonId> ids = common_persons(loaded, rc.protocol.fusion);
    const DescriptorViews data = restrict_persons(loaded, rc.protocol.fusion, ids);
    if (rc.d_out_sweep.size() > 1) {
      std::cerr << "note: d_out sweep given; training with the first value "
                << rc.d_out_sweep.front() << '\n';
    }
    FeaturePipeline pipeline{rc.protocol.part_width, rc.protocol.fusion, rc.protocol.standardize, {}};
    pipeline.fit(data);
    TxqdaModel model = txqda_train(pipeline.transform(view_sets(data, View::A)),
                                   pipeline.transform(view_sets(data, View::B)), ids,
                                   rc.protocol.txqda);
    model.extra = {{"pipeline", pipeline.to_json()}, {"train_persons", ids.size()}};
    const fs::path out = rc.out.value_or(fs::path("model.txqd"));
    io::write_file_atomic(out, serialize_model(model));
    for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << out.string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_evaluate(const CommonOptions& opts) {
  return guarded([&] {
    const RunConfig rc = parse_run_config(opts);
    const DescriptorViews data = load_views(rc);

    std::vector<ExperimentReport> reports;
    for (std::size_t d_out : rc.d_out_sweep) {
      ProtocolConfig pc = rc.protocol;
      pc.txqda.d_out = d_out;
      reports.push_back(run_protocol(data, pc));
    }

    std::vector<std::size_t> ranks;
    if (rc.table_ranks) {
      ranks = *rc.table_ranks;
    } else {
      for (std::size_t r : {1, 5, 10, 20}) {
        if (r <= reports.front().mean.size()) ranks.push_back(r);
      }
    }
    const FormattedTable table = format_table(reports, ranks);

    json provenance = rc.protocol.to_json();
    provenance["txqda"]["d_out"] = rc.d_out_sweep;
    provenance["inputs"] = rc.inputs;
    const std::string stem = config_hash(provenance) + "_s" + std::to_string(rc.protocol.seed);

    json sweep = json::array();
    json timing = json::array();
    for (const auto& r : reports) {
      sweep.push_back(r.to_json());
      timing.push_back(r.timing_json());
    }
    const json report = {{"config", provenance}, {"sweep", sweep}};
    const fs::path dir = rc.out.value_or(fs::path("."));
    io::write_file_atomic(dir / ("report_" + stem + ".json"), report.dump(2) + "\n");
    io::write_file_atomic(dir / ("table_" + stem + ".csv"), table.csv);
    io::write_file_atomic(dir / ("table_" + stem + ".txt"), table.text);
    io::write_file_atomic(dir / ("timing_" + stem + ".json"), timing.dump(2) + "\n");
    std::cout << table.text;
    std::cout << "report: " << (dir / ("report_" + stem + ".json")).string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_match(const MatchOptions& opts) {
  return guarded([&] {
    if (!fs::exists(opts.model)) throw ConfigError("model file not found: " + opts.model.string());
    const TxqdaModel model = deserialize_model(io::read_file_bytes(opts.model));
    if (!model.extra.contains("pipeline")) {
      throw FormatError("model carries no feature pipeline; was it written by train?");
    }
    FeaturePipeline pipeline = FeaturePipeline::from_json(model.extra.at("pipeline"));
    if (opts.part_width) pipeline.part_width = *opts.part_width;
    const FeatureFormat format = parse_feature_format(opts.format.value_or("csv"));

    const DescriptorSets probe = load_side(opts.probe, pipeline.fusion, format, View::A);
    const DescriptorSets gallery = load_side(opts.gallery, pipeline.fusion, format, View::B);
    const Matrix probe_rows = project(model, pipeline.transform(probe));
    const Matrix gallery_rows = project(model, pipeline.transform(gallery));
    const Matrix d = distance_matrix(probe_rows, gallery_rows, model.metric);

    const auto& probe_ids = probe.begin()->second.person_ids;
    const auto& gallery_ids = gallery.begin()->second.person_ids;
    std::string csv = "probe_id,rank,gallery_id,distance,similarity\n";
    std::vector<double> row(static_cast<std::size_t>(d.cols()));
    for (Eigen::Index p = 0; p < d.rows(); ++p) {
      for (Eigen::Index g = 0; g < d.cols(); ++g) row[static_cast<std::size_t>(g)] = d(p, g);
      const RankedList ranked = rank_distances(row);
      const std::size_t limit = std::min(ranked.size(), opts.top.value_or(ranked.size()));
      for (std::size_t r = 0; r < limit; ++r) {
        csv += std::to_string(probe_ids[static_cast<std::size_t>(p)]) + "," +
               std::to_string(r + 1) + "," + std::to_string(gallery_ids[ranked.order[r]]) + "," +
               io::format_double(ranked.distances[r]) + "," +
               io::format_double(ranked.similarities[r]) + "\n";
      }
    }
    if (opts.out) {
      io::write_file_atomic(*opts.out, csv);
    } else {
      std::cout << csv;
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace treid::cli
