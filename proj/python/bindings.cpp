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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "treid/evaluation.hpp"
#include "treid/synth.hpp"

namespace py = pybind11;
using namespace treid;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

Tensor3 tensor_from_array(const FArray& a) {
  if (a.ndim() != 3) throw ShapeError("expected a 3-d array (parts, features, persons)");
  const Dims3 dims{static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                   static_cast<std::size_t>(a.shape(2))};
  return Tensor3(dims, std::vector<double>(a.data(), a.data() + a.size()));
}

FArray tensor_to_array(const Tensor3& t) {
  FArray out({t.parts(), t.features(), t.persons()});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

ModeIndex mode_of(int m) { return ModeIndex(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tensor cross-view quadratic discriminant analysis for person re-identification";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::enum_<View>(m, "View").value("A", View::A).value("B", View::B);

  py::class_<Tensor3>(m, "Tensor3")
      .def(py::init(&tensor_from_array), py::arg("array"))
      .def_property_readonly("shape",
                             [](const Tensor3& t) {
                               return py::make_tuple(t.parts(), t.features(), t.persons());
                             })
      .def("numpy", &tensor_to_array);

  m.def("unfold", [](const Tensor3& t, int mode) { return unfold(t, mode_of(mode)); },
        py::arg("tensor"), py::arg("mode"));
  m.def(
      "fold",
      [](const Matrix& mat, int mode, std::array<std::size_t, 3> dims) {
        return fold(mat, mode_of(mode), dims);
      },
      py::arg("matrix"), py::arg("mode"), py::arg("dims"));
  m.def(
      "mode_product",
      [](const Tensor3& t, const Matrix& u, int mode) { return mode_product(t, u, mode_of(mode)); },
      py::arg("tensor"), py::arg("u"), py::arg("mode"));

  py::class_<FeatureSet>(m, "FeatureSet")
      .def(py::init([](std::string name, View view, std::vector<PersonId> ids, Matrix features) {
             FeatureSet fs{std::move(name), view, std::move(ids), std::move(features)};
             fs.validate();
             return fs;
           }),
           py::arg("descriptor_name"), py::arg("view"), py::arg("person_ids"), py::arg("features"))
      .def_readonly("descriptor_name", &FeatureSet::descriptor_name)
      .def_readonly("view", &FeatureSet::view)
      .def_readonly("person_ids", &FeatureSet::person_ids)
      .def_readonly("features", &FeatureSet::features)
      .def("__len__", &FeatureSet::size);

  m.def(
      "load_feature_set",
      [](const std::filesystem::path& path, const std::string& format) {
        return load_feature_set(path, parse_feature_format(format));
      },
      py::arg("path"), py::arg("format") = "csv");
  m.def(
      "save_feature_set",
      [](const FeatureSet& fs, const std::filesystem::path& path, const std::string& format) {
        save_feature_set(fs, path, parse_feature_format(format));
      },
      py::arg("features"), py::arg("path"), py::arg("format") = "csv");
  m.def("tensorize", &tensorize, py::arg("features"), py::arg("part_width"));

  m.def(
      "generate_crossview",
      [](std::size_t n_persons, std::size_t latent_dim, std::size_t feature_dim,
         double noise_sigma, double view_shift, std::uint64_t view_transform_seed,
         std::uint64_t sample_seed, std::string descriptor_name) {
        SynthConfig c;
        c.n_persons = n_persons;
        c.latent_dim = latent_dim;
        c.feature_dim = feature_dim;
        c.noise_sigma = noise_sigma;
        c.view_shift = view_shift;
        c.view_transform_seed = view_transform_seed;
        c.sample_seed = sample_seed;
        c.descriptor_name = std::move(descriptor_name);
        return generate_crossview(c);
      },
      py::arg("n_persons") = 100, py::arg("latent_dim") = 8, py::arg("feature_dim") = 60,
      py::arg("noise_sigma") = 0.2, py::arg("view_shift") = 1.0,
      py::arg("view_transform_seed") = 1, py::arg("sample_seed") = 2,
      py::arg("descriptor_name") = "synth");

  m.def(
      "difference_moments",
      [](const Matrix& xa, std::vector<PersonId> la, const Matrix& xb, std::vector<PersonId> lb) {
        const ScatterPair s = difference_moments(xa, la, xb, lb);
        return py::make_tuple(s.sigma_i, s.sigma_e, s.n_i, s.n_e);
      },
      py::arg("xa"), py::arg("labels_a"), py::arg("xb"), py::arg("labels_b"));
  m.def("regularize", &regularize, py::arg("sigma"), py::arg("eps"));
  m.def(
      "solve_gen_eig",
      [](const Matrix& se, const Matrix& si) {
        const Spectrum s = solve_gen_eig(se, si);
        return py::make_tuple(s.values, s.vectors);
      },
      py::arg("sigma_e"), py::arg("sigma_i"));

  py::class_<XqdaModel>(m, "XqdaModel")
      .def_readonly("projection", &XqdaModel::projection)
      .def_readonly("metric", &XqdaModel::metric)
      .def_readonly("warnings", &XqdaModel::warnings)
      .def("project", &XqdaModel::project, py::arg("samples"))
      .def("distance", &XqdaModel::distance, py::arg("x"), py::arg("z"));
  m.def(
      "xqda_train",
      [](const Matrix& xa, std::vector<PersonId> la, const Matrix& xb, std::vector<PersonId> lb,
         std::size_t out_dim, double reg_eps) {
        return xqda_train(xa, la, xb, lb, {out_dim, reg_eps});
      },
      py::arg("xa"), py::arg("labels_a"), py::arg("xb"), py::arg("labels_b"), py::arg("out_dim"),
      py::arg("reg_eps") = 1e-3);

  py::class_<TxqdaConfig>(m, "TxqdaConfig")
      .def(py::init([](std::size_t p_out, std::size_t d_out, std::size_t max_iters,
                       double conv_tol, double reg_eps) {
             return TxqdaConfig{p_out, d_out, max_iters, conv_tol, reg_eps};
           }),
           py::arg("p_out"), py::arg("d_out"), py::arg("max_iters") = 5,
           py::arg("conv_tol") = 1e-6, py::arg("reg_eps") = 1e-3)
      .def_readwrite("p_out", &TxqdaConfig::p_out)
      .def_readwrite("d_out", &TxqdaConfig::d_out)
      .def_readwrite("max_iters", &TxqdaConfig::max_iters)
      .def_readwrite("conv_tol", &TxqdaConfig::conv_tol)
      .def_readwrite("reg_eps", &TxqdaConfig::reg_eps);

  py::class_<TxqdaModel>(m, "TxqdaModel")
      .def_readonly("u1", &TxqdaModel::u1)
      .def_readonly("u2", &TxqdaModel::u2)
      .def_readonly("metric", &TxqdaModel::metric)
      .def_readonly("iterations_run", &TxqdaModel::iterations_run)
      .def_readonly("convergence_trace", &TxqdaModel::convergence_trace)
      .def_readonly("warnings", &TxqdaModel::warnings)
      .def("distance", &TxqdaModel::distance, py::arg("x"), py::arg("z"))
      .def("to_bytes",
           [](const TxqdaModel& model) {
             const auto bytes = serialize_model(model);
             return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
           })
      .def_static("from_bytes", [](const py::bytes& b) {
        const std::string s = b;
        const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
        return deserialize_model(std::vector<std::uint8_t>(p, p + s.size()));
      });
  m.def(
      "txqda_train",
      [](const Tensor3& a, const Tensor3& b, std::vector<PersonId> labels,
         const TxqdaConfig& config) { return txqda_train(a, b, labels, config); },
      py::arg("view_a"), py::arg("view_b"), py::arg("labels"), py::arg("config"));
  m.def(
      "project", [](const TxqdaModel& model, const Tensor3& t) { return project(model, t); },
      py::arg("model"), py::arg("tensor"));
  m.def("distance_matrix", &distance_matrix, py::arg("probes"), py::arg("gallery"),
        py::arg("metric"));

  m.def(
      "rank_distances",
      [](const std::vector<double>& d) {
        const RankedList r = rank_distances(d);
        return py::make_tuple(r.order, r.distances, r.similarities);
      },
      py::arg("distances"));
  m.def(
      "normalize_scores", [](const std::vector<double>& d) { return normalize_scores(d); },
      py::arg("distances"));

  m.def(
      "make_folds",
      [](const std::vector<PersonId>& ids, std::size_t n_folds, double train_fraction,
         std::uint64_t seed) {
        const FoldPlan plan = make_folds(ids, n_folds, train_fraction, seed);
        py::list out;
        for (const Fold& f : plan.folds) out.append(py::make_tuple(f.train, f.test));
        return out;
      },
      py::arg("person_ids"), py::arg("n_folds") = 10, py::arg("train_fraction") = 0.5,
      py::arg("seed") = 0);

  m.def(
      "_run_protocol_json",
      [](const std::map<std::string, std::pair<FeatureSet, FeatureSet>>& descriptors,
         std::size_t part_width, std::size_t p_out, std::size_t d_out,
         std::vector<std::string> fusion, bool standardize, std::size_t n_folds,
         double train_fraction, std::uint64_t seed, const std::string& direction,
         std::size_t max_iters) {
        DescriptorViews data;
        for (const auto& [name, views] : descriptors) {
          data.emplace(name, align_views(views.first, views.second));
        }
        ProtocolConfig pc;
        pc.part_width = part_width;
        pc.txqda.p_out = p_out;
        pc.txqda.d_out = d_out;
        pc.txqda.max_iters = max_iters;
        if (fusion.empty()) {
          for (const auto& [name, v] : data) fusion.push_back(name);
        }
        pc.fusion = std::move(fusion);
        pc.standardize = standardize;
        pc.n_folds = n_folds;
        pc.train_fraction = train_fraction;
        pc.seed = seed;
        pc.direction = parse_direction(direction);
        py::gil_scoped_release release;
        return run_protocol(data, pc).to_json().dump();
      },
      py::arg("descriptors"), py::arg("part_width"), py::arg("p_out"), py::arg("d_out"),
      py::arg("fusion") = std::vector<std::string>{}, py::arg("standardize") = true,
      py::arg("n_folds") = 10, py::arg("train_fraction") = 0.5, py::arg("seed") = 0,
      py::arg("direction") = "A->B", py::arg("max_iters") = 5);

  m.def(
      "format_table_row",
      [](std::size_t dim, const std::vector<double>& values) {
        return format_table_row(dim, values);
      },
      py::arg("dim"), py::arg("values"));
}
