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

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "treid/evaluation.hpp"
#include "treid/matching.hpp"
#include "treid/synth.hpp"
#include "treid/txqda.hpp"
#include "treid/xqda.hpp"

using namespace treid;
namespace oracle = treid::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<PersonId> iota_ids(std::size_t n) {
  std::vector<PersonId> ids(n);
  std::iota(ids.begin(), ids.end(), PersonId{0});
  return ids;
}

DescriptorViews synth_views(const SynthConfig& cfg) {
  auto [a, b] = generate_crossview(cfg);
  DescriptorViews data;
  data.emplace(cfg.descriptor_name, PairedViews{std::move(a), std::move(b)});
  return data;
}

ProtocolConfig separability_protocol() {
  ProtocolConfig pc;
  pc.part_width = 15;
  pc.fusion = {"synth"};
  pc.txqda.p_out = 4;
  pc.txqda.d_out = 10;
  pc.n_folds = 10;
  pc.seed = 7;
  return pc;
}

std::vector<ExperimentReport> g_reports;  // every report generated here, for the CMC check

Outcome gen_eig_oracle() {
  Outcome out;
  const auto start = Clock::now();
  std::mt19937_64 gen(11);
  const Matrix xa = oracle::random_matrix(gen, 20, 8);
  const Matrix xb = xa + 0.5 * oracle::random_matrix(gen, 20, 8);
  const auto ids = iota_ids(20);
  const ScatterPair s = difference_moments(xa, ids, xb, ids);
  const Matrix sigma_i = regularize(s.sigma_i, 1e-3);
  const Spectrum sp = solve_gen_eig(s.sigma_e, sigma_i);
  const std::vector<double> want = oracle::brute_force_gen_eigenvalues(s.sigma_e, sigma_i);
  out.require(sp.size() == want.size(), "eigenvalue count differs from brute force");
  double worst_rel = 0.0;
  double worst_res = 0.0;
  for (std::size_t k = 0; k < std::min(sp.size(), want.size()); ++k) {
    const double lambda = sp.values(static_cast<Eigen::Index>(k));
    worst_rel = std::max(worst_rel, std::abs(lambda - want[k]) / std::abs(want[k]));
    const Vector w = sp.vectors.col(static_cast<Eigen::Index>(k));
    const double res = (s.sigma_e * w - lambda * sigma_i * w).norm();
    worst_res = std::max(worst_res, res / s.sigma_e.norm());
  }
  const double t = seconds_since(start);
  out.require(worst_rel <= 1e-8, "eigenvalue rel error " + fmt("%.3g", worst_rel));
  out.require(worst_res <= 1e-8, "residual " + fmt("%.3g", worst_res));
  out.require(t < 1.0, "runtime " + fmt("%.3f s", t));
  if (out.pass) {
    out.detail = "max rel " + fmt("%.2g", worst_rel) + ", max residual " + fmt("%.2g", worst_res) +
                 ", " + fmt("%.3f s", t);
  }
  return out;
}

Outcome closed_form_moments() {
  Outcome out;
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> size(2, 30);
  std::uniform_int_distribution<int> dim(1, 10);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto na = static_cast<std::size_t>(size(gen));
    const auto nb = static_cast<std::size_t>(size(gen));
    const int d = dim(gen);
    // labels drawn from a small pool so that both pair kinds occur
    const int pool = std::max<int>(2, static_cast<int>(std::min(na, nb)) / 2);
    std::uniform_int_distribution<int> lab(0, pool - 1);
    std::vector<PersonId> la(na), lb(nb);
    for (std::size_t i = 0; i < na; ++i) la[i] = i < 2 ? static_cast<PersonId>(i) : lab(gen);
    for (std::size_t i = 0; i < nb; ++i) lb[i] = i < 2 ? static_cast<PersonId>(i) : lab(gen);
    const Matrix xa = oracle::random_matrix(gen, static_cast<Eigen::Index>(na), d);
    const Matrix xb = oracle::random_matrix(gen, static_cast<Eigen::Index>(nb), d);
    const ScatterPair s = difference_moments(xa, la, xb, lb);
    const oracle::NaiveMoments n = oracle::naive_difference_moments(xa, la, xb, lb);
    out.require(s.n_i == n.n_i && s.n_e == n.n_e, "pair counts differ");
    worst = std::max({worst, oracle::rel_frobenius(s.sigma_e, n.sigma_e),
                      oracle::rel_frobenius(s.sigma_i, n.sigma_i)});
  }
  out.require(worst <= 1e-10, "rel Frobenius " + fmt("%.3g", worst));
  if (out.pass) out.detail = "40 random cases, max rel " + fmt("%.2g", worst);
  return out;
}

Outcome txqda_degeneracy() {
  Outcome out;
  SynthConfig cfg;
  cfg.n_persons = 50;
  cfg.latent_dim = 6;
  cfg.feature_dim = 20;
  const auto [a, b] = generate_crossview(cfg);
  const Tensor3 ta = tensorize(a, 20);
  const Tensor3 tb = tensorize(b, 20);
  TxqdaConfig tc;
  tc.p_out = 1;
  tc.d_out = 10;
  tc.max_iters = 1;
  const TxqdaModel tm = txqda_train(ta, tb, a.person_ids, tc);
  const XqdaModel xm = xqda_train(a.features, a.person_ids, b.features, b.person_ids, {10, 1e-3});
  const Matrix dt = distance_matrix(project(tm, ta), project(tm, tb), tm.metric);
  double worst = 0.0;
  for (Eigen::Index p = 0; p < 50; ++p) {
    for (Eigen::Index q = 0; q < 50; ++q) {
      const double dx = xm.distance(a.features.row(p).transpose(), b.features.row(q).transpose());
      worst = std::max(worst, std::abs(dt(p, q) - dx) / std::abs(dx));
    }
  }
  out.require(tm.iterations_run == 1, "expected one iteration");
  out.require(worst <= 1e-8, "distance rel error " + fmt("%.3g", worst));
  if (out.pass) out.detail = "2500 pairs, max rel " + fmt("%.2g", worst);
  return out;
}

Outcome separability() {
  Outcome out;
  const auto start = Clock::now();
  const SynthConfig cfg;  // n=100, D=60 defaults
  const DescriptorViews data = synth_views(cfg);
  const ProtocolConfig pc = separability_protocol();
  const ExperimentReport report = run_protocol(data, pc);
  const double t = seconds_since(start);
  g_reports.push_back(report);

  // raw Euclidean nearest neighbour on the same test halves
  const PairedViews& pv = data.at("synth");
  const FoldPlan plan = make_folds(pv.person_ids(), pc.n_folds, pc.train_fraction, pc.seed);
  double nn = 0.0;
  for (const Fold& f : plan.folds) {
    nn += oracle::nearest_neighbour_rank1(pv.view_a.subset(f.test).features,
                                          pv.view_b.subset(f.test).features);
  }
  nn /= static_cast<double>(plan.folds.size());
  const double rank1 = report.mean.at_rank(1);
  out.require(cfg.n_persons == 100 && cfg.feature_dim == 60, "generator defaults changed");
  out.require(nn <= 0.7, "raw NN rank-1 " + fmt("%.4f", nn) + " above 0.7");
  out.require(rank1 >= 0.9, "TXQDA rank-1 " + fmt("%.4f", rank1) + " below 0.9");
  out.require(rank1 - nn >= 0.15, "gap " + fmt("%.4f", rank1 - nn) + " below 0.15");
  out.require(t < 60.0, "runtime " + fmt("%.1f s", t));
  out.detail = "rank-1 " + fmt("%.4f", rank1) + " vs raw NN " + fmt("%.4f", nn) + ", " +
               fmt("%.2f s", t) + (out.pass ? "" : "; " + out.detail);
  return out;
}

Outcome cmc_properties() {
  Outcome out;
  // a few more protocol variants so the check sees different shapes
  SynthConfig small;
  small.n_persons = 24;
  small.feature_dim = 30;
  ProtocolConfig pc = separability_protocol();
  pc.part_width = 10;
  pc.txqda.p_out = 3;
  pc.txqda.d_out = 6;
  pc.n_folds = 3;
  for (MatchDirection dir : {MatchDirection::AtoB, MatchDirection::BtoA, MatchDirection::Both}) {
    pc.direction = dir;
    g_reports.push_back(run_protocol(synth_views(small), pc));
  }
  const auto check_curve = [&](const CmcCurve& c, const std::string& where) {
    out.require(!c.values.empty(), where + ": empty curve");
    out.require(std::is_sorted(c.values.begin(), c.values.end()), where + ": decreasing");
    out.require(c.values.back() == 1.0, where + ": final value not 1");
    for (double v : c.values) out.require(v >= 0.0 && v <= 1.0, where + ": value outside [0,1]");
  };
  std::size_t curves = 0;
  for (std::size_t r = 0; r < g_reports.size(); ++r) {
    const ExperimentReport& rep = g_reports[r];
    const std::string tag = "report " + std::to_string(r);
    check_curve(rep.mean, tag + " mean");
    for (const FoldResult& f : rep.folds) {
      check_curve(f.cmc, tag + " fold " + std::to_string(f.index));
      ++curves;
    }
    out.require(!rep.summary.empty(), tag + ": empty summary");
    for (const auto& [rank, value] : rep.summary) {
      out.require(value == rep.mean.at_rank(rank), tag + ": summary differs from mean curve");
    }
    const nlohmann::json j = rep.to_json();
    for (const auto& s : j.at("summary")) {
      out.require(s.at("value").get<double>() == rep.mean.at_rank(s.at("rank").get<std::size_t>()),
                  tag + ": serialized summary differs");
    }
  }
  if (out.pass) {
    out.detail = std::to_string(g_reports.size()) + " reports, " + std::to_string(curves) +
                 " fold curves";
  }
  return out;
}

Outcome tensor_algebra() {
  Outcome out;
  std::mt19937_64 gen(16);
  std::uniform_int_distribution<std::size_t> extent(1, 7);
  double worst_comm = 0.0;
  double worst_unfold = 0.0;
  const int shapes = 150;
  for (int s = 0; s < shapes; ++s) {
    const Dims3 dims{extent(gen), extent(gen), extent(gen)};
    const Tensor3 t = oracle::random_tensor(gen, dims);
    for (int m = 1; m <= 3; ++m) {
      const ModeIndex mode(m);
      const Tensor3 back = fold(unfold(t, mode), mode, dims);
      out.require(std::equal(back.data().begin(), back.data().end(), t.data().begin()),
                  "fold(unfold) not bitwise identical");
    }
    const Matrix u1 = oracle::random_matrix(gen, static_cast<Eigen::Index>(dims[0]),
                                            static_cast<Eigen::Index>(extent(gen)));
    const Matrix u2 = oracle::random_matrix(gen, static_cast<Eigen::Index>(dims[1]),
                                            static_cast<Eigen::Index>(extent(gen)));
    const Tensor3 ab = mode_product(mode_product(t, u1, kPartsMode), u2, kFeaturesMode);
    const Tensor3 ba = mode_product(mode_product(t, u2, kFeaturesMode), u1, kPartsMode);
    const double scale = std::max(1.0, Eigen::Map<const Vector>(ab.data().data(),
                                                                static_cast<Eigen::Index>(ab.data().size()))
                                           .cwiseAbs()
                                           .maxCoeff());
    for (std::size_t i = 0; i < ab.data().size(); ++i) {
      worst_comm = std::max(worst_comm, std::abs(ab.data()[i] - ba.data()[i]) / scale);
    }
    for (const auto& [u, mode] : {std::pair{u1, kPartsMode}, std::pair{u2, kFeaturesMode}}) {
      const Tensor3 prod = mode_product(t, u, mode);
      const Matrix lhs = unfold(prod, mode);
      const Matrix rhs = u.transpose() * unfold(t, mode);
      Dims3 naive_dims{};
      const std::vector<double> naive = oracle::naive_mode_product(t, u, mode.value(), &naive_dims);
      out.require(naive_dims == prod.dims(), "mode product shape differs from naive loop");
      double w = (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
      for (std::size_t i = 0; i < naive.size(); ++i) {
        w = std::max(w, std::abs(prod.data()[i] - naive[i]) / std::max(1.0, std::abs(naive[i])));
      }
      worst_unfold = std::max(worst_unfold, w);
    }
  }
  out.require(worst_comm <= 1e-12, "mode-1/mode-2 commutation " + fmt("%.3g", worst_comm));
  out.require(worst_unfold <= 1e-12, "unfold-product compatibility " + fmt("%.3g", worst_unfold));
  if (out.pass) {
    out.detail = std::to_string(shapes) + " shapes, commutation " + fmt("%.2g", worst_comm) +
                 ", unfold " + fmt("%.2g", worst_unfold);
  }
  return out;
}

Outcome determinism() {
  Outcome out;
  const ProtocolConfig pc = separability_protocol();
  const auto once = [&] {
    const DescriptorViews data = synth_views(SynthConfig{});
    const PairedViews& pv = data.at("synth");
    const FoldPlan plan = make_folds(pv.person_ids(), pc.n_folds, pc.train_fraction, pc.seed);
    const Tensor3 ta = tensorize(pv.view_a, pc.part_width);
    const Tensor3 tb = tensorize(pv.view_b, pc.part_width);
    const std::vector<std::uint8_t> model =
        serialize_model(txqda_train(ta, tb, pv.view_a.person_ids, pc.txqda));
    const std::string report = run_protocol(data, pc).to_json().dump();
    return std::tuple{plan, model, report};
  };
  const auto [plan1, model1, report1] = once();
  const auto [plan2, model2, report2] = once();
  out.require(plan1 == plan2, "fold plans differ");
  out.require(model1 == model2, "model bytes differ");
  out.require(report1 == report2, "reports differ");
  if (out.pass) {
    out.detail = "fold plan, " + std::to_string(model1.size()) + "-byte model and " +
                 std::to_string(report1.size()) + "-byte report identical";
  }
  return out;
}

Outcome table_fixture() {
  Outcome out;
  const std::string row = format_table_row(200, std::vector<double>{0.7040, 0.9364, 0.9644, 0.9876});
  out.require(row == "200 | 70.40 | 93.64 | 96.44 | 98.76", "got \"" + row + "\"");
  const std::string pair = format_table_row(200, std::vector<double>{0.5316, 0.9582});
  out.require(pair == "200 | 53.16 | 95.82", "got \"" + pair + "\"");

  // the same row through format_table, from a report's mean curve
  ExperimentReport r;
  r.config = separability_protocol().to_json();
  r.config["txqda"]["d_out"] = 200;
  r.mean.values.assign(20, 1.0);
  r.mean.values[0] = 0.7040;
  r.mean.values[4] = 0.9364;
  r.mean.values[9] = 0.9644;
  r.mean.values[19] = 0.9876;
  std::fill(r.mean.values.begin() + 10, r.mean.values.begin() + 19, 0.9644);
  const std::size_t ranks[] = {1, 5, 10, 20};
  const ExperimentReport reports[] = {r};
  const FormattedTable table = format_table(reports, ranks);
  out.require(table.text.find("\n200 | 70.40 | 93.64 | 96.44 | 98.76\n") != std::string::npos,
              "format_table text lacks the row");
  if (out.pass) out.detail = "\"" + row + "\", \"" + pair + "\"";
  return out;
}

Outcome normalization_ranking() {
  Outcome out;
  std::mt19937_64 gen(19);
  std::uniform_int_distribution<int> len(1, 200);
  std::uniform_real_distribution<double> value(-5.0, 50.0);
  std::bernoulli_distribution coarse(0.3);
  int with_ties = 0;
  for (int v = 0; v < 1000; ++v) {
    std::vector<double> d(static_cast<std::size_t>(len(gen)));
    const bool tie_heavy = coarse(gen);
    for (double& x : d) x = tie_heavy ? std::round(value(gen) / 10.0) : value(gen);
    // documented rule: ascending distance, ties by gallery index
    std::vector<std::size_t> want(d.size());
    std::iota(want.begin(), want.end(), std::size_t{0});
    std::stable_sort(want.begin(), want.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    const std::vector<double> s = normalize_scores(d);
    const std::vector<std::size_t> got = order_by_similarity(s);
    const RankedList ranked = rank_distances(d);
    out.require(got == want, "order changed by normalization in vector " + std::to_string(v));
    out.require(ranked.order == want, "rank_distances order differs in vector " + std::to_string(v));
    with_ties += tie_heavy ? 1 : 0;
  }
  if (out.pass) out.detail = "1000 vectors (" + std::to_string(with_ties) + " tie-heavy)";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"gen-eig matches brute force (N=20, d=8)", gen_eig_oracle},
      {"closed-form extra-class moments match all-pairs loop", closed_form_moments},
      {"single-part TXQDA reproduces XQDA distances (N=50, d=20)", txqda_degeneracy},
      {"synthetic separability (n=100, D=60, w=15, p=4, d=10)", separability},
      {"CMC properties and summary equality", cmc_properties},
      {"tensor algebra identities over random shapes", tensor_algebra},
      {"determinism of fold plans, models and reports", determinism},
      {"table row formatting fixtures", table_fixture},
      {"score normalization preserves ranking", normalization_ranking},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
