#include "doctest.h"

#include <cmath>

#include "fdasynth/synthesis.hpp"
#include "helpers.hpp"

using namespace fdasynth;
using namespace fdatest;

namespace {
CurveDataset small_dataset(uint64_t seed, int n, int m = 51) {
  Grid g = Grid::uniform(m);
  Rng rng(seed);
  CurveDataset ds;
  ds.grid = g;
  for (int i = 0; i < n; ++i) {
    Curve c = trajectory_like_curve(rng, g);
    c.id = "c" + std::to_string(i);
    c.source_id = c.id;
    ds.curves.push_back(c);
  }
  return ds;
}
}  // namespace

TEST_CASE("nearest_neighbors sorts ascending, excludes self, breaks ties by index") {
  DistanceMatrix m;
  m.n = 4;
  m.delta = 1.0;
  m.amplitude.assign(16, 0.0);
  m.phase.assign(16, 0.0);
  // row 0 of combined: [0, 3, 1, 2]
  m.combined = {0, 3, 1, 2,
                3, 0, 5, 5,
                1, 5, 0, 5,
                2, 5, 5, 0};
  auto [ids, dists] = nearest_neighbors(m, 0, 2);
  CHECK(ids == std::vector<int>{2, 3});
  CHECK(dists == std::vector<double>{1, 2});

  // all off-diagonal equal: ascending id order
  for (auto& v : m.combined) v = 1.0;
  for (int i = 0; i < 4; ++i) m.combined[i * 4 + i] = 0.0;
  auto [tie_ids, tie_dists] = nearest_neighbors(m, 1, 3);
  CHECK(tie_ids == std::vector<int>{0, 2, 3});

  CHECK_THROWS_AS(nearest_neighbors(m, 0, 4), Error);

  auto [all_ids, all_dists] = nearest_neighbors(m, 2, 3);
  CHECK(all_ids.size() == 3);
}

TEST_CASE("synthesis of identical neighbor sets reproduces the curve") {
  Grid g = Grid::uniform(51);
  Rng rng(31);
  Curve base = trajectory_like_curve(rng, g);
  CurveDataset ds;
  ds.grid = g;
  for (int i = 0; i < 4; ++i) {
    Curve c = base;
    c.id = "c" + std::to_string(i);
    ds.curves.push_back(c);
  }
  DistanceMatrix m = distance_matrix(ds, 1.0);
  SynthesisConfig config;
  config.k = 3;
  config.alpha0 = 5.0;
  config.seed = 99;
  auto [synth, report] = synthesize_all(ds, m, config);
  REQUIRE(synth.curves.size() == 4);
  for (const auto& c : synth.curves)
    CHECK(max_abs_diff(c.values, base.values) <= 5e-2);  // roundtrip tolerance
}

TEST_CASE("synthetic ids carry the -s suffix and synthetic source") {
  CurveDataset ds = small_dataset(32, 5);
  DistanceMatrix m = distance_matrix(ds, 1.0);
  SynthesisConfig config;
  config.k = 2;
  auto [synth, report] = synthesize_all(ds, m, config);
  REQUIRE(synth.curves.size() == ds.curves.size());
  for (size_t i = 0; i < synth.curves.size(); ++i) {
    CHECK(synth.curves[i].id == ds.curves[i].id + "-s");
    CHECK(synth.curves[i].source_id == "synthetic");
  }
}

TEST_CASE("synthetic elapsed time is non-decreasing") {
  CurveDataset ds = small_dataset(33, 8);
  DistanceMatrix m = distance_matrix(ds, 0.8);
  SynthesisConfig config;
  config.k = 3;
  config.delta = 0.8;
  auto [synth, report] = synthesize_all(ds, m, config);
  for (const auto& c : synth.curves)
    for (int j = 1; j < ds.grid.m; ++j)
      CHECK(c.values(j, 2) >= c.values(j - 1, 2));
}

TEST_CASE("fixed seed gives bit-identical output for any worker count") {
  CurveDataset ds = small_dataset(34, 8);
  DistanceMatrix m = distance_matrix(ds, 1.0);
  SynthesisConfig config;
  config.k = 3;
  config.seed = 4242;
  auto [a, ra] = synthesize_all(ds, m, config, 1);
  auto [b, rb] = synthesize_all(ds, m, config, 4);
  auto [c, rc] = synthesize_all(ds, m, config, 1);
  REQUIRE(a.curves.size() == b.curves.size());
  for (size_t i = 0; i < a.curves.size(); ++i) {
    CHECK(a.curves[i].values == b.curves[i].values);
    CHECK(a.curves[i].values == c.curves[i].values);
  }
}

TEST_CASE("different seeds give different synthetic data") {
  CurveDataset ds = small_dataset(35, 8);
  DistanceMatrix m = distance_matrix(ds, 1.0);
  SynthesisConfig config;
  config.k = 3;
  config.seed = 1;
  auto [a, ra] = synthesize_all(ds, m, config);
  config.seed = 2;
  auto [b, rb] = synthesize_all(ds, m, config);
  bool any_diff = false;
  for (size_t i = 0; i < a.curves.size(); ++i)
    any_diff |= !(a.curves[i].values == b.curves[i].values);
  CHECK(any_diff);
}

TEST_CASE("report invariants: simplex weights, alpha sums, ascending distances") {
  CurveDataset ds = small_dataset(36, 10);
  DistanceMatrix m = distance_matrix(ds, 1.0);
  SynthesisConfig config;
  config.k = 4;
  config.alpha0 = 7.0;
  auto [synth, report] = synthesize_all(ds, m, config);
  REQUIRE(report.neighbors.size() == ds.curves.size());
  for (const auto& nw : report.neighbors) {
    double wsum = 0.0, asum = 0.0;
    for (double w : nw.weights) {
      CHECK(w >= 0.0);
      wsum += w;
    }
    for (double a : nw.alphas) asum += a;
    CHECK(std::abs(wsum - 1.0) <= 1e-12);
    CHECK(std::abs(asum - config.alpha0) <= 1e-9);
    for (size_t t = 1; t < nw.distances.size(); ++t)
      CHECK(nw.distances[t] >= nw.distances[t - 1]);
    for (const auto& id : nw.neighbor_ids) CHECK(id != nw.reference_id);
  }
}

TEST_CASE("config validation rejects bad parameters") {
  CurveDataset ds = small_dataset(37, 4);
  DistanceMatrix m = distance_matrix(ds, 1.0);
  SynthesisConfig config;
  config.k = 4;  // k must be < n
  CHECK_THROWS_AS(synthesize_all(ds, m, config), Error);
  config.k = 2;
  config.alpha0 = 0.5;  // alpha0 >= 1
  CHECK_THROWS_AS(synthesize_all(ds, m, config), Error);
  config.alpha0 = 2.0;
  config.kernel = WeightKernel::exp_scaled;
  config.beta0 = 0.0;  // beta0 > 0 for exp-scaled
  CHECK_THROWS_AS(synthesize_all(ds, m, config), Error);
}
