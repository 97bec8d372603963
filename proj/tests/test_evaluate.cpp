#include "doctest.h"

#include <cmath>

#include "fdasynth/evaluate.hpp"
#include "fdasynth/toygen.hpp"
#include "helpers.hpp"

using namespace fdasynth;
using namespace fdatest;

namespace {
CurveDataset toy(uint64_t seed, int clusters = 2, int per = 6, int m = 41) {
  ToyDataSpec spec;
  spec.n_clusters = clusters;
  spec.curves_per_cluster = per;
  spec.noise_scale = 0.05;
  spec.seed = seed;
  spec.grid_m = m;
  return generate_toy(spec);
}
}  // namespace

TEST_CASE("mean test on identical datasets: tiny statistic, large p") {
  CurveDataset ds = toy(41);
  PermutationTestResult r = mean_permutation_test(ds, ds, 49, 1.0, 9, 2);
  CHECK(r.statistic_observed <= 1e-6);
  CHECK(r.p_value > 0.5);
  CHECK(r.statistic_null.size() == 49);
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value <= 1.0);
}

TEST_CASE("mean test is seeded and reproducible across worker counts") {
  CurveDataset ds = toy(43, 2, 4);
  CurveDataset other = toy(44, 2, 4);
  PermutationTestResult a = mean_permutation_test(ds, other, 19, 1.0, 5, 1);
  PermutationTestResult b = mean_permutation_test(ds, other, 19, 1.0, 5, 4);
  CHECK(a.statistic_observed == b.statistic_observed);
  CHECK(a.statistic_null == b.statistic_null);
  CHECK(a.p_value == b.p_value);
}

TEST_CASE("permutation count must be positive") {
  CurveDataset ds = toy(45, 1, 3);
  CHECK_THROWS_AS(mean_permutation_test(ds, ds, 0, 1.0, 1), Error);
  CHECK_THROWS_AS(covariance_permutation_test(ds, ds, 0, "hilbert-schmidt", 1), Error);
}

TEST_CASE("covariance test on identical datasets: near-zero statistic") {
  CurveDataset ds = toy(46, 2, 5);
  PermutationTestResult r = covariance_permutation_test(ds, ds, 29, "hilbert-schmidt", 3, 2);
  CHECK(r.statistic_observed <= 1e-9);
  CHECK(r.p_value > 0.5);
}

TEST_CASE("only the hilbert-schmidt metric is accepted") {
  CurveDataset ds = toy(47, 1, 4);
  CHECK_THROWS_AS(covariance_permutation_test(ds, ds, 5, "trace", 1), Error);
}

TEST_CASE("covariance operator is symmetric and positive semidefinite") {
  CurveDataset ds = toy(48, 2, 6, 21);
  std::vector<const Mat*> curves;
  for (const auto& c : ds.curves) curves.push_back(&c.values);
  CovarianceOperator op = covariance_operator(curves, ds.grid);
  const int dim = op.dim;
  for (int r = 0; r < dim; ++r)
    for (int c = r + 1; c < dim; ++c)
      CHECK(op.at(r, c) == doctest::Approx(op.at(c, r)).epsilon(1e-12));

  // PSD oracle: power iteration on (s_max I - C) finds the smallest eigenvalue
  double smax = 0.0;
  for (int r = 0; r < dim; ++r) {
    double row = 0.0;
    for (int c = 0; c < dim; ++c) row += std::abs(op.at(r, c));
    smax = std::max(smax, row);
  }
  std::vector<double> v(dim, 1.0 / std::sqrt(dim)), w(dim);
  double lam_shift = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    for (int r = 0; r < dim; ++r) {
      double s = smax * v[r];
      for (int c = 0; c < dim; ++c) s -= op.at(r, c) * v[c];
      w[r] = s;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (int r = 0; r < dim; ++r) v[r] = w[r] / norm;
    lam_shift = norm;
  }
  double min_eig = smax - lam_shift;
  CHECK(min_eig >= -1e-9);
}

TEST_CASE("privacy audit flags exact duplication and passes on distinct data") {
  CurveDataset ds = toy(49, 2, 5);
  PrivacyAudit dup = privacy_audit(ds, ds, nullptr, 1.0, 2);
  CHECK(dup.median_synth_orig <= 1e-9);
  CHECK(dup.ratio == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(!dup.pass);

  // a genuinely different dataset keeps healthy distances
  CurveDataset other = toy(50, 2, 5);
  PrivacyAudit ok = privacy_audit(ds, other, nullptr, 1.0, 2);
  CHECK(ok.nn_orig_orig.size() == ds.curves.size());
  CHECK(ok.nn_synth_orig.size() == other.curves.size());
  for (double d : ok.nn_orig_orig) CHECK(d >= 0.0);
  for (double d : ok.nn_synth_orig) CHECK(d >= 0.0);
}

TEST_CASE("privacy audit accepts a precomputed original matrix") {
  CurveDataset ds = toy(51, 2, 4);
  DistanceMatrix m = distance_matrix(ds, 1.0, 2);
  PrivacyAudit with_matrix = privacy_audit(ds, ds, &m, 1.0, 2);
  PrivacyAudit recomputed = privacy_audit(ds, ds, nullptr, 1.0, 2);
  REQUIRE(with_matrix.nn_orig_orig.size() == recomputed.nn_orig_orig.size());
  for (size_t i = 0; i < with_matrix.nn_orig_orig.size(); ++i)
    CHECK(with_matrix.nn_orig_orig[i] ==
          doctest::Approx(recomputed.nn_orig_orig[i]).epsilon(1e-12));
}

TEST_CASE("privacy audit rejects singleton originals") {
  CurveDataset ds = toy(52, 1, 1);
  CHECK_THROWS_AS(privacy_audit(ds, ds, nullptr, 1.0), Error);
}

TEST_CASE("hex heatmap conserves the point count") {
  CurveDataset ds = toy(53, 2, 6);
  HexHeatmap map = hex_heatmap(ds, ds.normalization, std::sqrt(3.0) / 3.0, 25);
  int64_t sum = 0;
  for (const auto& [cell, count] : map.counts) sum += count;
  CHECK(sum == map.total);
  CHECK(map.total == static_cast<int64_t>(ds.curves.size()) * 25);
}

TEST_CASE("tight point cloud lands in a single hex cell") {
  Grid g = Grid::uniform(41);
  CurveDataset ds;
  ds.grid = g;
  ds.normalization.min_c1 = 0.0;
  ds.normalization.max_c1 = 10.0;  // 10 m box, far below the cell size
  ds.normalization.min_c2 = 0.0;
  ds.normalization.max_c2 = 10.0;
  ds.normalization.min_t = 0.0;
  ds.normalization.max_t = 60.0;
  Curve c;
  c.id = "tight";
  c.values = Mat(g.m, 3);
  for (int j = 0; j < g.m; ++j) {
    c.values(j, 0) = 0.5 + 0.01 * g.x[j];
    c.values(j, 1) = 0.5;
    c.values(j, 2) = g.x[j];
  }
  ds.curves.push_back(c);
  HexHeatmap map = hex_heatmap(ds, ds.normalization, 0.5, 10);
  CHECK(map.counts.size() == 1);
  CHECK(map.counts.begin()->second == 10);
}

TEST_CASE("identical datasets give identical heatmaps") {
  CurveDataset ds = toy(54, 2, 5);
  HexHeatmap a = hex_heatmap(ds, ds.normalization, 0.5774, 25);
  HexHeatmap b = hex_heatmap(ds, ds.normalization, 0.5774, 25);
  CHECK(a.counts == b.counts);
  CHECK(a.total == b.total);
}

TEST_CASE("feature stats: straight unit-box diagonal has the expected length") {
  Grid g = Grid::uniform(51);
  CurveDataset ds;
  ds.grid = g;
  ds.normalization.min_c1 = 0.0;
  ds.normalization.max_c1 = 1000.0;  // 1 km box
  ds.normalization.min_c2 = 0.0;
  ds.normalization.max_c2 = 1000.0;
  ds.normalization.min_t = 0.0;
  ds.normalization.max_t = 600.0;
  Curve c;
  c.id = "line";
  c.values = Mat(g.m, 3);
  for (int j = 0; j < g.m; ++j) {
    c.values(j, 0) = g.x[j];  // 1 km straight line along c1
    c.values(j, 1) = 0.0;
    c.values(j, 2) = g.x[j];
  }
  ds.curves.push_back(c);
  FeatureStats stats = feature_stats(ds, ds.normalization);
  REQUIRE(stats.rows.size() == 2);
  CHECK(stats.rows[0].feature == "distance_km");
  CHECK(stats.rows[0].mean == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(stats.rows[1].feature == "duration_s");
  CHECK(stats.rows[1].mean == doctest::Approx(600.0).epsilon(1e-9));
}

TEST_CASE("feature stats of an empty dataset is an empty table") {
  CurveDataset ds;
  ds.grid = Grid::uniform(11);
  FeatureStats stats = feature_stats(ds, ds.normalization);
  CHECK(stats.curve_count == 0);
  CHECK(stats.rows.empty());
}
