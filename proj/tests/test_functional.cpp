#include "doctest.h"

#include <cmath>

#include "fdasynth/functional.hpp"

using namespace fdasynth;

namespace {
NormalizedTrajectory linear_traj(const std::string& id, int n) {
  NormalizedTrajectory t;
  t.trajectory_id = id;
  t.user_id = "u-" + id;
  for (int j = 0; j < n; ++j) {
    double x = j / static_cast<double>(n - 1);
    t.points.push_back({x, 1.0 - x, x});
  }
  return t;
}
}  // namespace

TEST_CASE("smooth_spatial samples the spline on the grid") {
  Grid g = Grid::uniform(101);
  std::vector<double> xs = {0.0, 0.5, 1.0}, ys = {0.0, 1.0, 2.0};
  auto out = smooth_spatial(xs, ys, g);
  REQUIRE(out.size() == 101);
  for (int j = 0; j < g.m; ++j) CHECK(out[j] == doctest::Approx(2.0 * g.x[j]).epsilon(1e-12));
}

TEST_CASE("smooth_temporal output is non-decreasing") {
  Grid g = Grid::uniform(101);
  std::vector<double> xs = {0.0, 0.3, 0.6, 1.0}, ts = {0.0, 0.0, 0.7, 1.0};
  auto out = smooth_temporal(xs, ts, g);
  for (size_t j = 1; j < out.size(); ++j) CHECK(out[j] - out[j - 1] >= -1e-12);
}

TEST_CASE("build_dataset turns linear trajectories into linear curves") {
  Grid g = Grid::uniform(101);
  std::vector<NormalizedTrajectory> trajs = {linear_traj("a", 6)};
  CurveDataset ds = build_dataset(trajs, g, NormalizationParams{});
  REQUIRE(ds.curves.size() == 1);
  for (int j = 0; j < g.m; ++j) {
    CHECK(ds.curves[0].values(j, 0) == doctest::Approx(g.x[j]).epsilon(1e-10));
    CHECK(ds.curves[0].values(j, 1) == doctest::Approx(1.0 - g.x[j]).epsilon(1e-10));
    CHECK(ds.curves[0].values(j, 2) == doctest::Approx(g.x[j]).epsilon(1e-10));
  }
}

TEST_CASE("build_dataset preserves cardinality and ids") {
  Grid g = Grid::uniform(51);
  std::vector<NormalizedTrajectory> trajs;
  for (int i = 0; i < 7; ++i) trajs.push_back(linear_traj("t" + std::to_string(i), 4 + i));
  CurveDataset ds = build_dataset(trajs, g, NormalizationParams{});
  REQUIRE(ds.curves.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(ds.curves[i].id == "t" + std::to_string(i));
}

TEST_CASE("third component of every built curve is non-decreasing") {
  Grid g = Grid::uniform(101);
  std::vector<NormalizedTrajectory> trajs;
  NormalizedTrajectory t;
  t.trajectory_id = "bumpy";
  t.user_id = "u";
  // uneven temporal pacing
  t.points = {{0.0, 0.0, 0.0}, {0.2, 0.5, 0.01}, {0.5, 0.6, 0.02},
              {0.7, 0.9, 0.9}, {1.0, 1.0, 1.0}};
  trajs.push_back(t);
  CurveDataset ds = build_dataset(trajs, g, NormalizationParams{});
  for (int j = 1; j < g.m; ++j)
    CHECK(ds.curves[0].values(j, 2) >= ds.curves[0].values(j - 1, 2));
}

TEST_CASE("spline evaluation is bit-deterministic") {
  Grid g = Grid::uniform(101);
  std::vector<NormalizedTrajectory> trajs = {linear_traj("a", 9)};
  CurveDataset a = build_dataset(trajs, g, NormalizationParams{});
  CurveDataset b = build_dataset(trajs, g, NormalizationParams{});
  CHECK(a.curves[0].values == b.curves[0].values);
}

TEST_CASE("errors carry the trajectory id") {
  Grid g = Grid::uniform(51);
  NormalizedTrajectory bad;
  bad.trajectory_id = "broken";
  bad.user_id = "u";
  bad.points = {{0.0, 0.0, 0.5}, {0.5, 0.5, 0.2}, {1.0, 1.0, 1.0}};  // time decreases
  try {
    build_dataset(std::vector<NormalizedTrajectory>{bad}, g, NormalizationParams{});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
}

TEST_CASE("single-point trajectories are rejected") {
  Grid g = Grid::uniform(51);
  NormalizedTrajectory bad;
  bad.trajectory_id = "short";
  bad.points = {{0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(build_dataset(std::vector<NormalizedTrajectory>{bad}, g, NormalizationParams{}),
                  Error);
}
