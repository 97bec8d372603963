#include "fdasynth/functional.hpp"

#include <algorithm>

#include "fdasynth/spline.hpp"

namespace fdasynth {

std::vector<double> smooth_spatial(std::span<const double> xs, std::span<const double> ys,
                                   const Grid& g) {
  NaturalCubicSpline spline(xs, ys);
  std::vector<double> out(g.m);
  for (int j = 0; j < g.m; ++j) out[j] = spline.eval(g.x[j]);
  return out;
}

std::vector<double> smooth_temporal(std::span<const double> xs, std::span<const double> ts,
                                    const Grid& g) {
  MonotoneCubicSpline spline(xs, ts);
  std::vector<double> out(g.m);
  for (int j = 0; j < g.m; ++j) out[j] = spline.eval(g.x[j]);
  return out;
}

CurveDataset build_dataset(std::span<const NormalizedTrajectory> trajs, const Grid& g,
                           const NormalizationParams& norm) {
  CurveDataset ds;
  ds.grid = g;
  ds.normalization = norm;
  ds.curves.reserve(trajs.size());

  for (const auto& t : trajs) {
    const size_t n = t.points.size();
    if (n < 2)
      throw validation_error("trajectory " + t.trajectory_id + " has fewer than 2 points");
    std::vector<double> xs(n), c1(n), c2(n), te(n);
    for (size_t j = 0; j < n; ++j) {
      xs[j] = static_cast<double>(j) / (n - 1);  // record-order parameterization
      c1[j] = t.points[j][0];
      c2[j] = t.points[j][1];
      te[j] = t.points[j][2];
    }
    xs[n - 1] = 1.0;

    Curve curve;
    curve.id = t.trajectory_id;
    curve.source_id = t.trajectory_id;
    curve.values = Mat(g.m, 3);
    try {
      std::vector<double> f1 = smooth_spatial(xs, c1, g);
      std::vector<double> f2 = smooth_spatial(xs, c2, g);
      std::vector<double> f3 = smooth_temporal(xs, te, g);
      // enforce the non-decreasing time invariant against spline roundoff
      for (int j = 1; j < g.m; ++j) f3[j] = std::max(f3[j], f3[j - 1]);
      for (int j = 0; j < g.m; ++j) {
        curve.values(j, 0) = f1[j];
        curve.values(j, 1) = f2[j];
        curve.values(j, 2) = f3[j];
      }
    } catch (const Error& e) {
      throw Error(e.kind(),
                  "trajectory " + t.trajectory_id + ": " + e.what());
    }
    ds.curves.push_back(std::move(curve));
  }
  return ds;
}

}  // namespace fdasynth
