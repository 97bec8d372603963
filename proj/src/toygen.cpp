#include "fdasynth/toygen.hpp"

#include <cmath>
#include <cstdio>

#include "fdasynth/rng.hpp"

namespace fdasynth {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct ClusterTemplate {
  double start_e, start_n;   // path start
  double dir_e, dir_n;       // unit direction
  double length;             // path length in normalized units
  double bend;               // perpendicular sine bend amplitude
  double pace;               // time curvature a in (0,1)
};

ClusterTemplate make_template(uint64_t seed, int cluster, int n_clusters) {
  Rng rng = Rng::substream(seed, 0x7E3000 + static_cast<uint64_t>(cluster));
  double theta = 2.0 * kPi * cluster / n_clusters + 0.25 * (rng.uniform01() - 0.5);
  ClusterTemplate t;
  const double ring = 0.25;
  t.start_e = 0.5 + ring * std::cos(theta);
  t.start_n = 0.5 + ring * std::sin(theta);
  double swirl = 0.6 * (rng.uniform01() - 0.5);  // heading toward the center, twisted
  double head = theta + kPi + swirl;
  t.dir_e = std::cos(head);
  t.dir_n = std::sin(head);
  t.length = 0.35 + 0.15 * rng.uniform01();
  t.bend = 0.06 * (2.0 * rng.uniform01() - 1.0);
  t.pace = 0.25 + 0.30 * rng.uniform01();
  return t;
}
}  // namespace

void ToyDataSpec::validate() const {
  if (n_clusters < 1 || curves_per_cluster < 1)
    throw validation_error("toy spec: cluster counts must be positive");
  if (noise_scale < 0.0) throw validation_error("toy spec: noise_scale must be >= 0");
  if (grid_m < 5) throw validation_error("toy spec: grid size must be >= 5");
}

CurveDataset generate_toy(const ToyDataSpec& spec) {
  spec.validate();
  CurveDataset ds;
  ds.grid = Grid::uniform(spec.grid_m);

  // plausible metric box: 10 km x 10 km, one hour
  ds.normalization.min_c1 = 515000.0;
  ds.normalization.max_c1 = 525000.0;
  ds.normalization.min_c2 = 5030000.0;
  ds.normalization.max_c2 = 5040000.0;
  ds.normalization.min_t = 0.0;
  ds.normalization.max_t = 3600.0;
  ds.normalization.spatial_max0 = true;
  ds.metadata["source"] = "toygen";
  ds.metadata["seed"] = std::to_string(spec.seed);

  const Grid& g = ds.grid;
  int global = 0;
  for (int c = 0; c < spec.n_clusters; ++c) {
    ClusterTemplate tmpl = make_template(spec.seed, c, spec.n_clusters);
    double perp_e = -tmpl.dir_n, perp_n = tmpl.dir_e;

    for (int i = 0; i < spec.curves_per_cluster; ++i, ++global) {
      Rng rng = Rng::substream(spec.seed, 0x100000 + static_cast<uint64_t>(global));
      double eps_e[3], eps_n[3];
      for (int h = 0; h < 3; ++h) eps_e[h] = rng.normal();
      for (int h = 0; h < 3; ++h) eps_n[h] = rng.normal();
      double len = tmpl.length * (1.0 + 0.4 * spec.noise_scale * rng.normal());
      double pace = tmpl.pace + 0.5 * spec.noise_scale * rng.normal();
      pace = std::min(0.65, std::max(0.15, pace));

      Curve curve;
      char id[64];
      std::snprintf(id, sizeof(id), "toy-c%02d-%04d", c + 1, i);
      curve.id = id;
      curve.source_id = id;
      curve.values = Mat(g.m, 3);
      for (int j = 0; j < g.m; ++j) {
        double x = g.x[j];
        double bend = tmpl.bend * std::sin(kPi * x);
        double ne = 0.0, nn = 0.0;
        for (int h = 0; h < 3; ++h) {
          double s = std::sin(kPi * (h + 1) * x);
          ne += spec.noise_scale * eps_e[h] * s / (h + 1);
          nn += spec.noise_scale * eps_n[h] * s / (h + 1);
        }
        curve.values(j, 0) = tmpl.start_e + tmpl.dir_e * len * x + perp_e * bend + ne;
        curve.values(j, 1) = tmpl.start_n + tmpl.dir_n * len * x + perp_n * bend + nn;
        curve.values(j, 2) = (1.0 - pace) * x + pace * x * x;
      }
      ds.curves.push_back(std::move(curve));
    }
  }
  return ds;
}

std::vector<int> toy_labels(const CurveDataset& dataset) {
  std::vector<int> labels;
  labels.reserve(dataset.curves.size());
  for (const auto& c : dataset.curves) {
    if (c.id.size() < 8 || c.id.compare(0, 5, "toy-c") != 0)
      throw validation_error("not a toy curve id: " + c.id);
    labels.push_back(std::stoi(c.id.substr(5, 2)));
  }
  return labels;
}

void write_toy_signals_csv(const CurveDataset& dataset, int points_per_trajectory,
                           std::ostream& out) {
  if (points_per_trajectory < 2)
    throw validation_error("toy csv needs at least 2 points per trajectory");
  const Grid& g = dataset.grid;
  const NormalizationParams& norm = dataset.normalization;

  // planar meters mapped to lat/lon on a local tangent plane near Milan
  const double lat0 = 45.5, lon0 = 9.2;
  const double center_e = 0.5 * (norm.min_c1 + norm.max_c1);
  const double center_n = 0.5 * (norm.min_c2 + norm.max_c2);
  const double r_earth = 6371000.0;
  const double deg = 180.0 / kPi;

  out << "user_id,trajectory_id,timestamp,lat,lon,accuracy\n";
  out.precision(12);
  int64_t t0 = 1575200000;
  for (size_t i = 0; i < dataset.curves.size(); ++i) {
    const Curve& curve = dataset.curves[i];
    int64_t start = t0 + static_cast<int64_t>(i) * 7200;
    int64_t prev_ts = -1;
    for (int s = 0; s < points_per_trajectory; ++s) {
      double u = static_cast<double>(s) / (points_per_trajectory - 1);
      double e = norm.denormalize_axis(0, interp_column(curve.values, g, 0, u)) - center_e;
      double n = norm.denormalize_axis(1, interp_column(curve.values, g, 1, u)) - center_n;
      double te = norm.denormalize_axis(2, interp_column(curve.values, g, 2, u));
      double lat = lat0 + (n / r_earth) * deg;
      double lon = lon0 + (e / (r_earth * std::cos(lat0 / deg))) * deg;
      int64_t ts = start + static_cast<int64_t>(std::llround(te));
      if (ts <= prev_ts) ts = prev_ts + 1;  // keep integer timestamps strict
      prev_ts = ts;
      out << "toy-u" << curve.id.substr(4) << ',' << curve.id << ',' << ts << ',' << lat << ','
          << lon << ",10\n";
    }
  }
}

}  // namespace fdasynth
