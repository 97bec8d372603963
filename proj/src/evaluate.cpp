#include "fdasynth/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fdasynth/align.hpp"
#include "fdasynth/karcher.hpp"
#include "fdasynth/parallel.hpp"
#include "fdasynth/rng.hpp"

namespace fdasynth {

namespace {
void check_same_grid(const CurveDataset& a, const CurveDataset& b) {
  if (!(a.grid == b.grid))
    throw validation_error("datasets must share one grid");
  if (a.curves.empty() || b.curves.empty())
    throw validation_error("datasets must be nonempty");
}

double combined_distance(const Srvf& a, const Srvf& b, const Grid& g, double delta) {
  PairDistance d = pair_distance(a, b, g);
  return delta * d.amplitude + (1.0 - delta) * d.phase;
}

// distance between the Karcher means of two groups of SRVFs
double mean_statistic(const std::vector<const Srvf*>& group_a,
                      const std::vector<const Srvf*>& group_b, const Grid& g, double delta) {
  auto collect = [](const std::vector<const Srvf*>& group) {
    std::vector<Srvf> v;
    v.reserve(group.size());
    for (const Srvf* q : group) v.push_back(*q);
    return v;
  };
  KarcherResult ma = unweighted_mean(collect(group_a), g);
  KarcherResult mb = unweighted_mean(collect(group_b), g);
  return combined_distance(ma.mean_srvf, mb.mean_srvf, g, delta);
}

double add_one_p_value(double observed, const std::vector<double>& null_stats) {
  int count = 0;
  for (double s : null_stats)
    if (s >= observed) ++count;
  return static_cast<double>(count + 1) / (null_stats.size() + 1);
}
}  // namespace

PermutationTestResult mean_permutation_test(const CurveDataset& orig, const CurveDataset& synth,
                                            int n_perm, double delta, uint64_t seed, int jobs) {
  check_same_grid(orig, synth);
  if (n_perm < 1) throw validation_error("permutation count must be >= 1");
  const Grid& g = orig.grid;

  std::vector<Srvf> pooled;
  pooled.reserve(orig.curves.size() + synth.curves.size());
  for (const auto& c : orig.curves) pooled.push_back(to_srvf(c, g));
  for (const auto& c : synth.curves) pooled.push_back(to_srvf(c, g));
  const size_t na = orig.curves.size();
  const size_t total = pooled.size();

  PermutationTestResult res;
  res.permutations = n_perm;
  res.seed = seed;

  {
    std::vector<const Srvf*> ga, gb;
    for (size_t i = 0; i < na; ++i) ga.push_back(&pooled[i]);
    for (size_t i = na; i < total; ++i) gb.push_back(&pooled[i]);
    res.statistic_observed = mean_statistic(ga, gb, g, delta);
  }

  res.statistic_null.assign(n_perm, 0.0);
  parallel_for(n_perm, jobs, [&](int t) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(t) + 1);
    std::vector<size_t> perm(total);
    std::iota(perm.begin(), perm.end(), size_t{0});
    rng.shuffle(perm);
    std::vector<const Srvf*> ga, gb;
    for (size_t i = 0; i < na; ++i) ga.push_back(&pooled[perm[i]]);
    for (size_t i = na; i < total; ++i) gb.push_back(&pooled[perm[i]]);
    res.statistic_null[t] = mean_statistic(ga, gb, g, delta);
  });

  res.p_value = add_one_p_value(res.statistic_observed, res.statistic_null);
  return res;
}

CovarianceOperator covariance_operator(const std::vector<const Mat*>& curves, const Grid& g) {
  if (curves.empty()) throw validation_error("covariance of empty set");
  const int m = g.m;
  const int p = curves[0]->cols;
  const int dim = m * p;
  const size_t n = curves.size();

  // sample mean, then centered curves scaled by sqrt of the grid weight
  std::vector<double> mean(dim, 0.0);
  for (const Mat* c : curves)
    for (int r = 0; r < dim; ++r) mean[r] += c->a[r];
  for (double& v : mean) v /= static_cast<double>(n);

  std::vector<double> sw(m);
  for (int j = 0; j < m; ++j) sw[j] = std::sqrt(g.w(j));

  std::vector<std::vector<double>> centered(n, std::vector<double>(dim));
  for (size_t i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int d = 0; d < p; ++d) {
        int r = j * p + d;
        centered[i][r] = (curves[i]->a[r] - mean[r]) * sw[j];
      }

  CovarianceOperator op;
  op.dim = dim;
  op.a.assign(static_cast<size_t>(dim) * dim, 0.0);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (size_t i = 0; i < n; ++i) {
    const auto& c = centered[i];
    for (int r = 0; r < dim; ++r) {
      double cr = c[r];
      if (cr == 0.0) continue;
      double* row = &op.a[static_cast<size_t>(r) * dim];
      for (int s = 0; s < dim; ++s) row[s] += cr * c[s];
    }
  }
  for (double& v : op.a) v /= denom;
  return op;
}

double hilbert_schmidt_distance(const CovarianceOperator& a, const CovarianceOperator& b) {
  if (a.dim != b.dim) throw validation_error("covariance operators of different dimension");
  double s = 0.0;
  for (size_t c = 0; c < a.a.size(); ++c) {
    double d = a.a[c] - b.a[c];
    s += d * d;
  }
  return std::sqrt(s);
}

PermutationTestResult covariance_permutation_test(const CurveDataset& orig,
                                                  const CurveDataset& synth, int n_perm,
                                                  const std::string& metric, uint64_t seed,
                                                  int jobs) {
  check_same_grid(orig, synth);
  if (n_perm < 1) throw validation_error("permutation count must be >= 1");
  if (metric != "hilbert-schmidt")
    throw validation_error("unsupported covariance metric: " + metric +
                           " (only hilbert-schmidt is implemented)");
  const Grid& g = orig.grid;

  std::vector<const Mat*> pooled;
  for (const auto& c : orig.curves) pooled.push_back(&c.values);
  for (const auto& c : synth.curves) pooled.push_back(&c.values);
  const size_t na = orig.curves.size();
  const size_t total = pooled.size();

  auto statistic = [&](const std::vector<const Mat*>& ga, const std::vector<const Mat*>& gb) {
    return hilbert_schmidt_distance(covariance_operator(ga, g), covariance_operator(gb, g));
  };

  PermutationTestResult res;
  res.permutations = n_perm;
  res.seed = seed;
  {
    std::vector<const Mat*> ga(pooled.begin(), pooled.begin() + na);
    std::vector<const Mat*> gb(pooled.begin() + na, pooled.end());
    res.statistic_observed = statistic(ga, gb);
  }

  res.statistic_null.assign(n_perm, 0.0);
  parallel_for(n_perm, jobs, [&](int t) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(t) + 1);
    std::vector<size_t> perm(total);
    std::iota(perm.begin(), perm.end(), size_t{0});
    rng.shuffle(perm);
    std::vector<const Mat*> ga, gb;
    for (size_t i = 0; i < na; ++i) ga.push_back(pooled[perm[i]]);
    for (size_t i = na; i < total; ++i) gb.push_back(pooled[perm[i]]);
    res.statistic_null[t] = statistic(ga, gb);
  });

  res.p_value = add_one_p_value(res.statistic_observed, res.statistic_null);
  return res;
}

PrivacyAudit privacy_audit(const CurveDataset& orig, const CurveDataset& synth,
                           const DistanceMatrix* orig_matrix, double delta, int jobs) {
  check_same_grid(orig, synth);
  const int n = static_cast<int>(orig.curves.size());
  const int ns = static_cast<int>(synth.curves.size());
  if (n < 2) throw validation_error("privacy audit needs at least 2 original curves");
  const Grid& g = orig.grid;

  PrivacyAudit audit;
  audit.nn_orig_orig.assign(n, 0.0);
  audit.nn_synth_orig.assign(ns, 0.0);

  std::vector<Srvf> orig_srvfs = dataset_srvfs(orig);

  if (orig_matrix) {
    if (orig_matrix->n != n)
      throw validation_error("privacy audit: matrix size does not match originals");
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j)
        if (j != i) best = std::min(best, orig_matrix->comb(i, j));
      audit.nn_orig_orig[i] = best;
    }
  } else {
    DistanceMatrix m = distance_matrix(orig_srvfs, g, delta, jobs);
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j)
        if (j != i) best = std::min(best, m.comb(i, j));
      audit.nn_orig_orig[i] = best;
    }
  }

  std::vector<Srvf> synth_srvfs = dataset_srvfs(synth);
  parallel_for(ns, jobs, [&](int s) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      best = std::min(best, combined_distance(synth_srvfs[s], orig_srvfs[j], g, delta));
    audit.nn_synth_orig[s] = best;
  });

  audit.median_orig_orig = median_linear(audit.nn_orig_orig);
  audit.median_synth_orig = median_linear(audit.nn_synth_orig);
  audit.ratio = audit.median_orig_orig > 0.0
                    ? audit.median_synth_orig / audit.median_orig_orig
                    : (audit.median_synth_orig > 0.0 ? std::numeric_limits<double>::infinity()
                                                     : 0.0);
  audit.pass = audit.ratio >= 1.0;
  return audit;
}

namespace {
// axial coordinates of the flat-top hexagon containing (x, y), size = circumradius
std::pair<int, int> hex_of(double x, double y, double size) {
  double qf = (2.0 / 3.0 * x) / size;
  double rf = (-1.0 / 3.0 * x + std::sqrt(3.0) / 3.0 * y) / size;
  // cube rounding
  double xf = qf, zf = rf, yf = -xf - zf;
  double rx = std::round(xf), ry = std::round(yf), rz = std::round(zf);
  double dx = std::abs(rx - xf), dy = std::abs(ry - yf), dz = std::abs(rz - zf);
  if (dx > dy && dx > dz)
    rx = -ry - rz;
  else if (dy > dz)
    ry = -rx - rz;
  else
    rz = -rx - ry;
  return {static_cast<int>(rx), static_cast<int>(rz)};
}
}  // namespace

HexHeatmap hex_heatmap(const CurveDataset& dataset, const NormalizationParams& norm,
                       double cell_diagonal_km, int samples_per_curve) {
  if (cell_diagonal_km <= 0.0) throw validation_error("hex diagonal must be positive");
  if (samples_per_curve < 1) throw validation_error("samples_per_curve must be >= 1");

  HexHeatmap map;
  map.cell_diagonal_km = cell_diagonal_km;
  map.anchor_e = 0.5 * (norm.min_c1 + norm.max_c1);
  map.anchor_n = 0.5 * (norm.min_c2 + norm.max_c2);
  const double size = cell_diagonal_km * 1000.0 / 2.0;  // circumradius in meters

  const Grid& g = dataset.grid;
  for (const auto& curve : dataset.curves) {
    for (int s = 0; s < samples_per_curve; ++s) {
      double u = samples_per_curve == 1 ? 0.0
                                        : static_cast<double>(s) / (samples_per_curve - 1);
      double c1 = interp_column(curve.values, g, 0, u);
      double c2 = interp_column(curve.values, g, 1, u);
      double e = norm.denormalize_axis(0, c1) - map.anchor_e;
      double nn = norm.denormalize_axis(1, c2) - map.anchor_n;
      ++map.counts[hex_of(e, nn, size)];
      ++map.total;
    }
  }
  return map;
}

FeatureStats feature_stats(const CurveDataset& dataset, const NormalizationParams& norm) {
  FeatureStats stats;
  stats.curve_count = dataset.curves.size();
  if (dataset.curves.empty()) return stats;

  const Grid& g = dataset.grid;
  std::vector<double> distance_km, duration_s;
  for (const auto& curve : dataset.curves) {
    double len = 0.0;
    for (int j = 1; j < g.m; ++j) {
      double de = norm.denormalize_axis(0, curve.values(j, 0)) -
                  norm.denormalize_axis(0, curve.values(j - 1, 0));
      double dn = norm.denormalize_axis(1, curve.values(j, 1)) -
                  norm.denormalize_axis(1, curve.values(j - 1, 1));
      len += std::hypot(de, dn);
    }
    distance_km.push_back(len / 1000.0);
    duration_s.push_back(norm.denormalize_axis(2, curve.values(g.m - 1, 2)) -
                         norm.denormalize_axis(2, curve.values(0, 2)));
  }

  auto summarize = [](const std::string& name, const std::vector<double>& v) {
    FeatureStats::Row row;
    row.feature = name;
    row.min = *std::min_element(v.begin(), v.end());
    row.max = *std::max_element(v.begin(), v.end());
    row.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - row.mean) * (x - row.mean);
    row.sd = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
    return row;
  };
  stats.rows.push_back(summarize("distance_km", distance_km));
  stats.rows.push_back(summarize("duration_s", duration_s));
  return stats;
}

}  // namespace fdasynth
