#include "fdasynth/karcher.hpp"

#include <cmath>
#include <limits>

#include "fdasynth/align.hpp"
#include "fdasynth/distance.hpp"

namespace fdasynth {

namespace {
double sq_l2_dist(const Mat& a, const Mat& b, const Grid& g) {
  double d = l2_dist(a, b, g);
  return d * d;
}
}  // namespace

KarcherResult weighted_karcher_mean(const WeightedSet& set, const Grid& g, KarcherOptions opts) {
  const size_t k = set.srvfs.size();
  if (k == 0) throw validation_error("karcher mean of empty set");
  if (set.weights.size() != k) throw validation_error("karcher: weights/srvfs size mismatch");
  double wsum = 0.0;
  for (double w : set.weights) {
    if (w < 0.0) throw validation_error("karcher: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw validation_error("karcher: weights must sum to 1");
  if (opts.tol <= 0.0) throw validation_error("karcher: tol must be positive");

  const int m = g.m;
  const int p = set.srvfs[0].values.cols;

  KarcherResult res;
  res.warpings.assign(k, Warping::identity(g));

  // extrinsic start: weighted linear combination of the input SRVFs
  Mat mu(m, p);
  for (size_t e = 0; e < k; ++e) {
    const Mat& q = set.srvfs[e].values;
    double w = set.weights[e];
    for (size_t c = 0; c < q.a.size(); ++c) mu.a[c] += w * q.a[c];
  }

  std::vector<Srvf> aligned(k);
  for (size_t e = 0; e < k; ++e) aligned[e] = set.srvfs[e];

  double prev_obj = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    Srvf mu_srvf{mu};
    for (size_t e = 0; e < k; ++e) {
      AlignResult r = align(mu_srvf, set.srvfs[e], g);
      // keep the previous warping if the fresh DP candidate realizes a
      // larger residual (lattice cost and realized cost differ slightly)
      if (iter == 1 ||
          sq_l2_dist(mu, r.aligned.values, g) <= sq_l2_dist(mu, aligned[e].values, g)) {
        aligned[e] = std::move(r.aligned);
        res.warpings[e] = std::move(r.gamma);
      }
    }

    Mat mu_next(m, p);
    for (size_t e = 0; e < k; ++e) {
      double w = set.weights[e];
      if (w == 0.0) continue;
      for (size_t c = 0; c < mu_next.a.size(); ++c) mu_next.a[c] += w * aligned[e].values.a[c];
    }
    mu = std::move(mu_next);

    double obj = 0.0;
    for (size_t e = 0; e < k; ++e) {
      if (set.weights[e] == 0.0) continue;
      obj += set.weights[e] * sq_l2_dist(mu, aligned[e].values, g);
    }
    res.objective_trace.push_back(obj);
    res.iterations = iter;

    if (obj == 0.0 || (std::isfinite(prev_obj) &&
                       prev_obj - obj < opts.tol * std::max(prev_obj, 1e-300))) {
      res.converged = true;
      break;
    }
    prev_obj = obj;
  }

  res.mean_srvf.values = std::move(mu);
  return res;
}

KarcherResult unweighted_mean(const std::vector<Srvf>& srvfs, const Grid& g, KarcherOptions opts) {
  WeightedSet set;
  set.srvfs = srvfs;
  set.weights.assign(srvfs.size(), 1.0 / srvfs.size());
  double acc = 0.0;
  for (size_t e = 0; e + 1 < set.weights.size(); ++e) acc += set.weights[e];
  if (!set.weights.empty()) set.weights.back() = 1.0 - acc;  // exact unit sum
  return weighted_karcher_mean(set, g, opts);
}

KarcherResult unweighted_mean(const CurveDataset& dataset, KarcherOptions opts) {
  return unweighted_mean(dataset_srvfs(dataset), dataset.grid, opts);
}

}  // namespace fdasynth
