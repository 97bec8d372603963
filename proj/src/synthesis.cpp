#include "fdasynth/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fdasynth/karcher.hpp"
#include "fdasynth/parallel.hpp"

namespace fdasynth {

WeightKernel parse_kernel(const std::string& name) {
  if (name == "exp") return WeightKernel::exp;
  if (name == "hyp" || name == "hyperbolic") return WeightKernel::hyperbolic;
  if (name == "exp-scaled") return WeightKernel::exp_scaled;
  throw validation_error("unknown weight kernel: " + name);
}

std::string kernel_name(WeightKernel k) {
  switch (k) {
    case WeightKernel::exp: return "exp";
    case WeightKernel::hyperbolic: return "hyp";
    default: return "exp-scaled";
  }
}

void SynthesisConfig::validate(int n_curves) const {
  if (k < 1) throw validation_error("k must be >= 1");
  if (k >= n_curves)
    throw validation_error("k must be smaller than the dataset size (k=" + std::to_string(k) +
                           ", n=" + std::to_string(n_curves) + ")");
  if (alpha0 < 1.0) throw validation_error("alpha0 must be >= 1");
  if (kernel == WeightKernel::exp_scaled && beta0 <= 0.0)
    throw validation_error("beta0 must be positive for the exp-scaled kernel");
}

std::pair<std::vector<int>, std::vector<double>> nearest_neighbors(const DistanceMatrix& m,
                                                                   int i, int k) {
  if (k >= m.n)
    throw validation_error("nearest_neighbors: k=" + std::to_string(k) +
                           " must be smaller than n=" + std::to_string(m.n));
  std::vector<int> order;
  order.reserve(m.n - 1);
  for (int j = 0; j < m.n; ++j)
    if (j != i) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return m.comb(i, a) < m.comb(i, b); });
  order.resize(k);
  std::vector<double> dist(k);
  for (int t = 0; t < k; ++t) dist[t] = m.comb(i, order[t]);
  return {std::move(order), std::move(dist)};
}

std::vector<double> dirichlet_parameters(std::span<const double> distances, double alpha0,
                                         WeightKernel kernel, double beta0,
                                         bool* uniform_fallback) {
  if (alpha0 < 1.0) throw validation_error("alpha0 must be >= 1");
  const size_t k = distances.size();
  if (k == 0) throw validation_error("dirichlet_parameters: empty distance vector");
  std::vector<double> g(k);
  double sum = 0.0;
  for (size_t t = 0; t < k; ++t) {
    double d = distances[t];
    if (d < 0.0) throw validation_error("dirichlet_parameters: negative distance");
    switch (kernel) {
      case WeightKernel::exp: g[t] = std::exp(-d); break;
      case WeightKernel::hyperbolic: g[t] = 1.0 / (1.0 + d); break;
      case WeightKernel::exp_scaled: g[t] = std::exp(-beta0 * d); break;
    }
    sum += g[t];
  }
  bool fallback = !(sum > 0.0);
  if (uniform_fallback) *uniform_fallback = fallback;
  std::vector<double> alphas(k);
  if (fallback) {
    for (auto& a : alphas) a = alpha0 / k;
  } else {
    for (size_t t = 0; t < k; ++t) alphas[t] = alpha0 * g[t] / sum;
  }
  // renormalize so the concentration sum is exactly alpha0
  double asum = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  double scale = alpha0 / asum;
  for (auto& a : alphas) a *= scale;
  return alphas;
}

Curve synthesize_one(const CurveDataset& dataset, const std::vector<Srvf>& srvfs,
                     const DistanceMatrix& matrix, int i, const SynthesisConfig& config,
                     Rng& rng, NeighborWeights* nw, int* karcher_iters, double* time_clamp) {
  config.validate(static_cast<int>(dataset.curves.size()));
  const Grid& g = dataset.grid;
  const int p = dataset.curves[i].values.cols;

  auto [ids, dists] = nearest_neighbors(matrix, i, config.k);
  bool fallback = false;
  std::vector<double> alphas =
      dirichlet_parameters(dists, config.alpha0, config.kernel, config.beta0, &fallback);
  std::vector<double> weights = rng.dirichlet(alphas);

  if (nw) {
    nw->reference_id = dataset.curves[i].id;
    nw->neighbor_index = ids;
    nw->neighbor_ids.clear();
    for (int j : ids) nw->neighbor_ids.push_back(dataset.curves[j].id);
    nw->distances = dists;
    nw->alphas = alphas;
    nw->weights = weights;
    nw->uniform_fallback = fallback;
  }

  // weighted mean of the neighbors' starting points
  std::vector<double> start(p, 0.0);
  for (int t = 0; t < config.k; ++t)
    for (int d = 0; d < p; ++d) start[d] += weights[t] * dataset.curves[ids[t]].values(0, d);

  WeightedSet set;
  set.srvfs.reserve(config.k);
  for (int j : ids) set.srvfs.push_back(srvfs[j]);
  set.weights = weights;
  double wsum = std::accumulate(set.weights.begin(), set.weights.end(), 0.0);
  for (auto& w : set.weights) w /= wsum;

  KarcherResult mean = weighted_karcher_mean(set, g);
  if (karcher_iters) *karcher_iters = mean.iterations;

  Curve synth = from_srvf(mean.mean_srvf, g, start);
  synth.id = dataset.curves[i].id + "-s";
  synth.source_id = "synthetic";

  // roundoff can leave tiny inversions in elapsed time; running-max clamp
  double clamp_max = 0.0;
  const int tcol = p - 1;
  for (int j = 1; j < g.m; ++j) {
    double prev = synth.values(j - 1, tcol);
    if (synth.values(j, tcol) < prev) {
      clamp_max = std::max(clamp_max, prev - synth.values(j, tcol));
      synth.values(j, tcol) = prev;
    }
  }
  if (time_clamp) *time_clamp = clamp_max;
  return synth;
}

std::pair<CurveDataset, SynthesisReport> synthesize_all(const CurveDataset& dataset,
                                                        const DistanceMatrix& matrix,
                                                        const SynthesisConfig& config,
                                                        int jobs) {
  const int n = static_cast<int>(dataset.curves.size());
  config.validate(n);
  if (matrix.n != n)
    throw validation_error("distance matrix size does not match the dataset");

  auto t0 = std::chrono::steady_clock::now();
  std::vector<Srvf> srvfs = dataset_srvfs(dataset);

  CurveDataset out;
  out.grid = dataset.grid;
  out.normalization = dataset.normalization;
  out.metadata = dataset.metadata;
  out.metadata["source"] = "synthetic";
  out.curves.resize(n);

  SynthesisReport report;
  report.config = config;
  report.neighbors.resize(n);
  report.karcher_iterations.resize(n);
  report.time_clamp_max.resize(n);

  parallel_for(n, jobs, [&](int i) {
    Rng rng = Rng::substream(config.seed, static_cast<uint64_t>(i));
    out.curves[i] =
        synthesize_one(dataset, srvfs, matrix, i, config, rng, &report.neighbors[i],
                       &report.karcher_iterations[i], &report.time_clamp_max[i]);
  });

  auto t1 = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return {std::move(out), std::move(report)};
}

}  // namespace fdasynth
