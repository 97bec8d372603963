#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "fdasynth/distance.hpp"
#include "fdasynth/rng.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

enum class WeightKernel { exp, hyperbolic, exp_scaled };

WeightKernel parse_kernel(const std::string& name);
std::string kernel_name(WeightKernel k);

struct SynthesisConfig {
  int k = 6;
  double alpha0 = 7.0;
  WeightKernel kernel = WeightKernel::exp;
  double beta0 = 1.0;  // only for exp_scaled
  double delta = 1.0;  // delta the distance matrix was built with
  uint64_t seed = 42;

  void validate(int n_curves) const;
};

struct NeighborWeights {
  std::string reference_id;
  std::vector<int> neighbor_index;
  std::vector<std::string> neighbor_ids;  // ascending distance
  std::vector<double> distances;
  std::vector<double> alphas;
  std::vector<double> weights;
  bool uniform_fallback = false;  // all kernel values underflowed
};

struct SynthesisReport {
  SynthesisConfig config;
  std::vector<NeighborWeights> neighbors;
  std::vector<int> karcher_iterations;
  std::vector<double> time_clamp_max;  // per curve, largest monotonicity fixup
  double wall_ms = 0.0;
};

// The k smallest off-diagonal entries of row i, ascending; ties broken by
// ascending curve index. Self excluded.
std::pair<std::vector<int>, std::vector<double>> nearest_neighbors(const DistanceMatrix& m,
                                                                   int i, int k);

// alpha_k = alpha0 * g(d_k) / sum_n g(d_n), renormalized so the sum is
// exactly alpha0. Underflow of every g(d) falls back to uniform.
std::vector<double> dirichlet_parameters(std::span<const double> distances, double alpha0,
                                         WeightKernel kernel, double beta0 = 1.0,
                                         bool* uniform_fallback = nullptr);

Curve synthesize_one(const CurveDataset& dataset, const std::vector<Srvf>& srvfs,
                     const DistanceMatrix& matrix, int i, const SynthesisConfig& config,
                     Rng& rng, NeighborWeights* nw = nullptr, int* karcher_iters = nullptr,
                     double* time_clamp = nullptr);

std::pair<CurveDataset, SynthesisReport> synthesize_all(const CurveDataset& dataset,
                                                        const DistanceMatrix& matrix,
                                                        const SynthesisConfig& config,
                                                        int jobs = 1);

}  // namespace fdasynth
