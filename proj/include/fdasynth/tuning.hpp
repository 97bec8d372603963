#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "fdasynth/distance.hpp"
#include "fdasynth/hcluster.hpp"
#include "fdasynth/synthesis.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

struct DeltaSweepResult {
  std::vector<double> deltas;
  std::vector<double> coph_corr_amp;
  std::vector<double> coph_corr_phase;
  std::vector<double> abs_diff;
  double chosen_delta = 1.0;
  bool flat_flag = false;
};

// For each delta: cluster the mixed matrix with complete linkage and compare
// the cophenetic distances against the amplitude and phase matrices. The
// chosen delta minimizes the absolute correlation difference (ties toward
// the largest delta); a flat difference curve signals redundant sources.
DeltaSweepResult tune_delta(const DistanceMatrix& matrix, std::span<const double> delta_grid);

ClusterAssignment cluster_curves(const DistanceMatrix& matrix, const DynamicCutParams& params);

enum class TuneCriterion { elbow, threshold };

TuneCriterion parse_criterion(const std::string& name);

struct TuningGrid {
  std::vector<int> k_values = {3, 6, 9, 12, 15, 18, 21, 24};
  std::vector<double> alpha_values = {1, 3, 5, 7, 9, 11, 13, 15, 17, 19};
  TuneCriterion criterion = TuneCriterion::elbow;
  double threshold_b = 0.0;
  double elbow_ratio = 0.25;  // stabilization: forward difference below this
                              // fraction of the largest forward difference
  uint64_t seed = 42;

  void validate() const;
};

struct TuningReport {
  std::vector<int> k_values;
  std::vector<double> alpha_values;
  std::string criterion;
  double threshold_b = 0.0;
  uint64_t seed = 42;

  std::vector<std::vector<double>> I1;  // [k index][alpha index], min-distance indicator
  std::vector<double> alpha_hat_per_k;  // chosen alpha0 per K (NaN when unsatisfiable)
  std::vector<bool> satisfiable;

  std::vector<std::vector<double>> rho_per_k;  // |rho_g| per cluster, phase 2
  std::vector<double> I2;                      // 25th percentile of |rho_g| per K

  int chosen_k = -1;
  double chosen_alpha0 = 0.0;
  bool satisfied = false;

  // within-cluster synthetic-vs-original evaluations per (K, alpha0) trial;
  // equals sum over clusters of N_g^2
  uint64_t distance_evals_per_trial = 0;

  std::vector<std::string> warnings;
};

// Phase 1 (Algorithm 2): choose alpha0 per K from the minimum synthetic-to-
// original within-cluster distance indicator.
void tune_alpha_per_k(const CurveDataset& dataset, const DistanceMatrix& matrix,
                      const ClusterAssignment& clusters, const TuningGrid& grid,
                      TuningReport& report, int jobs = 1);

// Phase 2 (Algorithm 3): choose K maximizing the 25th percentile of the
// within-cluster distance-structure correlations.
void tune_k(const CurveDataset& dataset, const DistanceMatrix& matrix,
            const ClusterAssignment& clusters, const TuningGrid& grid, TuningReport& report,
            int jobs = 1);

TuningReport tune(const CurveDataset& dataset, const DistanceMatrix& matrix,
                  const ClusterAssignment& clusters, const TuningGrid& grid, int jobs = 1);

}  // namespace fdasynth
