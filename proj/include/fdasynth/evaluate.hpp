#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "fdasynth/distance.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

struct PermutationTestResult {
  double statistic_observed = 0.0;
  std::vector<double> statistic_null;  // one entry per permutation
  double p_value = 1.0;                // add-one convention, in (0,1]
  int permutations = 0;
  uint64_t seed = 0;
};

// Permutation test for equality of the Karcher means of two curve sets.
// Statistic: combined elastic distance between the group means. Null: pooled
// labels reshuffled per permutation with substream seeding.
PermutationTestResult mean_permutation_test(const CurveDataset& orig, const CurveDataset& synth,
                                            int n_perm, double delta, uint64_t seed,
                                            int jobs = 1);

// Grid-weighted sample covariance of vectorized centered curves. The
// trapezoidal weights are absorbed so the Hilbert-Schmidt distance is the
// plain Frobenius distance between operators.
struct CovarianceOperator {
  int dim = 0;  // m * p
  std::vector<double> a;

  double at(int r, int c) const { return a[static_cast<size_t>(r) * dim + c]; }
};

CovarianceOperator covariance_operator(const std::vector<const Mat*>& curves, const Grid& g);

double hilbert_schmidt_distance(const CovarianceOperator& a, const CovarianceOperator& b);

// Permutation test for equality of covariance operators; each group is
// re-centered with its own sample mean inside every permutation.
PermutationTestResult covariance_permutation_test(const CurveDataset& orig,
                                                  const CurveDataset& synth, int n_perm,
                                                  const std::string& metric, uint64_t seed,
                                                  int jobs = 1);

struct PrivacyAudit {
  std::vector<double> nn_orig_orig;   // per original, nearest distinct original
  std::vector<double> nn_synth_orig;  // per synthetic, nearest original
  double median_orig_orig = 0.0;
  double median_synth_orig = 0.0;
  double ratio = 0.0;
  bool pass = false;  // ratio >= 1.0
};

// Minimum-distance privacy check. The original-original distances come from
// `orig_matrix` when provided (must match orig), otherwise they are
// recomputed; synthetic-to-original distances are always computed fresh.
PrivacyAudit privacy_audit(const CurveDataset& orig, const CurveDataset& synth,
                           const DistanceMatrix* orig_matrix, double delta, int jobs = 1);

struct HexHeatmap {
  double cell_diagonal_km = 0.0;
  double anchor_e = 0.0, anchor_n = 0.0;            // meters
  std::map<std::pair<int, int>, int64_t> counts;    // axial (q, r) -> count
  int64_t total = 0;
};

// Resample curves, map back to planar meters and bin into flat-top hexagons
// whose long diagonal is cell_diagonal_km. Anchored at the center of the
// normalization box so original and synthetic maps share cells.
HexHeatmap hex_heatmap(const CurveDataset& dataset, const NormalizationParams& norm,
                       double cell_diagonal_km, int samples_per_curve);

struct FeatureStats {
  struct Row {
    std::string feature;
    double min = 0.0, max = 0.0, mean = 0.0, sd = 0.0;
  };
  size_t curve_count = 0;
  std::vector<Row> rows;
};

// Per-curve travel distance (km) and duration (s) summaries in original units.
FeatureStats feature_stats(const CurveDataset& dataset, const NormalizationParams& norm);

}  // namespace fdasynth
