#pragma once

#include "fdasynth/srvf.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

struct WeightedSet {
  std::vector<Srvf> srvfs;
  std::vector<double> weights;  // >= 0, summing to 1
};

struct KarcherResult {
  Srvf mean_srvf;
  std::vector<Warping> warpings;  // per-input optimal alignment onto the mean
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

struct KarcherOptions {
  double tol = 1e-4;  // relative objective decrease
  int max_iter = 20;
};

// Weighted Karcher mean in SRVF space by alternating minimization:
// start from the extrinsic weighted average, then repeat align-and-average.
// A candidate warping is only adopted when it does not increase the realized
// residual, which keeps the objective trace non-increasing.
KarcherResult weighted_karcher_mean(const WeightedSet& set, const Grid& g,
                                    KarcherOptions opts = {});

KarcherResult unweighted_mean(const CurveDataset& dataset, KarcherOptions opts = {});
KarcherResult unweighted_mean(const std::vector<Srvf>& srvfs, const Grid& g,
                              KarcherOptions opts = {});

}  // namespace fdasynth
