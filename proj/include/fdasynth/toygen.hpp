#pragma once

#include <cstdint>
#include <ostream>

#include "fdasynth/types.hpp"

namespace fdasynth {

struct ToyDataSpec {
  int n_clusters = 3;
  int curves_per_cluster = 20;
  double noise_scale = 0.05;
  uint64_t seed = 7;
  int grid_m = 101;

  void validate() const;
};

// Seeded clusters of 3-d curves: per cluster a smooth template path with its
// own start, heading and pacing; per curve low-frequency noise on top. The
// elapsed-time component is strictly increasing. Values live in [0,1] with a
// plausible metric normalization box attached.
CurveDataset generate_toy(const ToyDataSpec& spec);

// Ground-truth cluster labels (1-based) recovered from the toy curve ids.
std::vector<int> toy_labels(const CurveDataset& dataset);

// GPS-like signals CSV (ingest-compatible) sampled from the toy curves.
void write_toy_signals_csv(const CurveDataset& dataset, int points_per_trajectory,
                           std::ostream& out);

}  // namespace fdasynth
