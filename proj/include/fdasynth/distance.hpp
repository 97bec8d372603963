#pragma once

#include <filesystem>

#include "fdasynth/srvf.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

// Symmetric N x N elastic distances. Amplitude and phase are kept alongside
// the combined matrix so delta can be re-mixed without re-alignment.
struct DistanceMatrix {
  int n = 0;
  double delta = 1.0;
  std::vector<double> amplitude;
  std::vector<double> phase;
  std::vector<double> combined;

  double amp(int i, int j) const { return amplitude[static_cast<size_t>(i) * n + j]; }
  double pha(int i, int j) const { return phase[static_cast<size_t>(i) * n + j]; }
  double comb(int i, int j) const { return combined[static_cast<size_t>(i) * n + j]; }

  // combined = delta * amplitude + (1 - delta) * phase, elementwise.
  void remix(double new_delta);
};

std::vector<Srvf> dataset_srvfs(const CurveDataset& dataset);

// All N(N-1)/2 unordered pairs, aligning j onto i for i < j; both
// orientations filled. Deterministic for any worker count.
DistanceMatrix distance_matrix(const CurveDataset& dataset, double delta, int jobs = 1);
DistanceMatrix distance_matrix(const std::vector<Srvf>& srvfs, const Grid& g, double delta,
                               int jobs = 1);

// Binary file format: magic "FDSM", u32 version, u32 n, f64 delta, then
// amplitude, phase, combined as n*n little-endian f64 row-major blocks.
void save_distance_matrix(const DistanceMatrix& m, const std::filesystem::path& path);
DistanceMatrix load_distance_matrix(const std::filesystem::path& path);

}  // namespace fdasynth
