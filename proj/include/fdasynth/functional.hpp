#pragma once

#include <span>

#include "fdasynth/ingest.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

// Natural cubic spline through (xs, ys), sampled at the grid abscissae.
std::vector<double> smooth_spatial(std::span<const double> xs, std::span<const double> ys,
                                   const Grid& g);

// Fritsch-Carlson monotone interpolant, sampled at the grid abscissae;
// output is non-decreasing.
std::vector<double> smooth_temporal(std::span<const double> xs, std::span<const double> ts,
                                    const Grid& g);

// One curve per trajectory: knots at j/(N-1) in record order, natural cubic
// splines for the spatial components and a monotone spline for elapsed time.
CurveDataset build_dataset(std::span<const NormalizedTrajectory> trajs, const Grid& g,
                           const NormalizationParams& norm);

}  // namespace fdasynth
