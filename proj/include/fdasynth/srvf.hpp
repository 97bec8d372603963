#pragma once

#include <span>

#include "fdasynth/types.hpp"

namespace fdasynth {

// Square-root velocity representation of a curve, sampled on the same grid.
struct Srvf {
  Mat values;  // m x p
};

// Discretized boundary-preserving increasing diffeomorphism of [0,1].
struct Warping {
  std::vector<double> gamma;  // m values, gamma[0]=0, gamma[m-1]=1, strictly increasing

  static Warping identity(const Grid& g) { return Warping{g.x}; }
};

// Finite-difference derivative of a sampled scalar function: central in the
// interior, one-sided first order at the endpoints.
std::vector<double> fd_derivative(std::span<const double> f, const Grid& g);

// q = f_dot / sqrt(|f_dot|), zero where the derivative vanishes.
Srvf to_srvf(const Curve& f, const Grid& g);

// f(x) = start + cumulative trapezoid of q|q|; f(0) = start exactly.
Curve from_srvf(const Srvf& q, const Grid& g, std::span<const double> start);

// (q o gamma) * sqrt(gamma_dot), with linear interpolation of q and
// finite-difference gamma_dot.
Srvf warp_srvf(const Srvf& q, const Warping& gamma, const Grid& g);

}  // namespace fdasynth
