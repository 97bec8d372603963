#pragma once

#include "fdasynth/srvf.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

struct AlignResult {
  Warping gamma;   // optimal warping applied to q2
  Srvf aligned;    // warp_srvf(q2, gamma)
  double dp_cost;  // squared-L2 cost of the optimal lattice path
};

// Admissible lattice steps: all coprime (di, dj) with 1 <= di, dj <= 6,
// giving slopes between 1/6 and 6. Shared with exhaustive-search oracles.
// The diagonal step comes first so cost ties resolve toward the identity.
inline constexpr int kAlignStepCount = 23;
inline constexpr int kAlignSteps[kAlignStepCount][2] = {
    {1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}, {1, 4},
    {4, 1}, {3, 4}, {4, 3}, {1, 5}, {5, 1}, {2, 5}, {5, 2}, {3, 5},
    {5, 3}, {4, 5}, {5, 4}, {1, 6}, {6, 1}, {5, 6}, {6, 5}};

// Optimal reparameterization of q2 onto q1 by dynamic programming over an
// m x m lattice with the steps above. Edge costs are trapezoidal integrals
// of |q1 - (q2 o gamma) sqrt(gamma_dot)|^2 along the linear segment.
// Deterministic for fixed inputs.
AlignResult align(const Srvf& q1, const Srvf& q2, const Grid& g);

// Cost of one lattice edge from (a, b) to (i, j), as used by the DP.
double align_edge_cost(const Srvf& q1, const Srvf& q2, const Grid& g, int a, int b, int i, int j);

// D_a = |q1 - warp_srvf(q2, gamma_opt)| in the trapezoid-weighted L2 norm.
double amplitude_distance(const Srvf& q1, const Srvf& q2, const Grid& g);

// D_p of a given warping: arccos of the clamped inner product of
// psi = sqrt(gamma_dot) with the identity's psi_0 = 1.
double phase_distance_of(const Warping& gamma, const Grid& g);

// D_p of the optimal alignment of q2 onto q1.
double phase_distance(const Srvf& q1, const Srvf& q2, const Grid& g);

struct PairDistance {
  double amplitude = 0.0;
  double phase = 0.0;
};

// One alignment, both distances.
PairDistance pair_distance(const Srvf& q1, const Srvf& q2, const Grid& g);

}  // namespace fdasynth
