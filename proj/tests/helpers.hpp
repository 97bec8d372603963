#pragma once

#include <cmath>
#include <vector>

#include "fdasynth/rng.hpp"
#include "fdasynth/srvf.hpp"
#include "fdasynth/types.hpp"

namespace fdatest {

constexpr double kPi = 3.14159265358979323846;

// Smooth random curve: linear trend plus three low-frequency Fourier modes
// per component, O(1) values and derivatives.
inline fdasynth::Curve random_smooth_curve(fdasynth::Rng& rng, const fdasynth::Grid& g,
                                           int p = 3) {
  fdasynth::Curve c;
  c.id = "random";
  c.source_id = "random";
  c.values = fdasynth::Mat(g.m, p);
  for (int d = 0; d < p; ++d) {
    double base = rng.uniform01();
    double slope = 2.0 * rng.uniform01() - 1.0;
    double amp[3], phase[3];
    for (int h = 0; h < 3; ++h) {
      amp[h] = (2.0 * rng.uniform01() - 1.0) * 0.3 / ((h + 1) * (h + 1));
      phase[h] = 2.0 * kPi * rng.uniform01();
    }
    for (int j = 0; j < g.m; ++j) {
      double x = g.x[j];
      double v = base + slope * x;
      for (int h = 0; h < 3; ++h) v += amp[h] * std::sin(kPi * (h + 1) * x + phase[h]);
      c.values(j, d) = v;
    }
  }
  return c;
}

// Like random_smooth_curve but with a non-decreasing third component, as the
// trajectory Curve invariant requires.
inline fdasynth::Curve trajectory_like_curve(fdasynth::Rng& rng, const fdasynth::Grid& g) {
  fdasynth::Curve c = random_smooth_curve(rng, g, 3);
  double pace = 0.2 + 0.6 * rng.uniform01();
  for (int j = 0; j < g.m; ++j) {
    double x = g.x[j];
    c.values(j, 2) = (1.0 - pace) * x + pace * x * x;
  }
  return c;
}

// Random boundary-preserving diffeomorphism: normalized integral of
// exp(strength * low-frequency signal); strictly increasing.
inline fdasynth::Warping random_warping(fdasynth::Rng& rng, const fdasynth::Grid& g,
                                        double strength = 0.75) {
  const int m = g.m;
  double e1 = 2.0 * rng.uniform01() - 1.0;
  double e2 = 2.0 * rng.uniform01() - 1.0;
  std::vector<double> w(m);
  for (int j = 0; j < m; ++j) {
    double x = g.x[j];
    w[j] = std::exp(strength * (e1 * std::sin(kPi * x) + e2 * std::sin(2.0 * kPi * x)));
  }
  fdasynth::Warping gamma;
  gamma.gamma.assign(m, 0.0);
  const double dx = g.dx();
  for (int j = 1; j < m; ++j)
    gamma.gamma[j] = gamma.gamma[j - 1] + 0.5 * dx * (w[j - 1] + w[j]);
  double total = gamma.gamma[m - 1];
  for (int j = 0; j < m; ++j) gamma.gamma[j] /= total;
  gamma.gamma[0] = 0.0;
  gamma.gamma[m - 1] = 1.0;
  return gamma;
}

// Function-level composition f o gamma by per-component interpolation.
inline fdasynth::Curve compose(const fdasynth::Curve& f, const fdasynth::Warping& gamma,
                               const fdasynth::Grid& g) {
  fdasynth::Curve out = f;
  for (int j = 0; j < g.m; ++j)
    for (int d = 0; d < f.values.cols; ++d)
      out.values(j, d) = fdasynth::interp_column(f.values, g, d, gamma.gamma[j]);
  return out;
}

inline double max_abs_diff(const fdasynth::Mat& a, const fdasynth::Mat& b) {
  double m = 0.0;
  for (size_t c = 0; c < a.a.size(); ++c) m = std::max(m, std::abs(a.a[c] - b.a[c]));
  return m;
}

}  // namespace fdatest
