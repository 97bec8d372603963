#include "fdasynth/srvf.hpp"

#include <cmath>

namespace fdasynth {

namespace {
constexpr double kZeroDerivative = 1e-12;
}

std::vector<double> fd_derivative(std::span<const double> f, const Grid& g) {
  const int m = g.m;
  const double dx = g.dx();
  std::vector<double> d(m);
  d[0] = (f[1] - f[0]) / dx;
  d[m - 1] = (f[m - 1] - f[m - 2]) / dx;
  for (int j = 1; j < m - 1; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * dx);
  return d;
}

Srvf to_srvf(const Curve& f, const Grid& g) {
  const int m = g.m;
  const int p = f.values.cols;
  const double dx = g.dx();
  Srvf q;
  q.values = Mat(m, p);
  std::vector<double> deriv(p);
  for (int j = 0; j < m; ++j) {
    double norm2 = 0.0;
    for (int d = 0; d < p; ++d) {
      double fd;
      if (j == 0)
        fd = (f.values(1, d) - f.values(0, d)) / dx;
      else if (j == m - 1)
        fd = (f.values(m - 1, d) - f.values(m - 2, d)) / dx;
      else
        fd = (f.values(j + 1, d) - f.values(j - 1, d)) / (2.0 * dx);
      deriv[d] = fd;
      norm2 += fd * fd;
    }
    double norm = std::sqrt(norm2);
    if (norm < kZeroDerivative) {
      for (int d = 0; d < p; ++d) q.values(j, d) = 0.0;
    } else {
      double inv = 1.0 / std::sqrt(norm);
      for (int d = 0; d < p; ++d) q.values(j, d) = deriv[d] * inv;
    }
  }
  return q;
}

Curve from_srvf(const Srvf& q, const Grid& g, std::span<const double> start) {
  const int m = g.m;
  const int p = q.values.cols;
  const double dx = g.dx();
  Curve f;
  f.values = Mat(m, p);
  // integrand g_j = q_j * |q_j|
  Mat integ(m, p);
  for (int j = 0; j < m; ++j) {
    double n2 = 0.0;
    for (int d = 0; d < p; ++d) n2 += q.values(j, d) * q.values(j, d);
    double n = std::sqrt(n2);
    for (int d = 0; d < p; ++d) integ(j, d) = q.values(j, d) * n;
  }
  for (int d = 0; d < p; ++d) f.values(0, d) = start[d];
  for (int j = 1; j < m; ++j)
    for (int d = 0; d < p; ++d)
      f.values(j, d) = f.values(j - 1, d) + 0.5 * dx * (integ(j - 1, d) + integ(j, d));
  return f;
}

Srvf warp_srvf(const Srvf& q, const Warping& gamma, const Grid& g) {
  const int m = g.m;
  const int p = q.values.cols;
  std::vector<double> gdot = fd_derivative(gamma.gamma, g);
  Srvf out;
  out.values = Mat(m, p);
  for (int j = 0; j < m; ++j) {
    double sq = std::sqrt(std::max(gdot[j], 0.0));
    double u = gamma.gamma[j];
    for (int d = 0; d < p; ++d) out.values(j, d) = interp_column(q.values, g, d, u) * sq;
  }
  return out;
}

}  // namespace fdasynth
