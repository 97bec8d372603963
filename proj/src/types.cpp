#include "fdasynth/types.hpp"

#include <algorithm>
#include <cmath>

namespace fdasynth {

Grid Grid::uniform(int m) {
  if (m < 5) throw validation_error("grid size must be at least 5, got " + std::to_string(m));
  Grid g;
  g.m = m;
  g.x.resize(m);
  const double dx = 1.0 / (m - 1);
  for (int j = 0; j < m; ++j) g.x[j] = j * dx;
  g.x[m - 1] = 1.0;
  return g;
}

double NormalizationParams::normalize_axis(int axis, double v) const {
  double lo, hi;
  bool max0;
  switch (axis) {
    case 0: lo = min_c1; hi = max_c1; max0 = spatial_max0; break;
    case 1: lo = min_c2; hi = max_c2; max0 = spatial_max0; break;
    default: lo = min_t; hi = max_t; max0 = false; break;
  }
  return max0 ? (hi - v) / (hi - lo) : (v - lo) / (hi - lo);
}

double NormalizationParams::denormalize_axis(int axis, double v) const {
  double lo, hi;
  bool max0;
  switch (axis) {
    case 0: lo = min_c1; hi = max_c1; max0 = spatial_max0; break;
    case 1: lo = min_c2; hi = max_c2; max0 = spatial_max0; break;
    default: lo = min_t; hi = max_t; max0 = false; break;
  }
  return max0 ? hi - v * (hi - lo) : lo + v * (hi - lo);
}

double interp_column(const Mat& v, const Grid& g, int col, double u) {
  if (u <= 0.0) return v(0, col);
  if (u >= 1.0) return v(g.m - 1, col);
  double pos = u * (g.m - 1);
  int j = std::min(static_cast<int>(pos), g.m - 2);
  double t = pos - j;
  return v(j, col) + t * (v(j + 1, col) - v(j, col));
}

double l2_norm(const Mat& v, const Grid& g) {
  double s = 0.0;
  for (int j = 0; j < v.rows; ++j) {
    double n2 = 0.0;
    for (int d = 0; d < v.cols; ++d) n2 += v(j, d) * v(j, d);
    s += g.w(j) * n2;
  }
  return std::sqrt(s);
}

double l2_dist(const Mat& a, const Mat& b, const Grid& g) {
  double s = 0.0;
  for (int j = 0; j < a.rows; ++j) {
    double n2 = 0.0;
    for (int d = 0; d < a.cols; ++d) {
      double diff = a(j, d) - b(j, d);
      n2 += diff * diff;
    }
    s += g.w(j) * n2;
  }
  return std::sqrt(s);
}

// Type-7 quantile: linear interpolation between order statistics.
double percentile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw validation_error("percentile of empty set");
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  double h = p * (values.size() - 1);
  size_t lo = static_cast<size_t>(h);
  if (lo >= values.size() - 1) return values.back();
  double frac = h - lo;
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median_linear(const std::vector<double>& values) {
  return percentile_linear(values, 0.5);
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw validation_error("pearson correlation needs two equal-length vectors of size >= 2");
  const size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace fdasynth
