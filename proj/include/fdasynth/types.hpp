#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdasynth {

enum class ErrorKind { validation, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& msg) {
  return Error(ErrorKind::validation, msg);
}
inline Error numerical_error(const std::string& msg) {
  return Error(ErrorKind::numerical, msg);
}

// Uniform sampling grid on [0,1], endpoints included.
struct Grid {
  int m = 0;
  std::vector<double> x;

  static Grid uniform(int m);

  double dx() const { return 1.0 / (m - 1); }
  // Trapezoidal quadrature weight for node j.
  double w(int j) const { return (j == 0 || j == m - 1) ? dx() / 2.0 : dx(); }

  bool operator==(const Grid& o) const { return m == o.m && x == o.x; }
};

// Dense row-major matrix of samples, rows = grid points, cols = components.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

// Affine normalization constants for the three trajectory axes.
// Spatial axes use the max->0 orientation by default; the elapsed-time axis
// always uses min->0 so normalized time stays increasing.
struct NormalizationParams {
  double min_c1 = 0.0, max_c1 = 1.0;
  double min_c2 = 0.0, max_c2 = 1.0;
  double min_t = 0.0, max_t = 1.0;
  bool spatial_max0 = true;

  double normalize_axis(int axis, double v) const;
  double denormalize_axis(int axis, double v) const;
};

struct Curve {
  std::string id;
  std::string source_id;
  Mat values;  // m x p, p = 3 for trajectories
};

struct CurveDataset {
  Grid grid;
  NormalizationParams normalization;
  std::vector<Curve> curves;
  std::map<std::string, std::string> metadata;
};

// Linear interpolation of a sampled component at u in [0,1].
double interp_column(const Mat& v, const Grid& g, int col, double u);

// L2 norm / distance with trapezoidal weights, treating rows as R^p values.
double l2_norm(const Mat& v, const Grid& g);
double l2_dist(const Mat& a, const Mat& b, const Grid& g);

double percentile_linear(std::vector<double> values, double p);
double median_linear(const std::vector<double>& values);
double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fdasynth
