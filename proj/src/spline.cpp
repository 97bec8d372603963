#include "fdasynth/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdasynth/types.hpp"

namespace fdasynth {

namespace {
void check_knots(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw validation_error("spline: knot arrays differ in length");
  if (xs.size() < 2) throw validation_error("spline: need at least 2 knots");
  for (size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] == xs[i - 1])
      throw validation_error("spline: duplicate knot abscissa at index " + std::to_string(i));
    if (xs[i] < xs[i - 1])
      throw validation_error("spline: knot abscissae not increasing at index " + std::to_string(i));
  }
}

size_t find_interval(const std::vector<double>& x, double t) {
  if (t <= x.front()) return 0;
  if (t >= x[x.size() - 2]) return x.size() - 2;
  return static_cast<size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
}
}  // namespace

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> xs, std::span<const double> ys)
    : x_(xs.begin(), xs.end()), y_(ys.begin(), ys.end()) {
  check_knots(xs, ys);
  const size_t n = x_.size();
  m2_.assign(n, 0.0);
  if (n == 2) return;  // natural spline on 2 knots is the chord

  // Thomas algorithm for the tridiagonal second-derivative system,
  // natural boundary M_0 = M_{n-1} = 0.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    double h0 = x_[i] - x_[i - 1];
    double h1 = x_[i + 1] - x_[i];
    double diag = 2.0 * (h0 + h1);
    double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    if (i == 1) {
      c[i] = h1 / diag;
      d[i] = rhs / diag;
    } else {
      double denom = diag - h0 * c[i - 1];
      c[i] = h1 / denom;
      d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
  }
  for (size_t i = n - 2; i >= 1; --i) {
    m2_[i] = d[i] - c[i] * m2_[i + 1];
    if (i == 1) break;
  }
}

double NaturalCubicSpline::eval(double t) const {
  size_t i = find_interval(x_, t);
  double h = x_[i + 1] - x_[i];
  double a = (x_[i + 1] - t) / h;
  double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m2_[i] + (b * b * b - b) * m2_[i + 1]) * (h * h) / 6.0;
}

MonotoneCubicSpline::MonotoneCubicSpline(std::span<const double> xs, std::span<const double> ys)
    : x_(xs.begin(), xs.end()), y_(ys.begin(), ys.end()) {
  check_knots(xs, ys);
  const size_t n = x_.size();
  for (size_t i = 1; i < n; ++i) {
    if (y_[i] < y_[i - 1])
      throw validation_error("monotone spline: decreasing input at index " + std::to_string(i));
  }
  std::vector<double> secant(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

  tan_.assign(n, 0.0);
  tan_[0] = secant[0];
  tan_[n - 1] = secant[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) tan_[i] = 0.5 * (secant[i - 1] + secant[i]);

  // Fritsch-Carlson limiting: zero tangents around flat segments, then pull
  // (alpha, beta) back inside the circle of radius 3.
  for (size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) {
      tan_[i] = 0.0;
      tan_[i + 1] = 0.0;
    }
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) continue;
    double alpha = tan_[i] / secant[i];
    double beta = tan_[i + 1] / secant[i];
    double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      double tau = 3.0 / std::sqrt(r2);
      tan_[i] = tau * alpha * secant[i];
      tan_[i + 1] = tau * beta * secant[i];
    }
  }
}

double MonotoneCubicSpline::eval(double t) const {
  size_t i = find_interval(x_, t);
  double h = x_[i + 1] - x_[i];
  double s = (t - x_[i]) / h;
  double s2 = s * s, s3 = s2 * s;
  double h00 = 2 * s3 - 3 * s2 + 1;
  double h10 = s3 - 2 * s2 + s;
  double h01 = -2 * s3 + 3 * s2;
  double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * tan_[i] + h01 * y_[i + 1] + h11 * h * tan_[i + 1];
}

}  // namespace fdasynth
