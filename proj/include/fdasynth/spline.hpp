#pragma once

#include <span>
#include <vector>

namespace fdasynth {

// Natural cubic spline interpolant: second derivative zero at both ends.
// Two knots degenerate to linear interpolation.
class NaturalCubicSpline {
public:
  NaturalCubicSpline(std::span<const double> xs, std::span<const double> ys);
  double eval(double t) const;

private:
  std::vector<double> x_, y_, m2_;  // knots and second derivatives
};

// Monotone cubic Hermite interpolant with Fritsch-Carlson tangent limiting.
// Non-decreasing input yields a non-decreasing interpolant.
class MonotoneCubicSpline {
public:
  MonotoneCubicSpline(std::span<const double> xs, std::span<const double> ys);
  double eval(double t) const;

private:
  std::vector<double> x_, y_, tan_;
};

}  // namespace fdasynth
