#include "doctest.h"

#include <cmath>
#include <vector>

#include "fdasynth/rng.hpp"
#include "fdasynth/spline.hpp"
#include "fdasynth/types.hpp"

using namespace fdasynth;

namespace {

// Independent oracle: assemble the natural-spline second-derivative system
// as a dense matrix and solve it by Gaussian elimination with partial
// pivoting, then evaluate with the textbook piecewise formula.
std::vector<double> dense_natural_spline_m2(const std::vector<double>& x,
                                            const std::vector<double>& y) {
  const size_t n = x.size();
  const size_t dim = n - 2;
  std::vector<double> A(dim * dim, 0.0), rhs(dim, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    size_t r = i - 1;
    if (r > 0) A[r * dim + (r - 1)] = h0;
    A[r * dim + r] = 2.0 * (h0 + h1);
    if (r + 1 < dim) A[r * dim + (r + 1)] = h1;
    rhs[r] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  for (size_t c = 0; c < dim; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < dim; ++r)
      if (std::abs(A[r * dim + c]) > std::abs(A[piv * dim + c])) piv = r;
    if (piv != c) {
      for (size_t k = 0; k < dim; ++k) std::swap(A[c * dim + k], A[piv * dim + k]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (size_t r = c + 1; r < dim; ++r) {
      double f = A[r * dim + c] / A[c * dim + c];
      for (size_t k = c; k < dim; ++k) A[r * dim + k] -= f * A[c * dim + k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> sol(dim);
  for (size_t r = dim; r-- > 0;) {
    double s = rhs[r];
    for (size_t k = r + 1; k < dim; ++k) s -= A[r * dim + k] * sol[k];
    sol[r] = s / A[r * dim + r];
  }
  std::vector<double> m2(n, 0.0);
  for (size_t i = 0; i < dim; ++i) m2[i + 1] = sol[i];
  return m2;
}

double dense_natural_spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::vector<double>& m2, double t) {
  size_t i = 0;
  while (i + 2 < x.size() && t > x[i + 1]) ++i;
  double h = x[i + 1] - x[i];
  double a = (x[i + 1] - t) / h, b = (t - x[i]) / h;
  return a * y[i] + b * y[i + 1] +
         ((a * a * a - a) * m2[i] + (b * b * b - b) * m2[i + 1]) * h * h / 6.0;
}

}  // namespace

TEST_CASE("natural spline reproduces linear data exactly") {
  std::vector<double> x = {0.0, 0.2, 0.45, 0.8, 1.0};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 * v);
  NaturalCubicSpline s(x, y);
  Grid g = Grid::uniform(101);
  for (int j = 0; j < g.m; ++j) CHECK(std::abs(s.eval(g.x[j]) - 2.0 * g.x[j]) <= 1e-12);
}

TEST_CASE("two knots degenerate to linear interpolation") {
  std::vector<double> x = {0.0, 1.0}, y = {1.0, 3.0};
  NaturalCubicSpline s(x, y);
  CHECK(s.eval(0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.eval(0.25) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("random 6-knot spline matches the dense-solve oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x = {0.0, 0.15, 0.35, 0.6, 0.85, 1.0};
    std::vector<double> y(6);
    for (auto& v : y) v = 2.0 * rng.uniform01() - 1.0;
    NaturalCubicSpline s(x, y);
    auto m2 = dense_natural_spline_m2(x, y);
    for (size_t i = 0; i < x.size(); ++i) CHECK(std::abs(s.eval(x[i]) - y[i]) <= 1e-10);
    for (double t : {0.05, 0.3, 0.5, 0.77, 0.95})
      CHECK(s.eval(t) == doctest::Approx(dense_natural_spline_eval(x, y, m2, t)).epsilon(1e-10));
  }
}

TEST_CASE("duplicate knot abscissae are rejected") {
  std::vector<double> x = {0.0, 0.5, 0.5, 1.0}, y = {0, 1, 2, 3};
  CHECK_THROWS_AS(NaturalCubicSpline(x, y), Error);
}

TEST_CASE("monotone spline reproduces the identity") {
  std::vector<double> x = {0.0, 0.25, 0.5, 0.75, 1.0};
  MonotoneCubicSpline s(x, x);
  Grid g = Grid::uniform(101);
  for (int j = 0; j < g.m; ++j) CHECK(std::abs(s.eval(g.x[j]) - g.x[j]) <= 1e-12);
}

TEST_CASE("monotone spline stays flat on a step and never decreases") {
  std::vector<double> x = {0.0, 0.5, 1.0}, y = {0.0, 0.0, 1.0};
  MonotoneCubicSpline s(x, y);
  CHECK(s.eval(0.0) == 0.0);
  CHECK(s.eval(0.5) == doctest::Approx(0.0));
  CHECK(s.eval(0.25) == doctest::Approx(0.0));  // flat segment preserved
  double prev = s.eval(0.0);
  for (int j = 1; j <= 1000; ++j) {
    double v = s.eval(j / 1000.0);
    CHECK(v - prev >= -1e-12);
    prev = v;
  }
}

TEST_CASE("monotone spline is non-decreasing on random sorted knots (dense oracle)") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + static_cast<int>(rng.uniform_index(6));
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = i / static_cast<double>(n - 1);
    y[0] = 0.0;
    for (int i = 1; i < n; ++i) y[i] = y[i - 1] + rng.uniform01();
    MonotoneCubicSpline s(x, y);
    double prev = s.eval(0.0);
    double min_diff = 0.0;
    for (int j = 1; j < 10000; ++j) {
      double v = s.eval(j / 9999.0);
      min_diff = std::min(min_diff, v - prev);
      prev = v;
    }
    CHECK(min_diff >= -1e-12);
    for (int i = 0; i < n; ++i) CHECK(std::abs(s.eval(x[i]) - y[i]) <= 1e-10);
  }
}

TEST_CASE("monotone spline reports the first inversion index") {
  std::vector<double> x = {0.0, 0.3, 0.6, 1.0}, y = {0.0, 0.5, 0.4, 1.0};
  try {
    MonotoneCubicSpline s(x, y);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("index 2") != std::string::npos);
  }
}
