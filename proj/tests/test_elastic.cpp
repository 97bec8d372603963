#include "doctest.h"

#include <cmath>
#include <functional>
#include <limits>

#include "fdasynth/align.hpp"
#include "fdasynth/distance.hpp"
#include "fdasynth/srvf.hpp"
#include "helpers.hpp"

using namespace fdasynth;
using namespace fdatest;

namespace {
Curve make_1d(const Grid& g, const std::function<double(double)>& f) {
  Curve c;
  c.values = Mat(g.m, 1);
  for (int j = 0; j < g.m; ++j) c.values(j, 0) = f(g.x[j]);
  return c;
}

// Exhaustive minimum over all monotone lattice paths with the DP's step set.
// Edge costs are computed here from the textbook formula (interpolation at a
// floating-point warp argument), independent of the DP implementation.
double oracle_edge_cost(const Srvf& q1, const Srvf& q2, const Grid& g, int a, int b, int i,
                        int j) {
  const int p = q1.values.cols;
  const double dx = g.dx();
  const double slope = static_cast<double>(j - b) / static_cast<double>(i - a);
  const double sq = std::sqrt(slope);
  double total = 0.0;
  for (int t = a; t <= i; ++t) {
    double u = g.x[b] + slope * (g.x[t] - g.x[a]);
    double d2 = 0.0;
    for (int d = 0; d < p; ++d) {
      double diff = q1.values(t, d) - interp_column(q2.values, g, d, u) * sq;
      d2 += diff * diff;
    }
    total += ((t == a || t == i) ? dx / 2.0 : dx) * d2;
  }
  return total;
}

double brute_force_alignment_cost(const Srvf& q1, const Srvf& q2, const Grid& g) {
  const int m = g.m;
  // memoized edge costs so the multi-million-path enumeration stays fast
  std::vector<double> edge(static_cast<size_t>(m) * m * kAlignStepCount,
                           std::numeric_limits<double>::quiet_NaN());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int s = 0; s < kAlignStepCount; ++s) {
        int i = a + kAlignSteps[s][0], j = b + kAlignSteps[s][1];
        if (i < m && j < m)
          edge[(static_cast<size_t>(a) * m + b) * kAlignStepCount + s] =
              oracle_edge_cost(q1, q2, g, a, b, i, j);
      }

  double best = std::numeric_limits<double>::infinity();
  struct Node {
    int i, j;
    double cost;
  };
  std::vector<Node> stack;
  stack.push_back({0, 0, 0.0});
  while (!stack.empty()) {
    Node node = stack.back();
    stack.pop_back();
    if (node.i == m - 1 && node.j == m - 1) {
      best = std::min(best, node.cost);
      continue;
    }
    for (int s = 0; s < kAlignStepCount; ++s) {
      int ni = node.i + kAlignSteps[s][0];
      int nj = node.j + kAlignSteps[s][1];
      if (ni >= m || nj >= m) continue;
      double c =
          node.cost + edge[(static_cast<size_t>(node.i) * m + node.j) * kAlignStepCount + s];
      stack.push_back({ni, nj, c});
    }
  }
  return best;
}
}  // namespace

TEST_CASE("srvf of the identity ramp is constant 1") {
  Grid g = Grid::uniform(101);
  Curve f = make_1d(g, [](double x) { return x; });
  Srvf q = to_srvf(f, g);
  for (int j = 0; j < g.m; ++j) CHECK(q.values(j, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("srvf of a constant curve is zero") {
  Grid g = Grid::uniform(101);
  Curve f = make_1d(g, [](double) { return 0.37; });
  Srvf q = to_srvf(f, g);
  for (int j = 0; j < g.m; ++j) CHECK(q.values(j, 0) == 0.0);
}

TEST_CASE("srvf of (x, 2x, 0) matches the hand computation") {
  // f_dot = (1,2,0), |f_dot| = sqrt(5), q = (1,2,0) / 5^(1/4)
  Grid g = Grid::uniform(101);
  Curve f;
  f.values = Mat(g.m, 3);
  for (int j = 0; j < g.m; ++j) {
    f.values(j, 0) = g.x[j];
    f.values(j, 1) = 2.0 * g.x[j];
    f.values(j, 2) = 0.0;
  }
  Srvf q = to_srvf(f, g);
  const double scale = 1.0 / std::pow(5.0, 0.25);
  for (int j = 1; j < g.m - 1; ++j) {
    CHECK(q.values(j, 0) == doctest::Approx(scale).epsilon(1e-6));
    CHECK(q.values(j, 1) == doctest::Approx(2.0 * scale).epsilon(1e-6));
    CHECK(q.values(j, 2) == doctest::Approx(0.0).epsilon(1e-6));
  }
}

TEST_CASE("from_srvf integrates a unit srvf to the identity ramp") {
  Grid g = Grid::uniform(101);
  Srvf q;
  q.values = Mat(g.m, 1);
  for (int j = 0; j < g.m; ++j) q.values(j, 0) = 1.0;
  double start[1] = {0.0};
  Curve f = from_srvf(q, g, start);
  for (int j = 0; j < g.m; ++j) CHECK(std::abs(f.values(j, 0) - g.x[j]) <= 1e-3);
  CHECK(f.values(0, 0) == 0.0);
}

TEST_CASE("from_srvf of zero srvf is the constant start") {
  Grid g = Grid::uniform(51);
  Srvf q;
  q.values = Mat(g.m, 2);
  double start[2] = {1.5, -0.5};
  Curve f = from_srvf(q, g, start);
  for (int j = 0; j < g.m; ++j) {
    CHECK(f.values(j, 0) == 1.5);
    CHECK(f.values(j, 1) == -0.5);
  }
}

TEST_CASE("srvf roundtrip error shrinks at least linearly with grid size") {
  Rng rng(2024);
  double err_101 = 0.0, err_1001 = 0.0;
  Grid g101 = Grid::uniform(101);
  Grid g1001 = Grid::uniform(1001);
  for (int t = 0; t < 10; ++t) {
    // evaluate the same analytic curve on both grids
    uint64_t curve_seed = rng.next_u64();
    for (auto* grid : {&g101, &g1001}) {
      Rng crng(curve_seed);
      Curve f = random_smooth_curve(crng, *grid, 3);
      Srvf q = to_srvf(f, *grid);
      std::vector<double> start = {f.values(0, 0), f.values(0, 1), f.values(0, 2)};
      Curve back = from_srvf(q, *grid, start);
      double err = max_abs_diff(f.values, back.values);
      (grid == &g101 ? err_101 : err_1001) = std::max(grid == &g101 ? err_101 : err_1001, err);
    }
  }
  CHECK(err_101 <= 5e-2);
  CHECK(err_1001 <= err_101 / 5.0);
}

TEST_CASE("identity warping leaves the srvf unchanged") {
  Grid g = Grid::uniform(101);
  Rng rng(5);
  Curve f = random_smooth_curve(rng, g, 3);
  Srvf q = to_srvf(f, g);
  Srvf w = warp_srvf(q, Warping::identity(g), g);
  CHECK(max_abs_diff(q.values, w.values) <= 1e-9);
}

TEST_CASE("warping q=1 by x^2 gives sqrt(2x)") {
  Grid g = Grid::uniform(101);
  Srvf q;
  q.values = Mat(g.m, 1);
  for (int j = 0; j < g.m; ++j) q.values(j, 0) = 1.0;
  Warping gamma;
  gamma.gamma.resize(g.m);
  for (int j = 0; j < g.m; ++j) gamma.gamma[j] = g.x[j] * g.x[j];
  gamma.gamma[g.m - 1] = 1.0;
  Srvf w = warp_srvf(q, gamma, g);
  for (int j = 5; j < g.m; ++j)
    CHECK(w.values(j, 0) == doctest::Approx(std::sqrt(2.0 * g.x[j])).epsilon(1e-2));
}

TEST_CASE("warping preserves the L2 norm approximately") {
  Grid g = Grid::uniform(101);
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    Curve f = random_smooth_curve(rng, g, 3);
    Srvf q = to_srvf(f, g);
    Warping gamma = random_warping(rng, g);
    Srvf w = warp_srvf(q, gamma, g);
    CHECK(l2_norm(w.values, g) == doctest::Approx(l2_norm(q.values, g)).epsilon(1e-2));
  }
}

TEST_CASE("warping acts by isometries on srvf differences") {
  Grid g = Grid::uniform(101);
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    Srvf q1 = to_srvf(random_smooth_curve(rng, g, 3), g);
    Srvf q2 = to_srvf(random_smooth_curve(rng, g, 3), g);
    Warping gamma = random_warping(rng, g);
    Srvf w1 = warp_srvf(q1, gamma, g);
    Srvf w2 = warp_srvf(q2, gamma, g);
    double before = l2_dist(q1.values, q2.values, g);
    double after = l2_dist(w1.values, w2.values, g);
    CHECK(std::abs(after - before) <= 2e-2 * before);
  }
}

TEST_CASE("self-alignment returns the identity warping") {
  Grid g = Grid::uniform(101);
  Rng rng(8);
  Curve f = random_smooth_curve(rng, g, 3);
  Srvf q = to_srvf(f, g);
  AlignResult r = align(q, q, g);
  for (int j = 0; j < g.m; ++j) CHECK(std::abs(r.gamma.gamma[j] - g.x[j]) <= 1e-12);
  CHECK(l2_dist(q.values, r.aligned.values, g) <= 1e-6 * l2_norm(q.values, g) + 1e-9);
}

TEST_CASE("alignment recovers a synthetic warp") {
  Grid g = Grid::uniform(101);
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    Curve f = random_smooth_curve(rng, g, 3);
    Srvf q1 = to_srvf(f, g);
    Warping gamma = random_warping(rng, g);
    Srvf q2 = warp_srvf(q1, gamma, g);
    // q2 is a warp of q1, so the optimal aligned distance is near zero
    AlignResult r = align(q1, q2, g);
    CHECK(l2_dist(q1.values, r.aligned.values, g) <= 0.05 * l2_norm(q1.values, g));
  }
}

TEST_CASE("dp alignment matches exhaustive path enumeration on small grids") {
  Grid g = Grid::uniform(15);
  Rng rng(10);
  for (int t = 0; t < 5; ++t) {
    Srvf q1 = to_srvf(random_smooth_curve(rng, g, 2), g);
    Srvf q2 = to_srvf(random_smooth_curve(rng, g, 2), g);
    AlignResult r = align(q1, q2, g);
    double brute = brute_force_alignment_cost(q1, q2, g);
    CHECK(std::abs(r.dp_cost - brute) <= 1e-9);
  }
}

TEST_CASE("amplitude distance of a curve to itself is zero") {
  Grid g = Grid::uniform(101);
  Rng rng(11);
  Curve f = random_smooth_curve(rng, g, 3);
  Srvf q = to_srvf(f, g);
  CHECK(amplitude_distance(q, q, g) <= 1e-9);
}

TEST_CASE("amplitude distance is translation invariant") {
  Grid g = Grid::uniform(101);
  Rng rng(12);
  Curve f = random_smooth_curve(rng, g, 3);
  Curve shifted = f;
  for (int j = 0; j < g.m; ++j) {
    shifted.values(j, 0) += 12.3;
    shifted.values(j, 1) -= 4.56;
    shifted.values(j, 2) += 0.789;
  }
  Srvf q1 = to_srvf(f, g);
  Srvf q2 = to_srvf(shifted, g);
  CHECK(amplitude_distance(q1, q2, g) <= 1e-9);
}

TEST_CASE("amplitude distance between reparameterizations is a near-zero semi-distance") {
  Grid g = Grid::uniform(101);
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    Curve f = random_smooth_curve(rng, g, 3);
    Warping gamma = random_warping(rng, g);
    Curve fg = compose(f, gamma, g);
    Srvf q1 = to_srvf(f, g);
    Srvf q2 = to_srvf(fg, g);
    CHECK(amplitude_distance(q1, q2, g) <= 0.05 * l2_norm(q1.values, g));
  }
}

TEST_CASE("1-d ramps x and 2x have amplitude distance sqrt(2)-1") {
  Grid g = Grid::uniform(101);
  Curve f1 = make_1d(g, [](double x) { return x; });
  Curve f2 = make_1d(g, [](double x) { return 2.0 * x; });
  Srvf q1 = to_srvf(f1, g);
  Srvf q2 = to_srvf(f2, g);
  // identity is optimal here: both srvfs are constant, any warp only hurts
  CHECK(amplitude_distance(q1, q2, g) ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-3));

  Grid small = Grid::uniform(15);
  Srvf s1 = to_srvf(make_1d(small, [](double x) { return x; }), small);
  Srvf s2 = to_srvf(make_1d(small, [](double x) { return 2.0 * x; }), small);
  AlignResult r = align(s1, s2, small);
  CHECK(std::abs(r.dp_cost - brute_force_alignment_cost(s1, s2, small)) <= 1e-12);
  for (int j = 0; j < small.m; ++j)
    CHECK(std::abs(r.gamma.gamma[j] - small.x[j]) <= 1e-12);
}

TEST_CASE("phase distance of the identity is zero") {
  Grid g = Grid::uniform(101);
  CHECK(phase_distance_of(Warping::identity(g), g) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("phase distance of x^2 matches the closed form") {
  // integral of sqrt(2x) over [0,1] is 2*sqrt(2)/3; D_p = arccos of that
  Grid g = Grid::uniform(201);
  Warping gamma;
  gamma.gamma.resize(g.m);
  for (int j = 0; j < g.m; ++j) gamma.gamma[j] = g.x[j] * g.x[j];
  gamma.gamma[g.m - 1] = 1.0;
  double expected = std::acos(2.0 * std::sqrt(2.0) / 3.0);
  CHECK(phase_distance_of(gamma, g) == doctest::Approx(expected).epsilon(5e-3 / expected));

  // dense-quadrature oracle for the inner product
  const int dense = 2000001;
  double inner = 0.0;
  for (int j = 0; j < dense; ++j) {
    double x = j / static_cast<double>(dense - 1);
    double w = (j == 0 || j == dense - 1) ? 0.5 : 1.0;
    inner += w * std::sqrt(2.0 * x) / (dense - 1);
  }
  CHECK(std::acos(inner) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("phase distance stays within [0, pi/2]") {
  Grid g = Grid::uniform(101);
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    Warping gamma = random_warping(rng, g, 1.5);
    double d = phase_distance_of(gamma, g);
    CHECK(d >= 0.0);
    CHECK(d <= 3.14159265358979 / 2.0);
  }
}

TEST_CASE("distance matrix: delta endpoints and symmetry") {
  Grid g = Grid::uniform(51);
  Rng rng(15);
  CurveDataset ds;
  ds.grid = g;
  for (int i = 0; i < 6; ++i) {
    Curve c = random_smooth_curve(rng, g, 3);
    c.id = "c" + std::to_string(i);
    ds.curves.push_back(c);
  }
  DistanceMatrix m1 = distance_matrix(ds, 1.0);
  DistanceMatrix m0 = distance_matrix(ds, 0.0);
  for (int i = 0; i < m1.n; ++i) {
    CHECK(m1.comb(i, i) == 0.0);
    for (int j = 0; j < m1.n; ++j) {
      CHECK(m1.comb(i, j) == m1.amp(i, j));        // delta = 1: exactly amplitude
      CHECK(m0.comb(i, j) == m0.pha(i, j));        // delta = 0: exactly phase
      CHECK(m1.amp(i, j) == m1.amp(j, i));         // symmetric by construction
      CHECK(m1.pha(i, j) == m1.pha(j, i));
    }
  }
}

TEST_CASE("duplicated curve has near-zero off-diagonal distance") {
  Grid g = Grid::uniform(101);
  Rng rng(16);
  CurveDataset ds;
  ds.grid = g;
  Curve c = random_smooth_curve(rng, g, 3);
  c.id = "a";
  ds.curves.push_back(c);
  c.id = "b";
  ds.curves.push_back(c);
  DistanceMatrix m = distance_matrix(ds, 0.5);
  CHECK(m.comb(0, 1) <= 1e-6);
}

TEST_CASE("distance matrix is identical for any worker count") {
  Grid g = Grid::uniform(51);
  Rng rng(17);
  CurveDataset ds;
  ds.grid = g;
  for (int i = 0; i < 8; ++i) {
    Curve c = random_smooth_curve(rng, g, 3);
    c.id = "c" + std::to_string(i);
    ds.curves.push_back(c);
  }
  DistanceMatrix serial = distance_matrix(ds, 0.7, 1);
  DistanceMatrix parallel = distance_matrix(ds, 0.7, 4);
  CHECK(serial.amplitude == parallel.amplitude);
  CHECK(serial.phase == parallel.phase);
  CHECK(serial.combined == parallel.combined);
}

TEST_CASE("remix recombines without re-alignment") {
  Grid g = Grid::uniform(51);
  Rng rng(18);
  CurveDataset ds;
  ds.grid = g;
  for (int i = 0; i < 5; ++i) {
    Curve c = random_smooth_curve(rng, g, 3);
    c.id = "c" + std::to_string(i);
    ds.curves.push_back(c);
  }
  DistanceMatrix m = distance_matrix(ds, 1.0);
  DistanceMatrix direct = distance_matrix(ds, 0.25);
  m.remix(0.25);
  CHECK(m.delta == 0.25);
  for (size_t c = 0; c < m.combined.size(); ++c)
    CHECK(m.combined[c] == doctest::Approx(direct.combined[c]).epsilon(1e-15));
}
