#include "fdasynth/align.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fdasynth {

namespace {
constexpr int kMaxOffset = 6;

// Along an edge with step (di, dj), the warp hits u = (b + dj*s/di) * dx at
// sample s. The fractional cell positions are rationals k/di, so q2 can be
// pre-interpolated once per distinct fraction instead of per edge.
struct StepInfo {
  int di, dj;
  double sqrt_slope;
  std::array<int, kMaxOffset + 1> cell_ofs;  // floor(dj*s / di), s = 0..di
  std::array<int, kMaxOffset + 1> frac_id;   // index into the fraction universe
};

struct StepTables {
  std::array<StepInfo, kAlignStepCount> steps;
  std::vector<double> fractions;  // distinct values k/d, d <= kMaxOffset
};

const StepTables& step_tables() {
  static const StepTables tables = [] {
    StepTables t;
    auto frac_index = [&t](int num, int den) {
      double value = static_cast<double>(num) / den;
      for (size_t f = 0; f < t.fractions.size(); ++f)
        if (t.fractions[f] == value) return static_cast<int>(f);
      t.fractions.push_back(value);
      return static_cast<int>(t.fractions.size() - 1);
    };
    for (int s = 0; s < kAlignStepCount; ++s) {
      StepInfo& info = t.steps[s];
      info.di = kAlignSteps[s][0];
      info.dj = kAlignSteps[s][1];
      info.sqrt_slope = std::sqrt(static_cast<double>(info.dj) / info.di);
      for (int k = 0; k <= info.di; ++k) {
        info.cell_ofs[k] = (info.dj * k) / info.di;
        info.frac_id[k] = frac_index(info.dj * k % info.di, info.di);
      }
    }
    return t;
  }();
  return tables;
}
}  // namespace

double align_edge_cost(const Srvf& q1, const Srvf& q2, const Grid& g, int a, int b, int i,
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
    double w = (t == a || t == i) ? dx / 2.0 : dx;
    total += w * d2;
  }
  return total;
}

AlignResult align(const Srvf& q1, const Srvf& q2, const Grid& g) {
  const int m = g.m;
  const int p = q1.values.cols;
  const double dx = g.dx();
  const StepTables& tables = step_tables();
  const int nfrac = static_cast<int>(tables.fractions.size());

  // q2 linearly interpolated at every (cell, fraction) pair
  std::vector<double> q2i(static_cast<size_t>(nfrac) * m * p);
  for (int f = 0; f < nfrac; ++f) {
    double frac = tables.fractions[f];
    double* out = &q2i[static_cast<size_t>(f) * m * p];
    for (int c = 0; c < m; ++c) {
      if (frac == 0.0 || c == m - 1) {
        for (int d = 0; d < p; ++d) out[c * p + d] = q2.values(c, d);
      } else {
        for (int d = 0; d < p; ++d)
          out[c * p + d] = q2.values(c, d) + frac * (q2.values(c + 1, d) - q2.values(c, d));
      }
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<size_t>(m) * m, inf);
  std::vector<int8_t> from(static_cast<size_t>(m) * m, -1);
  cost[0] = 0.0;

  auto run_dp = [&](auto pc) {
    constexpr int P = decltype(pc)::value;
    for (int i = 1; i < m; ++i) {
      for (int j = 1; j < m; ++j) {
        double best = inf;
        int8_t best_step = -1;
        for (int s = 0; s < kAlignStepCount; ++s) {
          const StepInfo& step = tables.steps[s];
          int a = i - step.di;
          int b = j - step.dj;
          if (a < 0 || b < 0) continue;
          double base = cost[static_cast<size_t>(a) * m + b];
          if (base >= best) continue;  // edge costs are non-negative
          double edge = 0.0;
          const int pp = P > 0 ? P : p;
          for (int k = 0; k <= step.di; ++k) {
            const double* q2row =
                &q2i[(static_cast<size_t>(step.frac_id[k]) * m + b + step.cell_ofs[k]) * pp];
            const double* q1row = &q1.values.a[static_cast<size_t>(a + k) * pp];
            double d2 = 0.0;
            for (int d = 0; d < pp; ++d) {
              double diff = q1row[d] - q2row[d] * step.sqrt_slope;
              d2 += diff * diff;
            }
            edge += (k == 0 || k == step.di) ? 0.5 * dx * d2 : dx * d2;
          }
          double c = base + edge;
          if (c < best) {
            best = c;
            best_step = static_cast<int8_t>(s);
          }
        }
        cost[static_cast<size_t>(i) * m + j] = best;
        from[static_cast<size_t>(i) * m + j] = best_step;
      }
    }
  };
  if (p == 3)
    run_dp(std::integral_constant<int, 3>{});
  else if (p == 1)
    run_dp(std::integral_constant<int, 1>{});
  else
    run_dp(std::integral_constant<int, 0>{});

  AlignResult res;
  res.dp_cost = cost[static_cast<size_t>(m - 1) * m + (m - 1)];
  std::vector<std::pair<int, int>> path;
  int ci = m - 1, cj = m - 1;
  path.emplace_back(ci, cj);
  while (ci != 0 || cj != 0) {
    int8_t s = from[static_cast<size_t>(ci) * m + cj];
    ci -= kAlignSteps[s][0];
    cj -= kAlignSteps[s][1];
    path.emplace_back(ci, cj);
  }
  std::reverse(path.begin(), path.end());

  res.gamma.gamma.assign(m, 0.0);
  for (size_t v = 0; v + 1 < path.size(); ++v) {
    auto [a, b] = path[v];
    auto [i, j] = path[v + 1];
    double slope = static_cast<double>(j - b) / static_cast<double>(i - a);
    for (int t = a; t < i; ++t) res.gamma.gamma[t] = g.x[b] + slope * (g.x[t] - g.x[a]);
  }
  res.gamma.gamma[m - 1] = 1.0;
  res.gamma.gamma[0] = 0.0;

  res.aligned = warp_srvf(q2, res.gamma, g);
  return res;
}

double amplitude_distance(const Srvf& q1, const Srvf& q2, const Grid& g) {
  AlignResult r = align(q1, q2, g);
  return l2_dist(q1.values, r.aligned.values, g);
}

double phase_distance_of(const Warping& gamma, const Grid& g) {
  std::vector<double> gdot = fd_derivative(gamma.gamma, g);
  double inner = 0.0;
  for (int j = 0; j < g.m; ++j) inner += g.w(j) * std::sqrt(std::max(gdot[j], 0.0));
  inner = std::clamp(inner, 0.0, 1.0);
  return std::acos(inner);
}

double phase_distance(const Srvf& q1, const Srvf& q2, const Grid& g) {
  AlignResult r = align(q1, q2, g);
  return phase_distance_of(r.gamma, g);
}

PairDistance pair_distance(const Srvf& q1, const Srvf& q2, const Grid& g) {
  AlignResult r = align(q1, q2, g);
  PairDistance d;
  d.amplitude = l2_dist(q1.values, r.aligned.values, g);
  d.phase = phase_distance_of(r.gamma, g);
  return d;
}

}  // namespace fdasynth
