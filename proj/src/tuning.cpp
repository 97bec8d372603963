#include "fdasynth/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdasynth/align.hpp"
#include "fdasynth/parallel.hpp"

namespace fdasynth {

namespace {
std::vector<double> upper_triangle(std::span<const double> full, int n) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v.push_back(full[static_cast<size_t>(i) * n + j]);
  return v;
}

uint64_t trial_seed(uint64_t seed, size_t k_idx, size_t a_idx) {
  return Rng::mix(seed, (static_cast<uint64_t>(k_idx) << 20) + a_idx);
}

std::vector<std::vector<int>> cluster_members(const ClusterAssignment& clusters) {
  std::vector<std::vector<int>> members(clusters.G);
  for (size_t i = 0; i < clusters.labels.size(); ++i)
    members[clusters.labels[i] - 1].push_back(static_cast<int>(i));
  return members;
}
}  // namespace

TuneCriterion parse_criterion(const std::string& name) {
  if (name == "elbow") return TuneCriterion::elbow;
  if (name == "threshold") return TuneCriterion::threshold;
  throw validation_error("unknown tuning criterion: " + name);
}

void TuningGrid::validate() const {
  if (k_values.empty() || alpha_values.empty())
    throw validation_error("tuning grid must be nonempty");
  if (!std::is_sorted(k_values.begin(), k_values.end()) ||
      !std::is_sorted(alpha_values.begin(), alpha_values.end()))
    throw validation_error("tuning grids must be ascending");
  for (int k : k_values)
    if (k < 1) throw validation_error("K values must be >= 1");
  for (double a : alpha_values)
    if (a < 1.0) throw validation_error("alpha0 values must be >= 1");
  if (criterion == TuneCriterion::threshold && threshold_b <= 0.0)
    throw validation_error("threshold criterion requires a positive threshold");
  if (elbow_ratio <= 0.0 || elbow_ratio >= 1.0)
    throw validation_error("elbow ratio must lie in (0,1)");
}

DeltaSweepResult tune_delta(const DistanceMatrix& matrix, std::span<const double> delta_grid) {
  if (matrix.n < 3)
    throw validation_error("cophenetic correlation needs at least 3 curves");
  if (delta_grid.empty()) throw validation_error("empty delta grid");
  const int n = matrix.n;

  std::vector<double> amp_upper = upper_triangle(matrix.amplitude, n);
  std::vector<double> pha_upper = upper_triangle(matrix.phase, n);

  DeltaSweepResult res;
  for (double delta : delta_grid) {
    if (delta < 0.0 || delta > 1.0) throw validation_error("delta grid values must lie in [0,1]");
    std::vector<double> mixed(matrix.amplitude.size());
    for (size_t c = 0; c < mixed.size(); ++c)
      mixed[c] = delta * matrix.amplitude[c] + (1.0 - delta) * matrix.phase[c];
    Dendrogram tree = complete_linkage(mixed, n);
    std::vector<double> coph = cophenetic_matrix(tree);
    std::vector<double> coph_upper = upper_triangle(coph, n);
    double ca = pearson_correlation(coph_upper, amp_upper);
    double cp = pearson_correlation(coph_upper, pha_upper);
    res.deltas.push_back(delta);
    res.coph_corr_amp.push_back(ca);
    res.coph_corr_phase.push_back(cp);
    res.abs_diff.push_back(std::abs(ca - cp));
  }

  double best = std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < res.deltas.size(); ++t) {
    if (res.abs_diff[t] <= best) {  // ties resolved toward the largest delta
      best = res.abs_diff[t];
      res.chosen_delta = res.deltas[t];
    }
  }
  auto [lo, hi] = std::minmax_element(res.abs_diff.begin(), res.abs_diff.end());
  res.flat_flag = (*hi - *lo) < 0.02;
  if (res.flat_flag) res.chosen_delta = res.deltas.back();
  return res;
}

ClusterAssignment cluster_curves(const DistanceMatrix& matrix, const DynamicCutParams& params) {
  Dendrogram tree = complete_linkage(matrix.combined, matrix.n);
  return dynamic_cut(tree, params);
}

namespace {
// min over clusters of the min synthetic-to-original within-cluster distance;
// counts every evaluated pair
double min_distance_indicator(const CurveDataset& dataset, const std::vector<Srvf>& orig_srvfs,
                              const CurveDataset& synth, double delta,
                              const std::vector<std::vector<int>>& members, uint64_t* evals,
                              int jobs) {
  const Grid& g = dataset.grid;
  std::vector<Srvf> synth_srvfs = dataset_srvfs(synth);

  std::vector<std::pair<int, int>> pairs;  // (synthetic index, original index)
  for (const auto& cluster : members)
    for (int i : cluster)
      for (int j : cluster) pairs.emplace_back(i, j);
  if (evals) *evals = pairs.size();

  std::vector<double> dists(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), jobs, [&](int t) {
    auto [i, j] = pairs[t];
    PairDistance d = pair_distance(synth_srvfs[i], orig_srvfs[j], g);
    dists[t] = delta * d.amplitude + (1.0 - delta) * d.phase;
  });
  return *std::min_element(dists.begin(), dists.end());
}
}  // namespace

void tune_alpha_per_k(const CurveDataset& dataset, const DistanceMatrix& matrix,
                      const ClusterAssignment& clusters, const TuningGrid& grid,
                      TuningReport& report, int jobs) {
  grid.validate();
  auto members = cluster_members(clusters);
  std::vector<Srvf> orig_srvfs = dataset_srvfs(dataset);

  report.k_values = grid.k_values;
  report.alpha_values = grid.alpha_values;
  report.criterion = grid.criterion == TuneCriterion::elbow ? "elbow" : "threshold";
  report.threshold_b = grid.threshold_b;
  report.seed = grid.seed;
  report.I1.assign(grid.k_values.size(), std::vector<double>(grid.alpha_values.size(), 0.0));
  report.alpha_hat_per_k.assign(grid.k_values.size(),
                                std::numeric_limits<double>::quiet_NaN());
  report.satisfiable.assign(grid.k_values.size(), false);

  for (size_t ki = 0; ki < grid.k_values.size(); ++ki) {
    for (size_t ai = 0; ai < grid.alpha_values.size(); ++ai) {
      SynthesisConfig config;
      config.k = grid.k_values[ki];
      config.alpha0 = grid.alpha_values[ai];
      config.delta = matrix.delta;
      config.seed = trial_seed(grid.seed, ki, ai);
      auto [synth, synth_report] = synthesize_all(dataset, matrix, config, jobs);
      uint64_t evals = 0;
      report.I1[ki][ai] = min_distance_indicator(dataset, orig_srvfs, synth, matrix.delta,
                                                 members, &evals, jobs);
      report.distance_evals_per_trial = evals;
    }

    const auto& curve = report.I1[ki];
    const auto& alphas = grid.alpha_values;
    if (grid.criterion == TuneCriterion::threshold) {
      for (size_t ai = 0; ai < alphas.size(); ++ai) {
        if (curve[ai] > grid.threshold_b) {
          report.alpha_hat_per_k[ki] = alphas[ai];
          report.satisfiable[ki] = true;
          break;
        }
      }
      if (!report.satisfiable[ki])
        report.warnings.push_back("K=" + std::to_string(grid.k_values[ki]) +
                                  ": no alpha0 exceeds the privacy threshold");
    } else {
      if (alphas.size() == 1) {
        report.alpha_hat_per_k[ki] = alphas[0];
        report.satisfiable[ki] = true;
      } else {
        std::vector<double> diffs(alphas.size() - 1);
        for (size_t t = 0; t + 1 < alphas.size(); ++t) diffs[t] = curve[t + 1] - curve[t];
        double maxd = *std::max_element(diffs.begin(), diffs.end());
        if (maxd <= 0.0) {
          // indicator never grows: it is already stable at the first point
          report.alpha_hat_per_k[ki] = alphas[0];
          report.satisfiable[ki] = true;
        } else {
          for (size_t t = 0; t < diffs.size(); ++t) {
            if (diffs[t] < grid.elbow_ratio * maxd) {
              report.alpha_hat_per_k[ki] = alphas[t];
              report.satisfiable[ki] = true;
              break;
            }
          }
          if (!report.satisfiable[ki])
            report.warnings.push_back("K=" + std::to_string(grid.k_values[ki]) +
                                      ": minimum-distance curve never stabilizes");
        }
      }
    }
  }
}

void tune_k(const CurveDataset& dataset, const DistanceMatrix& matrix,
            const ClusterAssignment& clusters, const TuningGrid& grid, TuningReport& report,
            int jobs) {
  auto members = cluster_members(clusters);
  const Grid& g = dataset.grid;

  report.rho_per_k.assign(grid.k_values.size(), {});
  report.I2.assign(grid.k_values.size(), std::numeric_limits<double>::quiet_NaN());

  // original within-cluster structure is a submatrix of the global one
  std::vector<std::vector<double>> orig_upper(members.size());
  for (size_t c = 0; c < members.size(); ++c) {
    const auto& mem = members[c];
    for (size_t a = 0; a < mem.size(); ++a)
      for (size_t b = a + 1; b < mem.size(); ++b)
        orig_upper[c].push_back(matrix.comb(mem[a], mem[b]));
  }

  double best_i2 = -std::numeric_limits<double>::infinity();
  for (size_t ki = 0; ki < grid.k_values.size(); ++ki) {
    if (!report.satisfiable[ki]) continue;
    size_t ai = 0;
    while (ai < grid.alpha_values.size() &&
           grid.alpha_values[ai] != report.alpha_hat_per_k[ki])
      ++ai;

    SynthesisConfig config;
    config.k = grid.k_values[ki];
    config.alpha0 = report.alpha_hat_per_k[ki];
    config.delta = matrix.delta;
    config.seed = trial_seed(grid.seed, ki, ai);
    auto [synth, synth_report] = synthesize_all(dataset, matrix, config, jobs);
    std::vector<Srvf> synth_srvfs = dataset_srvfs(synth);

    std::vector<double> rhos;
    for (size_t c = 0; c < members.size(); ++c) {
      const auto& mem = members[c];
      if (mem.size() < 3) {
        report.warnings.push_back("cluster " + std::to_string(c + 1) +
                                  " has fewer than 3 curves; skipped from rho");
        continue;
      }
      std::vector<std::pair<int, int>> pairs;
      for (size_t a = 0; a < mem.size(); ++a)
        for (size_t b = a + 1; b < mem.size(); ++b) pairs.emplace_back(mem[a], mem[b]);
      std::vector<double> synth_upper(pairs.size());
      parallel_for(static_cast<int>(pairs.size()), jobs, [&](int t) {
        auto [i, j] = pairs[t];
        PairDistance d = pair_distance(synth_srvfs[i], synth_srvfs[j], g);
        synth_upper[t] = matrix.delta * d.amplitude + (1.0 - matrix.delta) * d.phase;
      });
      rhos.push_back(std::abs(pearson_correlation(synth_upper, orig_upper[c])));
    }
    report.rho_per_k[ki] = rhos;
    if (rhos.empty()) {
      report.warnings.push_back("K=" + std::to_string(grid.k_values[ki]) +
                                ": no cluster large enough for correlation");
      continue;
    }
    report.I2[ki] = percentile_linear(rhos, 0.25);
    if (report.I2[ki] > best_i2) {  // strict: ties keep the smaller K
      best_i2 = report.I2[ki];
      report.chosen_k = grid.k_values[ki];
      report.chosen_alpha0 = report.alpha_hat_per_k[ki];
      report.satisfied = true;
    }
  }
  if (!report.satisfied)
    report.warnings.push_back("no satisfiable (K, alpha0) combination; tuning is unsatisfied");
}

TuningReport tune(const CurveDataset& dataset, const DistanceMatrix& matrix,
                  const ClusterAssignment& clusters, const TuningGrid& grid, int jobs) {
  TuningReport report;
  tune_alpha_per_k(dataset, matrix, clusters, grid, report, jobs);
  tune_k(dataset, matrix, clusters, grid, report, jobs);
  return report;
}

}  // namespace fdasynth
