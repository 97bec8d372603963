#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdasynth/distance.hpp"
#include "fdasynth/evaluate.hpp"
#include "fdasynth/functional.hpp"
#include "fdasynth/ingest.hpp"
#include "fdasynth/serial.hpp"
#include "fdasynth/synthesis.hpp"
#include "fdasynth/toygen.hpp"
#include "fdasynth/tuning.hpp"

using namespace fdasynth;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw validation_error("missing input file: " + p.string());
}

std::vector<double> parse_range(const std::string& spec) {
  // "start:end:step" inclusive, or a single value
  std::vector<double> out;
  size_t c1 = spec.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(spec));
    return out;
  }
  size_t c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw validation_error("bad range (want start:end:step): " + spec);
  double start = std::stod(spec.substr(0, c1));
  double end = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(spec.substr(c2 + 1));
  if (step <= 0.0) throw validation_error("range step must be positive: " + spec);
  for (int i = 0;; ++i) {
    double v = start + i * step;
    if (v > end + 1e-9) break;
    out.push_back(std::abs(v - end) <= 1e-9 ? end : v);
  }
  return out;
}

std::vector<int> parse_int_range(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_range(spec)) out.push_back(static_cast<int>(std::llround(v)));
  return out;
}

void check_finite(const CurveDataset& ds, const std::string& what) {
  for (const auto& c : ds.curves)
    for (double v : c.values.a)
      if (!std::isfinite(v))
        throw numerical_error("non-finite value in " + what + " (curve " + c.id + ")");
}

// ---------------------------------------------------------------------------
// stage configs and implementations, shared by subcommands and the pipeline

struct IngestFlags {
  std::string input, output, rejects;
  FilterPolicy policy;
  double max_gap_km = 3.0, max_gap_min = 30.0;
  std::string projection = "local";
  std::string orientation = "max0";
};

void run_ingest(const IngestFlags& flags) {
  require_file(flags.input);
  std::ifstream in(flags.input);
  if (!in) throw validation_error("cannot open input file: " + flags.input);
  ParseResult parsed = parse_signals(in);

  ProjectionMode mode = parse_projection_mode(flags.projection);
  if (parsed.trajectories.empty())
    throw validation_error("no valid trajectories in " + flags.input);
  ProjectionRef ref = projection_reference(parsed.trajectories, mode);
  std::vector<PlanarTrajectory> planar;
  planar.reserve(parsed.trajectories.size());
  for (const auto& t : parsed.trajectories) planar.push_back(project_planar(t, ref));

  FilterPolicy policy = flags.policy;
  policy.max_gap_space = flags.max_gap_km * 1000.0;
  policy.max_gap_time = flags.max_gap_min * 60.0;
  FilterOutcome filtered = filter_trajectories(std::move(planar), policy);
  if (filtered.kept.empty())
    throw validation_error("all trajectories were filtered out");

  bool spatial_max0 = flags.orientation == "max0";
  auto [normalized, params] = normalize(filtered.kept, spatial_max0);

  save_ndjson(normalized, flags.output);
  save_sidecar(params, ref, sidecar_path(flags.output));
  if (!flags.rejects.empty()) save_rejects(parsed, filtered.dropped, flags.rejects);

  std::cerr << "ingest: " << normalized.size() << " trajectories kept, "
            << filtered.dropped.size() << " filtered, " << parsed.rejected_rows.size()
            << " rows rejected\n";
}

struct SmoothFlags {
  std::string input, output;
  int grid_size = 101;
};

void run_smooth(const SmoothFlags& flags) {
  require_file(flags.input);
  auto trajs = load_ndjson(flags.input);
  auto [norm, proj] = load_sidecar(sidecar_path(flags.input));
  Grid grid = Grid::uniform(flags.grid_size);
  CurveDataset ds = build_dataset(trajs, grid, norm);
  ds.metadata["projection"] = projection_mode_name(proj.mode);
  check_finite(ds, "smoothed curves");
  save_curves(ds, flags.output);
  std::cerr << "smooth: " << ds.curves.size() << " curves on m=" << grid.m << "\n";
}

struct DistFlags {
  std::string input, output;
  double delta = 1.0;
  int jobs = default_jobs();
};

void run_dist(const DistFlags& flags) {
  require_file(flags.input);
  CurveDataset ds = load_curves(flags.input);
  DistanceMatrix m = distance_matrix(ds, flags.delta, flags.jobs);
  for (double v : m.combined)
    if (!std::isfinite(v)) throw numerical_error("non-finite distance computed");
  save_distance_matrix(m, flags.output);
  std::cerr << "dist: " << m.n << "x" << m.n << " matrix, delta=" << m.delta << "\n";
}

DistanceMatrix load_matrix_with_delta(const std::string& path, std::optional<double> delta) {
  require_file(path);
  DistanceMatrix m = load_distance_matrix(path);
  if (delta && *delta != m.delta) m.remix(*delta);
  return m;
}

struct TuneDeltaFlags {
  std::string dist, output;
  std::string grid = "0:1:0.05";
};

void run_tune_delta(const TuneDeltaFlags& flags) {
  DistanceMatrix m = load_matrix_with_delta(flags.dist, {});
  DeltaSweepResult sweep = tune_delta(m, parse_range(flags.grid));
  save_delta_sweep(sweep, flags.output);
  std::cerr << "tune-delta: chosen delta=" << sweep.chosen_delta
            << (sweep.flat_flag ? " (flat difference curve)" : "") << "\n";
}

struct ClusterFlags {
  std::string dist, output;
  int min_size = 20;
  std::optional<double> delta;
};

void run_cluster(const ClusterFlags& flags) {
  DistanceMatrix m = load_matrix_with_delta(flags.dist, flags.delta);
  ClusterAssignment clusters = cluster_curves(m, DynamicCutParams{flags.min_size});
  save_labels(clusters, flags.output);
  std::cerr << "cluster: G=" << clusters.G;
  if (clusters.single_cluster_warning) std::cerr << " (warning: input smaller than min size)";
  std::cerr << "\n";
}

struct TuneFlags {
  std::string curves, dist, labels, output, emit_csv;
  std::string k_grid = "3:24:3";
  std::string alpha_grid = "1:19:2";
  std::string criterion = "elbow";
  double threshold = 0.0;
  uint64_t seed = 42;
  std::optional<double> delta;
  int jobs = default_jobs();
};

TuningReport run_tune(const TuneFlags& flags) {
  require_file(flags.curves);
  require_file(flags.labels);
  CurveDataset ds = load_curves(flags.curves);
  DistanceMatrix m = load_matrix_with_delta(flags.dist, flags.delta);
  ClusterAssignment clusters = load_labels(flags.labels);
  if (clusters.labels.size() != ds.curves.size())
    throw validation_error("labels and curves disagree in size");

  TuningGrid grid;
  grid.k_values = parse_int_range(flags.k_grid);
  grid.alpha_values = parse_range(flags.alpha_grid);
  grid.criterion = parse_criterion(flags.criterion);
  grid.threshold_b = flags.threshold;
  grid.seed = flags.seed;
  TuningReport report = tune(ds, m, clusters, grid, flags.jobs);
  save_tuning(report, flags.output);
  if (!flags.emit_csv.empty()) save_tuning_csv(report, flags.emit_csv);
  for (const auto& w : report.warnings) std::cerr << "tune: warning: " << w << "\n";
  if (report.satisfied)
    std::cerr << "tune: chosen K=" << report.chosen_k << " alpha0=" << report.chosen_alpha0
              << "\n";
  else
    std::cerr << "tune: no satisfiable combination\n";
  return report;
}

struct SynthFlags {
  std::string curves, dist, output, report;
  int k = 6;
  double alpha0 = 7.0;
  std::string kernel = "exp";
  double beta0 = 1.0;
  uint64_t seed = 42;
  std::optional<double> delta;
  int jobs = default_jobs();
};

void run_synth(const SynthFlags& flags) {
  require_file(flags.curves);
  CurveDataset ds = load_curves(flags.curves);
  DistanceMatrix m = load_matrix_with_delta(flags.dist, flags.delta);

  SynthesisConfig config;
  config.k = flags.k;
  config.alpha0 = flags.alpha0;
  config.kernel = parse_kernel(flags.kernel);
  config.beta0 = flags.beta0;
  config.delta = m.delta;
  config.seed = flags.seed;
  auto [synth, report] = synthesize_all(ds, m, config, flags.jobs);
  check_finite(synth, "synthetic curves");
  save_curves(synth, flags.output);
  if (!flags.report.empty()) save_synthesis_report(report, flags.report);
  std::cerr << "synth: " << synth.curves.size() << " synthetic curves (K=" << config.k
            << ", alpha0=" << config.alpha0 << ", seed=" << config.seed << ")\n";
}

struct EvalFlags {
  std::string orig, synth, output, emit_csv, dist;
  std::string tests = "mean,cov,privacy";
  int permutations = 500;
  uint64_t seed = 42;
  double delta = 1.0;
  int jobs = default_jobs();
};

void run_eval(const EvalFlags& flags) {
  require_file(flags.orig);
  require_file(flags.synth);
  CurveDataset orig = load_curves(flags.orig);
  CurveDataset synth = load_curves(flags.synth);

  std::optional<DistanceMatrix> orig_matrix;
  if (!flags.dist.empty()) orig_matrix = load_matrix_with_delta(flags.dist, flags.delta);

  EvalReport report;
  report.delta = flags.delta;
  std::string tests = "," + flags.tests + ",";
  auto wants = [&](const char* name) {
    return tests.find("," + std::string(name) + ",") != std::string::npos;
  };

  if (wants("mean")) {
    report.has_mean = true;
    report.mean_test = mean_permutation_test(orig, synth, flags.permutations, flags.delta,
                                             flags.seed, flags.jobs);
    std::cerr << "eval: mean test p=" << report.mean_test.p_value << "\n";
  }
  if (wants("cov")) {
    report.has_cov = true;
    report.cov_test = covariance_permutation_test(orig, synth, flags.permutations,
                                                  "hilbert-schmidt", flags.seed + 1, flags.jobs);
    std::cerr << "eval: covariance test p=" << report.cov_test.p_value << "\n";
  }
  if (wants("privacy")) {
    report.has_privacy = true;
    report.privacy = privacy_audit(orig, synth, orig_matrix ? &*orig_matrix : nullptr,
                                   flags.delta, flags.jobs);
    std::cerr << "eval: privacy medians synth-orig=" << report.privacy.median_synth_orig
              << " orig-orig=" << report.privacy.median_orig_orig
              << " ratio=" << report.privacy.ratio << (report.privacy.pass ? " PASS" : " FAIL")
              << "\n";
  }
  save_eval_report(report, flags.output);
  if (!flags.emit_csv.empty()) save_eval_csv(report, flags.emit_csv);

  if (wants("stats")) {
    FeatureStats so = feature_stats(orig, orig.normalization);
    FeatureStats ss = feature_stats(synth, synth.normalization);
    fs::path base(flags.output);
    base.replace_extension();
    save_feature_stats(so, base.string() + ".stats-orig.json");
    save_feature_stats(ss, base.string() + ".stats-synth.json");
  }
}

struct HeatmapFlags {
  std::string curves, norm, output;
  double diagonal_km = std::sqrt(3.0) / 3.0;
  int samples = 25;
};

void run_heatmap(const HeatmapFlags& flags) {
  require_file(flags.curves);
  CurveDataset ds = load_curves(flags.curves);
  NormalizationParams norm = ds.normalization;
  if (!flags.norm.empty()) {
    auto [n, proj] = load_sidecar(flags.norm);
    norm = n;
  }
  HexHeatmap map = hex_heatmap(ds, norm, flags.diagonal_km, flags.samples);
  save_heatmap_csv(map, flags.output);
  std::cerr << "heatmap: " << map.counts.size() << " cells, " << map.total << " points\n";
}

struct ToygenFlags {
  std::string output, csv;
  ToyDataSpec spec;
  int csv_points = 15;
};

void run_toygen(const ToygenFlags& flags) {
  CurveDataset ds = generate_toy(flags.spec);
  if (!flags.output.empty()) save_curves(ds, flags.output);
  if (!flags.csv.empty()) {
    std::ofstream os(flags.csv);
    if (!os) throw validation_error("cannot write csv: " + flags.csv);
    write_toy_signals_csv(ds, flags.csv_points, os);
  }
  std::cerr << "toygen: " << ds.curves.size() << " curves (seed " << flags.spec.seed << ")\n";
}

// ---------------------------------------------------------------------------
// pipeline

struct PipelineFlags {
  std::string input, workdir;
  std::string from_stage = "ingest", to_stage = "eval";
  IngestFlags ingest;
  int grid_size = 101;
  double delta = 1.0;
  std::string delta_grid = "0:1:0.05";
  int min_size = 20;
  std::string k_grid = "3:24:3";
  std::string alpha_grid = "1:19:2";
  std::string criterion = "elbow";
  double threshold = 0.0;
  std::string kernel = "exp";
  double beta0 = 1.0;
  int permutations = 200;
  uint64_t seed = 42;
  int jobs = default_jobs();
};

const std::vector<std::string> kStages = {"ingest",  "smooth", "dist",  "tune-delta",
                                          "cluster", "tune",   "synth", "eval"};

int stage_index(const std::string& name) {
  for (size_t i = 0; i < kStages.size(); ++i)
    if (kStages[i] == name) return static_cast<int>(i);
  throw validation_error("unknown pipeline stage: " + name);
}

class Manifest {
public:
  Manifest(fs::path path, uint64_t seed) : path_(std::move(path)) {
    doc_["format_version"] = 1;
    doc_["seed"] = seed;
    doc_["stages"] = json::array();
    if (fs::exists(path_)) {
      try {
        std::ifstream is(path_);
        json prev;
        is >> prev;
        if (prev.value("format_version", 0) == 1) doc_ = prev;
        doc_["seed"] = seed;
      } catch (...) {
        // unreadable manifest is rebuilt from scratch
      }
    }
  }

  void record(const std::string& stage, const std::vector<fs::path>& inputs,
              const std::vector<fs::path>& outputs, const json& config, double wall_ms) {
    json entry;
    entry["stage"] = stage;
    entry["config"] = config;
    entry["wall_ms"] = wall_ms;
    entry["inputs"] = json::array();
    for (const auto& p : inputs)
      entry["inputs"].push_back({{"path", p.string()}, {"fnv64", file_hash(p)}});
    entry["outputs"] = json::array();
    for (const auto& p : outputs)
      entry["outputs"].push_back({{"path", p.string()}, {"fnv64", file_hash(p)}});
    // replace any previous record of this stage
    json kept = json::array();
    for (auto& e : doc_["stages"])
      if (e.value("stage", "") != stage) kept.push_back(e);
    kept.push_back(std::move(entry));
    doc_["stages"] = std::move(kept);
    std::ofstream os(path_);
    os << doc_.dump(2) << '\n';
  }

private:
  fs::path path_;
  json doc_;
};

void run_pipeline(const PipelineFlags& flags) {
  if (flags.workdir.empty()) throw validation_error("pipeline requires --workdir");
  fs::create_directories(flags.workdir);
  fs::path wd(flags.workdir);

  const fs::path ndjson = wd / "01_normalized.ndjson";
  const fs::path rejects = wd / "01_rejects.json";
  const fs::path curves = wd / "02_curves.json";
  const fs::path dist = wd / "03_dist.bin";
  const fs::path delta_json = wd / "04_delta.json";
  const fs::path labels = wd / "05_labels.json";
  const fs::path tuning_json = wd / "06_tuning.json";
  const fs::path synthetic = wd / "07_synthetic.json";
  const fs::path synth_report = wd / "07_synth_report.json";
  const fs::path eval_json = wd / "08_eval.json";

  int from = stage_index(flags.from_stage);
  int to = stage_index(flags.to_stage);
  if (from > to) throw validation_error("--from stage comes after --to stage");

  Manifest manifest(wd / "manifest.json", flags.seed);
  auto timed = [&](const std::string& stage, const std::vector<fs::path>& inputs,
                   const std::vector<fs::path>& outputs, const json& config, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const Error&) {
      std::cerr << "pipeline: stage '" << stage << "' failed\n";
      throw;
    }
    auto t1 = std::chrono::steady_clock::now();
    manifest.record(stage, inputs, outputs, config,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  };

  auto active = [&](const char* name) {
    int idx = stage_index(name);
    return from <= idx && idx <= to;
  };

  if (active("ingest")) {
    if (flags.input.empty()) throw validation_error("pipeline ingest requires --input");
    IngestFlags f = flags.ingest;
    f.input = flags.input;
    f.output = ndjson.string();
    f.rejects = rejects.string();
    timed("ingest", {flags.input}, {ndjson, sidecar_path(ndjson), rejects},
          json{{"projection", f.projection}, {"orientation", f.orientation}},
          [&] { run_ingest(f); });
  }
  if (active("smooth")) {
    SmoothFlags f;
    f.input = ndjson.string();
    f.output = curves.string();
    f.grid_size = flags.grid_size;
    timed("smooth", {ndjson, sidecar_path(ndjson)}, {curves},
          json{{"grid_size", flags.grid_size}}, [&] { run_smooth(f); });
  }
  if (active("dist")) {
    DistFlags f;
    f.input = curves.string();
    f.output = dist.string();
    f.delta = flags.delta;
    f.jobs = flags.jobs;
    timed("dist", {curves}, {dist}, json{{"delta", flags.delta}}, [&] { run_dist(f); });
  }
  if (active("tune-delta")) {
    TuneDeltaFlags f;
    f.dist = dist.string();
    f.output = delta_json.string();
    f.grid = flags.delta_grid;
    timed("tune-delta", {dist}, {delta_json}, json{{"grid", flags.delta_grid}},
          [&] { run_tune_delta(f); });
  }

  auto chosen_delta = [&]() -> double {
    require_file(delta_json);
    return load_delta_sweep(delta_json).chosen_delta;
  };

  if (active("cluster")) {
    ClusterFlags f;
    f.dist = dist.string();
    f.output = labels.string();
    f.min_size = flags.min_size;
    f.delta = chosen_delta();
    timed("cluster", {dist, delta_json}, {labels}, json{{"min_size", flags.min_size}},
          [&] { run_cluster(f); });
  }
  if (active("tune")) {
    TuneFlags f;
    f.curves = curves.string();
    f.dist = dist.string();
    f.labels = labels.string();
    f.output = tuning_json.string();
    f.k_grid = flags.k_grid;
    f.alpha_grid = flags.alpha_grid;
    f.criterion = flags.criterion;
    f.threshold = flags.threshold;
    f.seed = flags.seed;
    f.delta = chosen_delta();
    f.jobs = flags.jobs;
    timed("tune", {curves, dist, labels}, {tuning_json},
          json{{"k_grid", flags.k_grid},
               {"alpha_grid", flags.alpha_grid},
               {"criterion", flags.criterion},
               {"threshold", flags.threshold}},
          [&] { run_tune(f); });
  }
  if (active("synth")) {
    require_file(tuning_json);
    TuningReport tuned = load_tuning(tuning_json);
    if (!tuned.satisfied)
      throw validation_error("tuning found no satisfiable (K, alpha0); cannot synthesize");
    SynthFlags f;
    f.curves = curves.string();
    f.dist = dist.string();
    f.output = synthetic.string();
    f.report = synth_report.string();
    f.k = tuned.chosen_k;
    f.alpha0 = tuned.chosen_alpha0;
    f.kernel = flags.kernel;
    f.beta0 = flags.beta0;
    f.seed = flags.seed;
    f.delta = chosen_delta();
    f.jobs = flags.jobs;
    timed("synth", {curves, dist, tuning_json}, {synthetic, synth_report},
          json{{"k", f.k}, {"alpha0", f.alpha0}, {"kernel", f.kernel}, {"seed", f.seed}},
          [&] { run_synth(f); });
  }
  if (active("eval")) {
    EvalFlags f;
    f.orig = curves.string();
    f.synth = synthetic.string();
    f.output = eval_json.string();
    f.dist = dist.string();
    f.tests = "mean,cov,privacy";
    f.permutations = flags.permutations;
    f.seed = flags.seed;
    f.delta = chosen_delta();
    f.jobs = flags.jobs;
    timed("eval", {curves, synthetic, dist}, {eval_json},
          json{{"permutations", flags.permutations}, {"delta", f.delta}},
          [&] { run_eval(f); });
  }
  std::cerr << "pipeline: done (" << kStages[from] << " .. " << kStages[to] << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FDASynthesis: privacy-preserving synthetic trajectory generation"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.allow_config_extras(false);

  // ingest
  IngestFlags ingest;
  auto* cmd_ingest = app.add_subcommand("ingest", "parse, project, filter and normalize GPS CSV");
  cmd_ingest->add_option("--input", ingest.input)->required();
  cmd_ingest->add_option("--output", ingest.output)->required();
  cmd_ingest->add_option("--min-points", ingest.policy.min_points);
  cmd_ingest->add_option("--max-gap-km", ingest.max_gap_km);
  cmd_ingest->add_option("--max-gap-min", ingest.max_gap_min);
  cmd_ingest->add_option("--max-accuracy-m", ingest.policy.max_accuracy);
  cmd_ingest->add_option("--max-speed-kmh", ingest.policy.max_speed);
  cmd_ingest->add_option("--projection", ingest.projection)
      ->check(CLI::IsMember({"local", "tmerc"}));
  cmd_ingest->add_option("--rejects", ingest.rejects);
  cmd_ingest->add_option("--normalize-orientation", ingest.orientation)
      ->check(CLI::IsMember({"max0", "min0"}));

  // smooth
  SmoothFlags smooth;
  auto* cmd_smooth = app.add_subcommand("smooth", "spline-smooth trajectories into curves");
  cmd_smooth->add_option("--input", smooth.input)->required();
  cmd_smooth->add_option("--output", smooth.output)->required();
  cmd_smooth->add_option("--grid-size", smooth.grid_size);

  // dist
  DistFlags dist;
  auto* cmd_dist = app.add_subcommand("dist", "pairwise elastic distance matrix");
  cmd_dist->add_option("--input", dist.input)->required();
  cmd_dist->add_option("--output", dist.output)->required();
  cmd_dist->add_option("--delta", dist.delta)->check(CLI::Range(0.0, 1.0));
  cmd_dist->add_option("--jobs", dist.jobs);

  // tune-delta
  TuneDeltaFlags tdelta;
  auto* cmd_tdelta = app.add_subcommand("tune-delta", "cophenetic sweep for delta");
  cmd_tdelta->add_option("--dist", tdelta.dist)->required();
  cmd_tdelta->add_option("--output", tdelta.output)->required();
  cmd_tdelta->add_option("--grid", tdelta.grid);

  // cluster
  ClusterFlags cluster;
  double cluster_delta = -1.0;
  auto* cmd_cluster = app.add_subcommand("cluster", "complete-linkage dynamic cut");
  cmd_cluster->add_option("--dist", cluster.dist)->required();
  cmd_cluster->add_option("--output", cluster.output)->required();
  cmd_cluster->add_option("--min-size", cluster.min_size);
  cmd_cluster->add_option("--delta", cluster_delta)->check(CLI::Range(0.0, 1.0));

  // tune
  TuneFlags tune;
  double tune_delta_flag = -1.0;
  auto* cmd_tune = app.add_subcommand("tune", "two-phase (K, alpha0) selection");
  cmd_tune->add_option("--curves", tune.curves)->required();
  cmd_tune->add_option("--dist", tune.dist)->required();
  cmd_tune->add_option("--labels", tune.labels)->required();
  cmd_tune->add_option("--output", tune.output)->required();
  cmd_tune->add_option("--k-grid", tune.k_grid);
  cmd_tune->add_option("--alpha-grid", tune.alpha_grid);
  cmd_tune->add_option("--criterion", tune.criterion)
      ->check(CLI::IsMember({"elbow", "threshold"}));
  cmd_tune->add_option("--threshold", tune.threshold);
  cmd_tune->add_option("--seed", tune.seed);
  cmd_tune->add_option("--emit-csv", tune.emit_csv);
  cmd_tune->add_option("--delta", tune_delta_flag)->check(CLI::Range(0.0, 1.0));
  cmd_tune->add_option("--jobs", tune.jobs);

  // synth
  SynthFlags synth;
  double synth_delta_flag = -1.0;
  auto* cmd_synth = app.add_subcommand("synth", "generate the synthetic dataset");
  cmd_synth->add_option("--curves", synth.curves)->required();
  cmd_synth->add_option("--dist", synth.dist)->required();
  cmd_synth->add_option("--output", synth.output)->required();
  cmd_synth->add_option("--k", synth.k);
  cmd_synth->add_option("--alpha0", synth.alpha0);
  cmd_synth->add_option("--kernel", synth.kernel)
      ->check(CLI::IsMember({"exp", "hyp", "exp-scaled"}));
  cmd_synth->add_option("--beta0", synth.beta0);
  cmd_synth->add_option("--seed", synth.seed);
  cmd_synth->add_option("--report", synth.report);
  cmd_synth->add_option("--delta", synth_delta_flag)->check(CLI::Range(0.0, 1.0));
  cmd_synth->add_option("--jobs", synth.jobs);

  // eval
  EvalFlags eval;
  auto* cmd_eval = app.add_subcommand("eval", "utility and privacy evaluation");
  cmd_eval->add_option("--orig", eval.orig)->required();
  cmd_eval->add_option("--synth", eval.synth)->required();
  cmd_eval->add_option("--output", eval.output)->required();
  cmd_eval->add_option("--tests", eval.tests);
  cmd_eval->add_option("--permutations", eval.permutations);
  cmd_eval->add_option("--seed", eval.seed);
  cmd_eval->add_option("--delta", eval.delta)->check(CLI::Range(0.0, 1.0));
  cmd_eval->add_option("--dist", eval.dist);
  cmd_eval->add_option("--emit-csv", eval.emit_csv);
  cmd_eval->add_option("--jobs", eval.jobs);

  // heatmap
  HeatmapFlags heatmap;
  auto* cmd_heatmap = app.add_subcommand("heatmap", "hex-bin visit heatmap CSV");
  cmd_heatmap->add_option("--curves", heatmap.curves)->required();
  cmd_heatmap->add_option("--norm", heatmap.norm);
  cmd_heatmap->add_option("--diagonal-km", heatmap.diagonal_km);
  cmd_heatmap->add_option("--samples", heatmap.samples);
  cmd_heatmap->add_option("--output", heatmap.output)->required();

  // toygen
  ToygenFlags toygen;
  auto* cmd_toygen = app.add_subcommand("toygen", "seeded toy curve/signal generator");
  cmd_toygen->add_option("--clusters", toygen.spec.n_clusters);
  cmd_toygen->add_option("--per-cluster", toygen.spec.curves_per_cluster);
  cmd_toygen->add_option("--noise", toygen.spec.noise_scale);
  cmd_toygen->add_option("--seed", toygen.spec.seed);
  cmd_toygen->add_option("--grid-size", toygen.spec.grid_m);
  cmd_toygen->add_option("--output", toygen.output);
  cmd_toygen->add_option("--csv", toygen.csv);
  cmd_toygen->add_option("--csv-points", toygen.csv_points);

  // pipeline
  PipelineFlags pipe;
  auto* cmd_pipe = app.add_subcommand("pipeline", "run ingest..eval end to end");
  cmd_pipe->add_option("--input", pipe.input);
  cmd_pipe->add_option("--workdir", pipe.workdir)->required();
  cmd_pipe->add_option("--from", pipe.from_stage);
  cmd_pipe->add_option("--to", pipe.to_stage);
  cmd_pipe->add_option("--min-points", pipe.ingest.policy.min_points);
  cmd_pipe->add_option("--max-gap-km", pipe.ingest.max_gap_km);
  cmd_pipe->add_option("--max-gap-min", pipe.ingest.max_gap_min);
  cmd_pipe->add_option("--max-accuracy-m", pipe.ingest.policy.max_accuracy);
  cmd_pipe->add_option("--max-speed-kmh", pipe.ingest.policy.max_speed);
  cmd_pipe->add_option("--projection", pipe.ingest.projection)
      ->check(CLI::IsMember({"local", "tmerc"}));
  cmd_pipe->add_option("--normalize-orientation", pipe.ingest.orientation)
      ->check(CLI::IsMember({"max0", "min0"}));
  cmd_pipe->add_option("--grid-size", pipe.grid_size);
  cmd_pipe->add_option("--delta", pipe.delta)->check(CLI::Range(0.0, 1.0));
  cmd_pipe->add_option("--delta-grid", pipe.delta_grid);
  cmd_pipe->add_option("--min-size", pipe.min_size);
  cmd_pipe->add_option("--k-grid", pipe.k_grid);
  cmd_pipe->add_option("--alpha-grid", pipe.alpha_grid);
  cmd_pipe->add_option("--criterion", pipe.criterion)
      ->check(CLI::IsMember({"elbow", "threshold"}));
  cmd_pipe->add_option("--threshold", pipe.threshold);
  cmd_pipe->add_option("--kernel", pipe.kernel)
      ->check(CLI::IsMember({"exp", "hyp", "exp-scaled"}));
  cmd_pipe->add_option("--beta0", pipe.beta0);
  cmd_pipe->add_option("--permutations", pipe.permutations);
  cmd_pipe->add_option("--seed", pipe.seed);
  cmd_pipe->add_option("--jobs", pipe.jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_ingest->parsed()) run_ingest(ingest);
    if (cmd_smooth->parsed()) run_smooth(smooth);
    if (cmd_dist->parsed()) run_dist(dist);
    if (cmd_tdelta->parsed()) run_tune_delta(tdelta);
    if (cmd_cluster->parsed()) {
      if (cluster_delta >= 0.0) cluster.delta = cluster_delta;
      run_cluster(cluster);
    }
    if (cmd_tune->parsed()) {
      if (tune_delta_flag >= 0.0) tune.delta = tune_delta_flag;
      run_tune(tune);
    }
    if (cmd_synth->parsed()) {
      if (synth_delta_flag >= 0.0) synth.delta = synth_delta_flag;
      run_synth(synth);
    }
    if (cmd_eval->parsed()) run_eval(eval);
    if (cmd_heatmap->parsed()) run_heatmap(heatmap);
    if (cmd_toygen->parsed()) run_toygen(toygen);
    if (cmd_pipe->parsed()) run_pipeline(pipe);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::validation ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
