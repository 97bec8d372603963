#pragma once

#include <filesystem>
#include <string>

#include "fdasynth/evaluate.hpp"
#include "fdasynth/hcluster.hpp"
#include "fdasynth/ingest.hpp"
#include "fdasynth/synthesis.hpp"
#include "fdasynth/tuning.hpp"
#include "fdasynth/types.hpp"

namespace fdasynth {

// Curve dataset JSON: grid, normalization, metadata, curves with values
// serialized at full double round-trip precision.
void save_curves(const CurveDataset& ds, const std::filesystem::path& path);
CurveDataset load_curves(const std::filesystem::path& path);

// Normalized trajectories as newline-delimited JSON plus a sidecar with
// normalization and projection metadata.
void save_ndjson(const std::vector<NormalizedTrajectory>& trajs,
                 const std::filesystem::path& path);
std::vector<NormalizedTrajectory> load_ndjson(const std::filesystem::path& path);

void save_sidecar(const NormalizationParams& norm, const ProjectionRef& proj,
                  const std::filesystem::path& path);
std::pair<NormalizationParams, ProjectionRef> load_sidecar(const std::filesystem::path& path);

// Derived sidecar path for an ndjson artifact: <stem>.norm.json.
std::filesystem::path sidecar_path(const std::filesystem::path& ndjson_path);

void save_rejects(const ParseResult& parse,
                  const std::vector<std::pair<std::string, std::string>>& dropped,
                  const std::filesystem::path& path);

void save_labels(const ClusterAssignment& labels, const std::filesystem::path& path);
ClusterAssignment load_labels(const std::filesystem::path& path);

void save_delta_sweep(const DeltaSweepResult& sweep, const std::filesystem::path& path);
DeltaSweepResult load_delta_sweep(const std::filesystem::path& path);

void save_tuning(const TuningReport& report, const std::filesystem::path& path);
TuningReport load_tuning(const std::filesystem::path& path);
void save_tuning_csv(const TuningReport& report, const std::filesystem::path& path);

void save_synthesis_report(const SynthesisReport& report, const std::filesystem::path& path);

struct EvalReport {
  bool has_mean = false, has_cov = false, has_privacy = false;
  PermutationTestResult mean_test;
  PermutationTestResult cov_test;
  PrivacyAudit privacy;
  double delta = 1.0;
};

void save_eval_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_eval_report(const std::filesystem::path& path);
void save_eval_csv(const EvalReport& report, const std::filesystem::path& path);

void save_heatmap_csv(const HexHeatmap& map, const std::filesystem::path& path);

void save_feature_stats(const FeatureStats& stats, const std::filesystem::path& path);

// FNV-1a 64-bit hash over file bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

}  // namespace fdasynth
