#include "fdasynth/serial.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

using nlohmann::json;

namespace fdasynth {

namespace {
constexpr int kFormatVersion = 1;

json open_json(const std::filesystem::path& path, const char* what) {
  std::ifstream is(path);
  if (!is) throw validation_error(std::string("cannot open ") + what + ": " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed ") + what + " (" + path.string() +
                           "): " + e.what());
  }
  return j;
}

void check_version(const json& j, const std::filesystem::path& path) {
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kFormatVersion)
    throw validation_error("unsupported format_version in " + path.string());
}

void write_json(const json& j, const std::filesystem::path& path, const char* what) {
  std::ofstream os(path);
  if (!os) throw validation_error(std::string("cannot write ") + what + ": " + path.string());
  os << j.dump(2) << '\n';
}

json norm_to_json(const NormalizationParams& n) {
  return json{{"min_c1", n.min_c1}, {"max_c1", n.max_c1}, {"min_c2", n.min_c2},
              {"max_c2", n.max_c2}, {"min_t", n.min_t},   {"max_t", n.max_t},
              {"spatial_orientation", n.spatial_max0 ? "max0" : "min0"}};
}

NormalizationParams norm_from_json(const json& j) {
  NormalizationParams n;
  n.min_c1 = j.at("min_c1").get<double>();
  n.max_c1 = j.at("max_c1").get<double>();
  n.min_c2 = j.at("min_c2").get<double>();
  n.max_c2 = j.at("max_c2").get<double>();
  n.min_t = j.at("min_t").get<double>();
  n.max_t = j.at("max_t").get<double>();
  n.spatial_max0 = j.at("spatial_orientation").get<std::string>() == "max0";
  return n;
}
}  // namespace

void save_curves(const CurveDataset& ds, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["grid"] = {{"m", ds.grid.m}, {"abscissae", ds.grid.x}};
  j["normalization"] = norm_to_json(ds.normalization);
  j["metadata"] = ds.metadata;
  json curves = json::array();
  for (const auto& c : ds.curves) {
    json values = json::array();
    for (int r = 0; r < c.values.rows; ++r) {
      json row = json::array();
      for (int d = 0; d < c.values.cols; ++d) row.push_back(c.values(r, d));
      values.push_back(std::move(row));
    }
    curves.push_back(
        json{{"id", c.id}, {"source_id", c.source_id}, {"values", std::move(values)}});
  }
  j["curves"] = std::move(curves);
  write_json(j, path, "curve dataset");
}

CurveDataset load_curves(const std::filesystem::path& path) {
  json j = open_json(path, "curve dataset");
  check_version(j, path);
  CurveDataset ds;
  ds.grid.m = j.at("grid").at("m").get<int>();
  ds.grid.x = j.at("grid").at("abscissae").get<std::vector<double>>();
  if (ds.grid.m != static_cast<int>(ds.grid.x.size()))
    throw validation_error("grid size mismatch in " + path.string());
  ds.normalization = norm_from_json(j.at("normalization"));
  if (j.contains("metadata"))
    ds.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  for (const auto& cj : j.at("curves")) {
    Curve c;
    c.id = cj.at("id").get<std::string>();
    c.source_id = cj.at("source_id").get<std::string>();
    const auto& values = cj.at("values");
    int rows = static_cast<int>(values.size());
    if (rows != ds.grid.m)
      throw validation_error("curve " + c.id + " has " + std::to_string(rows) +
                             " rows, expected " + std::to_string(ds.grid.m));
    int cols = rows > 0 ? static_cast<int>(values[0].size()) : 0;
    c.values = Mat(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int d = 0; d < cols; ++d) c.values(r, d) = values[r][d].get<double>();
    ds.curves.push_back(std::move(c));
  }
  return ds;
}

void save_ndjson(const std::vector<NormalizedTrajectory>& trajs,
                 const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot write ndjson: " + path.string());
  for (const auto& t : trajs) {
    json j{{"trajectory_id", t.trajectory_id},
           {"user_id", t.user_id},
           {"start_time", t.start_time}};
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back(json::array({p[0], p[1], p[2]}));
    j["points"] = std::move(pts);
    os << j.dump() << '\n';
  }
}

std::vector<NormalizedTrajectory> load_ndjson(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw validation_error("cannot open ndjson: " + path.string());
  std::vector<NormalizedTrajectory> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw validation_error("malformed ndjson at line " + std::to_string(line_no) + ": " +
                             e.what());
    }
    NormalizedTrajectory t;
    t.trajectory_id = j.at("trajectory_id").get<std::string>();
    t.user_id = j.at("user_id").get<std::string>();
    t.start_time = j.at("start_time").get<int64_t>();
    for (const auto& p : j.at("points"))
      t.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    out.push_back(std::move(t));
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& ndjson_path) {
  std::filesystem::path p = ndjson_path;
  p.replace_extension();
  p += ".norm.json";
  return p;
}

void save_sidecar(const NormalizationParams& norm, const ProjectionRef& proj,
                  const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["normalization"] = norm_to_json(norm);
  j["projection"] = {{"mode", projection_mode_name(proj.mode)},
                     {"lat0", proj.lat0},
                     {"lon0", proj.lon0},
                     {"utm_zone", proj.utm_zone},
                     {"south", proj.south}};
  write_json(j, path, "normalization sidecar");
}

std::pair<NormalizationParams, ProjectionRef> load_sidecar(const std::filesystem::path& path) {
  json j = open_json(path, "normalization sidecar");
  check_version(j, path);
  NormalizationParams norm = norm_from_json(j.at("normalization"));
  ProjectionRef proj;
  const auto& pj = j.at("projection");
  proj.mode = parse_projection_mode(pj.at("mode").get<std::string>());
  proj.lat0 = pj.at("lat0").get<double>();
  proj.lon0 = pj.at("lon0").get<double>();
  proj.utm_zone = pj.at("utm_zone").get<int>();
  proj.south = pj.at("south").get<bool>();
  return {norm, proj};
}

void save_rejects(const ParseResult& parse,
                  const std::vector<std::pair<std::string, std::string>>& dropped,
                  const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  json rows = json::array();
  for (const auto& r : parse.rejected_rows)
    rows.push_back(json{{"line", r.line}, {"reason", r.reason}});
  j["rejected_rows"] = std::move(rows);
  json trajs = json::array();
  for (const auto& [id, reason] : parse.rejected_trajectories)
    trajs.push_back(json{{"trajectory_id", id}, {"reason", reason}});
  j["rejected_trajectories"] = std::move(trajs);
  json drops = json::array();
  for (const auto& [id, reason] : dropped)
    drops.push_back(json{{"trajectory_id", id}, {"reason", reason}});
  j["filtered_trajectories"] = std::move(drops);
  write_json(j, path, "rejects report");
}

void save_labels(const ClusterAssignment& labels, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["G"] = labels.G;
  j["labels"] = labels.labels;
  j["sizes"] = labels.sizes;
  j["single_cluster_warning"] = labels.single_cluster_warning;
  write_json(j, path, "cluster labels");
}

ClusterAssignment load_labels(const std::filesystem::path& path) {
  json j = open_json(path, "cluster labels");
  check_version(j, path);
  ClusterAssignment out;
  out.G = j.at("G").get<int>();
  out.labels = j.at("labels").get<std::vector<int>>();
  out.sizes = j.at("sizes").get<std::vector<int>>();
  out.single_cluster_warning = j.value("single_cluster_warning", false);
  return out;
}

void save_delta_sweep(const DeltaSweepResult& sweep, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["deltas"] = sweep.deltas;
  j["coph_corr_amp"] = sweep.coph_corr_amp;
  j["coph_corr_phase"] = sweep.coph_corr_phase;
  j["abs_diff"] = sweep.abs_diff;
  j["chosen_delta"] = sweep.chosen_delta;
  j["flat_flag"] = sweep.flat_flag;
  write_json(j, path, "delta sweep");
}

DeltaSweepResult load_delta_sweep(const std::filesystem::path& path) {
  json j = open_json(path, "delta sweep");
  check_version(j, path);
  DeltaSweepResult out;
  out.deltas = j.at("deltas").get<std::vector<double>>();
  out.coph_corr_amp = j.at("coph_corr_amp").get<std::vector<double>>();
  out.coph_corr_phase = j.at("coph_corr_phase").get<std::vector<double>>();
  out.abs_diff = j.at("abs_diff").get<std::vector<double>>();
  out.chosen_delta = j.at("chosen_delta").get<double>();
  out.flat_flag = j.at("flat_flag").get<bool>();
  return out;
}

void save_tuning(const TuningReport& report, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["k_values"] = report.k_values;
  j["alpha_values"] = report.alpha_values;
  j["criterion"] = report.criterion;
  j["threshold_b"] = report.threshold_b;
  j["seed"] = report.seed;
  j["I1"] = report.I1;
  json ah = json::array();
  for (size_t i = 0; i < report.alpha_hat_per_k.size(); ++i) {
    if (report.satisfiable[i])
      ah.push_back(report.alpha_hat_per_k[i]);
    else
      ah.push_back(nullptr);
  }
  j["alpha_hat_per_k"] = std::move(ah);
  j["satisfiable"] = report.satisfiable;
  j["rho_per_k"] = report.rho_per_k;
  json i2 = json::array();
  for (double v : report.I2) {
    if (std::isnan(v))
      i2.push_back(nullptr);
    else
      i2.push_back(v);
  }
  j["I2"] = std::move(i2);
  j["satisfied"] = report.satisfied;
  if (report.satisfied) {
    j["chosen_k"] = report.chosen_k;
    j["chosen_alpha0"] = report.chosen_alpha0;
  }
  j["distance_evals_per_trial"] = report.distance_evals_per_trial;
  j["warnings"] = report.warnings;
  write_json(j, path, "tuning report");
}

TuningReport load_tuning(const std::filesystem::path& path) {
  json j = open_json(path, "tuning report");
  check_version(j, path);
  TuningReport out;
  out.k_values = j.at("k_values").get<std::vector<int>>();
  out.alpha_values = j.at("alpha_values").get<std::vector<double>>();
  out.criterion = j.at("criterion").get<std::string>();
  out.threshold_b = j.at("threshold_b").get<double>();
  out.seed = j.at("seed").get<uint64_t>();
  out.I1 = j.at("I1").get<std::vector<std::vector<double>>>();
  for (const auto& v : j.at("alpha_hat_per_k"))
    out.alpha_hat_per_k.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                              : v.get<double>());
  out.satisfiable = j.at("satisfiable").get<std::vector<bool>>();
  out.rho_per_k = j.at("rho_per_k").get<std::vector<std::vector<double>>>();
  for (const auto& v : j.at("I2"))
    out.I2.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
  out.satisfied = j.at("satisfied").get<bool>();
  if (out.satisfied) {
    out.chosen_k = j.at("chosen_k").get<int>();
    out.chosen_alpha0 = j.at("chosen_alpha0").get<double>();
  }
  out.distance_evals_per_trial = j.at("distance_evals_per_trial").get<uint64_t>();
  out.warnings = j.at("warnings").get<std::vector<std::string>>();
  return out;
}

void save_tuning_csv(const TuningReport& report, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot write tuning csv: " + path.string());
  os.precision(17);
  os << "indicator,K,alpha0,value\n";
  for (size_t ki = 0; ki < report.k_values.size(); ++ki)
    for (size_t ai = 0; ai < report.alpha_values.size(); ++ai)
      os << "I1," << report.k_values[ki] << ',' << report.alpha_values[ai] << ','
         << report.I1[ki][ai] << '\n';
  for (size_t ki = 0; ki < report.k_values.size(); ++ki) {
    if (ki < report.I2.size() && !std::isnan(report.I2[ki]))
      os << "I2," << report.k_values[ki] << ",," << report.I2[ki] << '\n';
  }
}

void save_synthesis_report(const SynthesisReport& report, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["config"] = {{"k", report.config.k},
                 {"alpha0", report.config.alpha0},
                 {"kernel", kernel_name(report.config.kernel)},
                 {"beta0", report.config.beta0},
                 {"delta", report.config.delta},
                 {"seed", report.config.seed}};
  json per_curve = json::array();
  for (size_t i = 0; i < report.neighbors.size(); ++i) {
    const auto& nw = report.neighbors[i];
    per_curve.push_back(json{{"reference_id", nw.reference_id},
                             {"neighbor_ids", nw.neighbor_ids},
                             {"distances", nw.distances},
                             {"alphas", nw.alphas},
                             {"weights", nw.weights},
                             {"uniform_fallback", nw.uniform_fallback},
                             {"karcher_iterations", report.karcher_iterations[i]},
                             {"time_clamp_max", report.time_clamp_max[i]}});
  }
  j["per_curve"] = std::move(per_curve);
  j["wall_ms"] = report.wall_ms;
  write_json(j, path, "synthesis report");
}

namespace {
json perm_to_json(const PermutationTestResult& t) {
  return json{{"statistic_observed", t.statistic_observed},
              {"statistic_null", t.statistic_null},
              {"p_value", t.p_value},
              {"permutations", t.permutations},
              {"seed", t.seed}};
}

PermutationTestResult perm_from_json(const json& j) {
  PermutationTestResult t;
  t.statistic_observed = j.at("statistic_observed").get<double>();
  t.statistic_null = j.at("statistic_null").get<std::vector<double>>();
  t.p_value = j.at("p_value").get<double>();
  t.permutations = j.at("permutations").get<int>();
  t.seed = j.at("seed").get<uint64_t>();
  return t;
}
}  // namespace

void save_eval_report(const EvalReport& report, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["delta"] = report.delta;
  if (report.has_mean) j["mean_test"] = perm_to_json(report.mean_test);
  if (report.has_cov) j["covariance_test"] = perm_to_json(report.cov_test);
  if (report.has_privacy) {
    j["privacy"] = {{"nn_orig_orig", report.privacy.nn_orig_orig},
                    {"nn_synth_orig", report.privacy.nn_synth_orig},
                    {"median_orig_orig", report.privacy.median_orig_orig},
                    {"median_synth_orig", report.privacy.median_synth_orig},
                    {"ratio", report.privacy.ratio},
                    {"pass", report.privacy.pass}};
  }
  write_json(j, path, "evaluation report");
}

EvalReport load_eval_report(const std::filesystem::path& path) {
  json j = open_json(path, "evaluation report");
  check_version(j, path);
  EvalReport out;
  out.delta = j.at("delta").get<double>();
  if (j.contains("mean_test")) {
    out.has_mean = true;
    out.mean_test = perm_from_json(j.at("mean_test"));
  }
  if (j.contains("covariance_test")) {
    out.has_cov = true;
    out.cov_test = perm_from_json(j.at("covariance_test"));
  }
  if (j.contains("privacy")) {
    out.has_privacy = true;
    const auto& pj = j.at("privacy");
    out.privacy.nn_orig_orig = pj.at("nn_orig_orig").get<std::vector<double>>();
    out.privacy.nn_synth_orig = pj.at("nn_synth_orig").get<std::vector<double>>();
    out.privacy.median_orig_orig = pj.at("median_orig_orig").get<double>();
    out.privacy.median_synth_orig = pj.at("median_synth_orig").get<double>();
    out.privacy.ratio = pj.at("ratio").get<double>();
    out.privacy.pass = pj.at("pass").get<bool>();
  }
  return out;
}

void save_eval_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot write eval csv: " + path.string());
  os.precision(17);
  os << "test,kind,value\n";
  auto dump_test = [&](const char* name, const PermutationTestResult& t) {
    os << name << ",observed," << t.statistic_observed << '\n';
    os << name << ",p_value," << t.p_value << '\n';
    for (double v : t.statistic_null) os << name << ",null," << v << '\n';
  };
  if (report.has_mean) dump_test("mean", report.mean_test);
  if (report.has_cov) dump_test("covariance", report.cov_test);
  if (report.has_privacy) {
    for (double v : report.privacy.nn_orig_orig) os << "privacy,nn_orig_orig," << v << '\n';
    for (double v : report.privacy.nn_synth_orig) os << "privacy,nn_synth_orig," << v << '\n';
    os << "privacy,median_orig_orig," << report.privacy.median_orig_orig << '\n';
    os << "privacy,median_synth_orig," << report.privacy.median_synth_orig << '\n';
    os << "privacy,ratio," << report.privacy.ratio << '\n';
  }
}

void save_heatmap_csv(const HexHeatmap& map, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw validation_error("cannot write heatmap csv: " + path.string());
  os.precision(17);
  os << "# cell_diagonal_km=" << map.cell_diagonal_km << " anchor_e=" << map.anchor_e
     << " anchor_n=" << map.anchor_n << " total=" << map.total << '\n';
  os << "q,r,count,center_e,center_n\n";
  const double size = map.cell_diagonal_km * 1000.0 / 2.0;
  for (const auto& [cell, count] : map.counts) {
    double cx = size * 1.5 * cell.first + map.anchor_e;
    double cy = size * std::sqrt(3.0) * (cell.second + cell.first / 2.0) + map.anchor_n;
    os << cell.first << ',' << cell.second << ',' << count << ',' << cx << ',' << cy << '\n';
  }
}

void save_feature_stats(const FeatureStats& stats, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["curve_count"] = stats.curve_count;
  json rows = json::array();
  for (const auto& r : stats.rows)
    rows.push_back(json{{"feature", r.feature},
                        {"min", r.min},
                        {"max", r.max},
                        {"mean", r.mean},
                        {"sd", r.sd}});
  j["features"] = std::move(rows);
  write_json(j, path, "feature stats");
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw validation_error("cannot hash missing file: " + path.string());
  uint64_t h = 0xCBF29CE484222325ull;
  char buf[1 << 16];
  while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
    std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ull;
    }
    if (!is) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return std::string(out);
}

}  // namespace fdasynth
