#include "fdasynth/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <map>

namespace fdasynth {

namespace {
constexpr double kEarthRadius = 6371000.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& v) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && ptr == e && std::isfinite(v);
}

bool parse_int64(const std::string& s, int64_t& v) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && ptr == e;
}
}  // namespace

ParseResult parse_signals(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw validation_error("parse error at line 1: empty input, header row required");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = split_csv(line);
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"user_id", "trajectory_id", "timestamp", "lat", "lon"}) {
    if (!col.count(required))
      throw validation_error(std::string("parse error at line 1: missing required column '") +
                             required + "'");
  }
  const bool has_accuracy = col.count("accuracy") > 0;
  const size_t needed = 1 + std::max({col["user_id"], col["trajectory_id"], col["timestamp"],
                                      col["lat"], col["lon"]});

  ParseResult result;
  std::map<std::pair<std::string, std::string>, std::vector<RawPoint>> groups;

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() < needed) {
      result.rejected_rows.push_back({line_no, "too few columns"});
      continue;
    }
    RawPoint pt;
    if (!parse_double(fields[col["lat"]], pt.lat) || pt.lat < -90.0 || pt.lat > 90.0) {
      result.rejected_rows.push_back({line_no, "invalid lat"});
      continue;
    }
    if (!parse_double(fields[col["lon"]], pt.lon) || pt.lon < -180.0 || pt.lon > 180.0) {
      result.rejected_rows.push_back({line_no, "invalid lon"});
      continue;
    }
    if (!parse_int64(fields[col["timestamp"]], pt.timestamp)) {
      result.rejected_rows.push_back({line_no, "invalid timestamp"});
      continue;
    }
    if (has_accuracy && col["accuracy"] < fields.size() && !fields[col["accuracy"]].empty()) {
      double acc;
      if (!parse_double(fields[col["accuracy"]], acc) || acc < 0.0) {
        result.rejected_rows.push_back({line_no, "invalid accuracy"});
        continue;
      }
      pt.accuracy = acc;
    }
    groups[{fields[col["user_id"]], fields[col["trajectory_id"]]}].push_back(pt);
  }

  for (auto& [key, points] : groups) {
    std::stable_sort(points.begin(), points.end(),
                     [](const RawPoint& a, const RawPoint& b) { return a.timestamp < b.timestamp; });
    bool dup = false;
    for (size_t j = 1; j < points.size(); ++j)
      if (points[j].timestamp == points[j - 1].timestamp) {
        dup = true;
        break;
      }
    if (dup) {
      result.rejected_trajectories.emplace_back(key.second, "duplicate timestamps");
      continue;
    }
    if (points.size() < 2) {
      result.rejected_trajectories.emplace_back(key.second, "fewer than 2 points");
      continue;
    }
    RawTrajectory t;
    t.user_id = key.first;
    t.trajectory_id = key.second;
    t.points = std::move(points);
    result.trajectories.push_back(std::move(t));
  }
  return result;
}

ProjectionMode parse_projection_mode(const std::string& name) {
  if (name == "local") return ProjectionMode::local_plane;
  if (name == "tmerc") return ProjectionMode::transverse_mercator;
  throw validation_error("unknown projection mode: " + name);
}

std::string projection_mode_name(ProjectionMode mode) {
  return mode == ProjectionMode::local_plane ? "local" : "tmerc";
}

namespace {
int utm_zone_of(double lon) { return static_cast<int>(std::floor((lon + 180.0) / 6.0)) + 1; }

// Snyder's transverse-Mercator series on WGS84
PlanarPoint tmerc_project(const RawPoint& pt, int zone, bool south) {
  constexpr double a = 6378137.0;
  constexpr double f = 1.0 / 298.257223563;
  constexpr double e2 = f * (2.0 - f);
  constexpr double ep2 = e2 / (1.0 - e2);
  constexpr double k0 = 0.9996;

  const double lon0 = (zone * 6.0 - 183.0) * kDegToRad;
  const double phi = pt.lat * kDegToRad;
  const double lam = pt.lon * kDegToRad;

  const double sinp = std::sin(phi), cosp = std::cos(phi), tanp = std::tan(phi);
  const double N = a / std::sqrt(1.0 - e2 * sinp * sinp);
  const double T = tanp * tanp;
  const double C = ep2 * cosp * cosp;
  const double A = (lam - lon0) * cosp;

  const double e4 = e2 * e2, e6 = e4 * e2;
  const double M =
      a * ((1.0 - e2 / 4.0 - 3.0 * e4 / 64.0 - 5.0 * e6 / 256.0) * phi -
           (3.0 * e2 / 8.0 + 3.0 * e4 / 32.0 + 45.0 * e6 / 1024.0) * std::sin(2.0 * phi) +
           (15.0 * e4 / 256.0 + 45.0 * e6 / 1024.0) * std::sin(4.0 * phi) -
           (35.0 * e6 / 3072.0) * std::sin(6.0 * phi));

  const double A2 = A * A, A3 = A2 * A, A4 = A2 * A2, A5 = A4 * A, A6 = A4 * A2;
  PlanarPoint out;
  out.e = k0 * N *
              (A + (1.0 - T + C) * A3 / 6.0 +
               (5.0 - 18.0 * T + T * T + 72.0 * C - 58.0 * ep2) * A5 / 120.0) +
          500000.0;
  out.n = k0 * (M + N * tanp *
                        (A2 / 2.0 + (5.0 - T + 9.0 * C + 4.0 * C * C) * A4 / 24.0 +
                         (61.0 - 58.0 * T + T * T + 600.0 * C - 330.0 * ep2) * A6 / 720.0));
  if (south) out.n += 10000000.0;
  out.timestamp = pt.timestamp;
  out.accuracy = pt.accuracy;
  return out;
}
}  // namespace

ProjectionRef projection_reference(std::span<const RawTrajectory> trajs, ProjectionMode mode) {
  ProjectionRef ref;
  ref.mode = mode;
  if (trajs.empty()) throw validation_error("projection reference of empty corpus");
  if (mode == ProjectionMode::local_plane) {
    double lat_sum = 0.0, lon_sum = 0.0;
    size_t count = 0;
    for (const auto& t : trajs)
      for (const auto& p : t.points) {
        lat_sum += p.lat;
        lon_sum += p.lon;
        ++count;
      }
    if (count == 0) throw validation_error("projection reference: no points");
    ref.lat0 = lat_sum / count;
    ref.lon0 = lon_sum / count;
  } else {
    const RawPoint& first = trajs.front().points.front();
    ref.utm_zone = utm_zone_of(first.lon);
    ref.south = first.lat < 0.0;
  }
  return ref;
}

PlanarTrajectory project_planar(const RawTrajectory& traj, const ProjectionRef& ref) {
  PlanarTrajectory out;
  out.trajectory_id = traj.trajectory_id;
  out.user_id = traj.user_id;
  out.points.reserve(traj.points.size());
  if (ref.mode == ProjectionMode::local_plane) {
    const double cos0 = std::cos(ref.lat0 * kDegToRad);
    for (const auto& p : traj.points) {
      PlanarPoint q;
      q.e = kEarthRadius * (p.lon - ref.lon0) * kDegToRad * cos0;
      q.n = kEarthRadius * (p.lat - ref.lat0) * kDegToRad;
      q.timestamp = p.timestamp;
      q.accuracy = p.accuracy;
      out.points.push_back(q);
    }
  } else {
    for (const auto& p : traj.points) {
      if (utm_zone_of(p.lon) != ref.utm_zone)
        throw validation_error("trajectory " + traj.trajectory_id +
                               " spans incompatible UTM zones (" +
                               std::to_string(ref.utm_zone) + " vs " +
                               std::to_string(utm_zone_of(p.lon)) + ")");
      out.points.push_back(tmerc_project(p, ref.utm_zone, ref.south));
    }
  }
  return out;
}

void FilterPolicy::validate() const {
  if (min_points <= 0 || max_gap_space <= 0.0 || max_gap_time <= 0.0 || max_accuracy <= 0.0 ||
      max_speed <= 0.0)
    throw validation_error("filter policy fields must all be positive");
}

FilterOutcome filter_trajectories(std::vector<PlanarTrajectory> trajs,
                                  const FilterPolicy& policy) {
  policy.validate();
  FilterOutcome out;
  for (auto& t : trajs) {
    std::string reason;

    int distinct = t.points.empty() ? 0 : 1;
    for (size_t j = 1; j < t.points.size(); ++j) {
      double d = std::hypot(t.points[j].e - t.points[j - 1].e,
                            t.points[j].n - t.points[j - 1].n);
      if (d > 1.0) ++distinct;  // >1 m from the previous point counts as distinct
    }
    if (distinct < policy.min_points) reason = "min_points";

    if (reason.empty()) {
      for (size_t j = 1; j < t.points.size(); ++j) {
        double d = std::hypot(t.points[j].e - t.points[j - 1].e,
                              t.points[j].n - t.points[j - 1].n);
        if (d > policy.max_gap_space) {
          reason = "max_gap_space";
          break;
        }
      }
    }
    if (reason.empty()) {
      for (size_t j = 1; j < t.points.size(); ++j) {
        if (static_cast<double>(t.points[j].timestamp - t.points[j - 1].timestamp) >
            policy.max_gap_time) {
          reason = "max_gap_time";
          break;
        }
      }
    }
    if (reason.empty()) {
      for (const auto& p : t.points) {
        if (p.accuracy && *p.accuracy > policy.max_accuracy) {
          reason = "max_accuracy";
          break;
        }
      }
    }
    if (reason.empty()) {
      for (size_t j = 1; j < t.points.size(); ++j) {
        double d = std::hypot(t.points[j].e - t.points[j - 1].e,
                              t.points[j].n - t.points[j - 1].n);
        double dt = static_cast<double>(t.points[j].timestamp - t.points[j - 1].timestamp);
        double kmh = (d / dt) * 3.6;
        if (kmh > policy.max_speed) {
          reason = "max_speed";
          break;
        }
      }
    }

    if (reason.empty())
      out.kept.push_back(std::move(t));
    else
      out.dropped.emplace_back(t.trajectory_id, reason);
  }
  return out;
}

std::pair<std::vector<NormalizedTrajectory>, NormalizationParams> normalize(
    std::span<const PlanarTrajectory> trajs, bool spatial_max0) {
  if (trajs.empty()) throw validation_error("normalize: empty input");

  NormalizationParams params;
  params.spatial_max0 = spatial_max0;
  double min_e = std::numeric_limits<double>::infinity(), max_e = -min_e;
  double min_n = min_e, max_n = -min_e;
  double min_te = min_e, max_te = -min_e;
  for (const auto& t : trajs) {
    const int64_t t0 = t.points.front().timestamp;
    for (const auto& p : t.points) {
      min_e = std::min(min_e, p.e);
      max_e = std::max(max_e, p.e);
      min_n = std::min(min_n, p.n);
      max_n = std::max(max_n, p.n);
      double te = static_cast<double>(p.timestamp - t0);
      min_te = std::min(min_te, te);
      max_te = std::max(max_te, te);
    }
  }
  if (!(max_e > min_e)) throw validation_error("degenerate normalization axis: c1");
  if (!(max_n > min_n)) throw validation_error("degenerate normalization axis: c2");
  if (!(max_te > min_te)) throw validation_error("degenerate normalization axis: t");
  params.min_c1 = min_e;
  params.max_c1 = max_e;
  params.min_c2 = min_n;
  params.max_c2 = max_n;
  params.min_t = min_te;
  params.max_t = max_te;

  std::vector<NormalizedTrajectory> out;
  out.reserve(trajs.size());
  for (const auto& t : trajs) {
    NormalizedTrajectory nt;
    nt.trajectory_id = t.trajectory_id;
    nt.user_id = t.user_id;
    nt.start_time = t.points.front().timestamp;
    nt.points.reserve(t.points.size());
    for (const auto& p : t.points) {
      double te = static_cast<double>(p.timestamp - nt.start_time);
      nt.points.push_back({params.normalize_axis(0, p.e), params.normalize_axis(1, p.n),
                           params.normalize_axis(2, te)});
    }
    out.push_back(std::move(nt));
  }
  return {std::move(out), params};
}

}  // namespace fdasynth
