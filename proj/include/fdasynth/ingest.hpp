#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdasynth/types.hpp"

namespace fdasynth {

struct RawPoint {
  double lat = 0.0;
  double lon = 0.0;
  int64_t timestamp = 0;  // seconds since epoch
  std::optional<double> accuracy;  // meters
};

struct RawTrajectory {
  std::string trajectory_id;
  std::string user_id;
  std::vector<RawPoint> points;  // strictly ordered by timestamp
};

struct RejectedRow {
  size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<RawTrajectory> trajectories;  // sorted by (user_id, trajectory_id)
  std::vector<RejectedRow> rejected_rows;
  std::vector<std::pair<std::string, std::string>> rejected_trajectories;  // id, reason
};

// CSV with header user_id,trajectory_id,timestamp,lat,lon[,accuracy].
// Malformed rows land in the rejects report; trajectories with duplicate
// timestamps or fewer than 2 points are excluded with a reason.
ParseResult parse_signals(std::istream& in);

enum class ProjectionMode { local_plane, transverse_mercator };

ProjectionMode parse_projection_mode(const std::string& name);
std::string projection_mode_name(ProjectionMode mode);

struct ProjectionRef {
  ProjectionMode mode = ProjectionMode::local_plane;
  double lat0 = 0.0, lon0 = 0.0;  // local plane origin (degrees)
  int utm_zone = 0;               // transverse mercator only
  bool south = false;
};

struct PlanarPoint {
  double e = 0.0, n = 0.0;  // meters
  int64_t timestamp = 0;
  std::optional<double> accuracy;
};

struct PlanarTrajectory {
  std::string trajectory_id;
  std::string user_id;
  std::vector<PlanarPoint> points;
};

// Shared reference parameters for the whole corpus: the centroid for the
// local tangent plane, or the UTM zone of the first point.
ProjectionRef projection_reference(std::span<const RawTrajectory> trajs, ProjectionMode mode);

// Projects one trajectory to planar meters. Transverse-Mercator mode checks
// that every point lies in the reference zone.
PlanarTrajectory project_planar(const RawTrajectory& traj, const ProjectionRef& ref);

struct FilterPolicy {
  int min_points = 5;
  double max_gap_space = 3000.0;   // meters
  double max_gap_time = 1800.0;    // seconds
  double max_accuracy = 1200.0;    // meters
  double max_speed = 90.0;         // km/h

  void validate() const;
};

struct FilterOutcome {
  std::vector<PlanarTrajectory> kept;
  std::vector<std::pair<std::string, std::string>> dropped;  // id, first violated predicate
};

// Total: kept + dropped partition the input. The recorded reason is the
// first violated predicate in policy order (min_points, max_gap_space,
// max_gap_time, max_accuracy, max_speed).
FilterOutcome filter_trajectories(std::vector<PlanarTrajectory> trajs,
                                  const FilterPolicy& policy);

struct NormalizedTrajectory {
  std::string trajectory_id;
  std::string user_id;
  int64_t start_time = 0;  // metadata only
  std::vector<std::array<double, 3>> points;  // (c1', c2', te') in [0,1]^3
};

// Global affine normalization of (easting, northing, elapsed time). Spatial
// axes follow the max->0 orientation unless spatial_max0 is false; elapsed
// time always maps min->0 so it stays increasing.
std::pair<std::vector<NormalizedTrajectory>, NormalizationParams> normalize(
    std::span<const PlanarTrajectory> trajs, bool spatial_max0 = true);

}  // namespace fdasynth
