#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "volpipe/network.hpp"
#include "volpipe/spatial_index.hpp"
#include "volpipe/trips.hpp"

namespace volpipe {

struct MatchParams {
  double radius_m = 100.0;
  double heading_gate_deg = 30.0;
};

/// One sighting snapped to a link.
struct MatchedPoint {
  int sighting_index = 0;  // index into the trip's sighting list
  double t = 0.0;
  double heading_deg = 0.0;
  int64_t link_id = 0;
  double dist_to_link_node_m = 0.0;
};

struct MatchedTrajectory {
  Trip trip;
  std::vector<MatchedPoint> points;  // sighting order, duplicates collapsed
};

/// Travel direction from a to b in [0, 360), or nullopt when the projected
/// positions coincide.
std::optional<double> travel_heading(const Sighting& a, const Sighting& b, const GeoPoint& ref);

/// Nearest indexed link node within the radius whose link direction differs
/// from `heading` by strictly less than the gate. Ties on distance go to the
/// smaller link_id.
std::optional<std::pair<int64_t, double>> match_sighting(const PlanePoint& pos, double heading,
                                                         const SpatialIndex& idx,
                                                         const RoadNetwork& net,
                                                         const MatchParams& params = {});

/// Matches every sighting of a trip. Headings point toward the next sighting
/// (the last sighting reuses the previous heading; coincident sightings carry
/// the previous heading forward). Unmatched sightings are dropped and
/// consecutive runs on the same link collapse to the earliest sighting.
MatchedTrajectory match_trajectory(const Trip& trip, const SpatialIndex& idx,
                                   const RoadNetwork& net, const MatchParams& params = {});

/// Per-sighting diagnostics for the optional debug dump.
struct MatchDebugRow {
  int sighting_index = 0;
  int candidates = 0;
  std::optional<double> heading_deg;
  std::optional<int64_t> chosen_link;
  std::optional<double> dist_m;
  std::optional<double> heading_diff_deg;
};

MatchedTrajectory match_trajectory_debug(const Trip& trip, const SpatialIndex& idx,
                                         const RoadNetwork& net, const MatchParams& params,
                                         std::vector<MatchDebugRow>* debug);

}  // namespace volpipe
