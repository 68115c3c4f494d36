#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "volpipe/matcher.hpp"
#include "volpipe/network.hpp"

namespace volpipe {

struct PathResult {
  std::vector<int64_t> links;
  double length_m = 0.0;
};

/// Minimum-length routing engine with reusable scratch space. One instance
/// per worker; the network itself is shared read-only.
///
/// Among equal-length shortest paths the engine returns the one whose link-id
/// sequence is lexicographically smallest. That choice is canonical: any
/// contiguous sub-walk of a returned path is itself the path the engine
/// returns between the sub-walk's endpoints, which keeps gap filling
/// consistent on networks with many tied paths.
class Router {
public:
  explicit Router(const RoadNetwork& net);

  /// Shortest directed path by total link length. `max_dist_m` bounds the
  /// search (no path within the bound -> nullopt).
  std::optional<PathResult> shortest_path(int64_t from_node, int64_t to_node,
                                          double max_dist_m = std::numeric_limits<double>::infinity());

private:
  struct Edge {
    int other;        // node index at the far end
    double w;         // link length
    int64_t link_id;
  };

  const RoadNetwork& net_;
  // forward edges grouped by tail node, ascending link_id within a group
  std::vector<std::vector<Edge>> fwd_;
  // reverse edges grouped by head node (for the backward search)
  std::vector<std::vector<Edge>> rev_;

  // epoch-stamped scratch, reused across queries
  std::vector<double> dist_;
  std::vector<uint32_t> stamp_;
  std::vector<uint8_t> settled_;
  uint32_t epoch_ = 0;
};

/// One-shot convenience wrapper.
std::optional<PathResult> shortest_path(const RoadNetwork& net, int64_t from_node,
                                        int64_t to_node);

/// Routed distance must not exceed the cumulative sighting distance by 2,000 m
/// or more.
bool check_distance(double routed_m, double cumulative_m, double excess_threshold_m = 2000.0);

/// Implied speed must not exceed 50 m/s; non-positive time gaps are invalid.
bool check_speed(double routed_m, double dt_s, double speed_cap_ms = 50.0);

struct Route {
  std::string device_id;
  int trip_seq = 0;
  std::vector<int64_t> links;
  double routed_length_m = 0.0;
  bool valid = false;
  int removed_sightings = 0;
};

struct RouteParams {
  double distance_excess_m = 2000.0;
  double speed_cap_ms = 50.0;
  double gap_search_cap_m = 10000.0;
};

/// Stitches a matched trajectory into a full route: fills the gap between
/// consecutive matched links with a shortest path and applies both
/// reasonableness checks per pair. When a pair fails, the later matched point
/// is removed and routing retries against the next one. If every later point
/// fails, the prefix route built so far is kept.
Route route_trip(const MatchedTrajectory& mt, const RoadNetwork& net, Router& router,
                 const RouteParams& params = {});

void write_routes_csv(const std::vector<Route>& routes, const std::string& path);
std::vector<Route> read_routes_csv(const std::string& path);

}  // namespace volpipe
