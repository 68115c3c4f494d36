#pragma once

#include <cstdint>
#include <vector>

#include "volpipe/geo.hpp"
#include "volpipe/network.hpp"

namespace volpipe {

/// One link geometry vertex in the plane.
struct IndexedPoint {
  PlanePoint pos;
  int64_t link_id = 0;
  int seq = 0;  // vertex position within the link's geometry
};

struct QueryHit {
  IndexedPoint pt;
  double dist = 0.0;
};

/// Static 2-d tree over link geometry vertices. Immutable after build;
/// queries are safe to run concurrently.
class SpatialIndex {
public:
  static SpatialIndex build(const RoadNetwork& net);

  /// All points with plane distance <= r, sorted by (distance, link_id, seq).
  std::vector<QueryHit> radius_query(const PlanePoint& p, double r) const;

  size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

private:
  // kd-tree stored as a binary-partitioned permutation of pts_:
  // each subrange [lo, hi) has its median at mid, split on depth-alternating axis.
  void build_range(int lo, int hi, int depth);
  void query_range(int lo, int hi, int depth, const PlanePoint& p, double r,
                   std::vector<QueryHit>& out) const;

  std::vector<IndexedPoint> pts_;
};

/// Inserts interpolated vertices so consecutive geometry vertices are at most
/// `max_spacing_m` apart. Endpoints and link length are unchanged; idempotent.
RoadNetwork densify_geometry(RoadNetwork net, double max_spacing_m = 100.0);

struct SpacingStats {
  size_t count = 0;
  double mean_m = 0.0;
  double max_m = 0.0;
  double share_within_100m = 0.0;
};

/// Distribution of consecutive geometry-vertex distances across all links.
SpacingStats node_spacing_stats(const RoadNetwork& net);

}  // namespace volpipe
