#include "volpipe/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace volpipe {

SpatialIndex SpatialIndex::build(const RoadNetwork& net) {
  SpatialIndex idx;
  for (const Link& l : net.links) {
    for (size_t s = 0; s < l.geometry.size(); ++s) {
      IndexedPoint p;
      p.pos = project(l.geometry[s], net.projection_ref);
      p.link_id = l.link_id;
      p.seq = static_cast<int>(s);
      idx.pts_.push_back(p);
    }
  }
  if (!idx.pts_.empty()) idx.build_range(0, static_cast<int>(idx.pts_.size()), 0);
  return idx;
}

void SpatialIndex::build_range(int lo, int hi, int depth) {
  if (hi - lo <= 1) return;
  int mid = lo + (hi - lo) / 2;
  bool x_axis = (depth % 2) == 0;
  std::nth_element(pts_.begin() + lo, pts_.begin() + mid, pts_.begin() + hi,
                   [x_axis](const IndexedPoint& a, const IndexedPoint& b) {
                     return x_axis ? a.pos.x < b.pos.x : a.pos.y < b.pos.y;
                   });
  build_range(lo, mid, depth + 1);
  build_range(mid + 1, hi, depth + 1);
}

void SpatialIndex::query_range(int lo, int hi, int depth, const PlanePoint& p, double r,
                               std::vector<QueryHit>& out) const {
  if (lo >= hi) return;
  int mid = lo + (hi - lo) / 2;
  const IndexedPoint& m = pts_[mid];
  double d = plane_distance(m.pos, p);
  if (d <= r) out.push_back(QueryHit{m, d});

  bool x_axis = (depth % 2) == 0;
  double delta = x_axis ? p.x - m.pos.x : p.y - m.pos.y;
  // descend the near side always, the far side only if the splitting plane
  // is within the query radius
  if (delta <= 0) {
    query_range(lo, mid, depth + 1, p, r, out);
    if (-delta <= r) query_range(mid + 1, hi, depth + 1, p, r, out);
  } else {
    query_range(mid + 1, hi, depth + 1, p, r, out);
    if (delta <= r) query_range(lo, mid, depth + 1, p, r, out);
  }
}

std::vector<QueryHit> SpatialIndex::radius_query(const PlanePoint& p, double r) const {
  std::vector<QueryHit> out;
  if (!pts_.empty()) query_range(0, static_cast<int>(pts_.size()), 0, p, r, out);
  std::sort(out.begin(), out.end(), [](const QueryHit& a, const QueryHit& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.pt.link_id != b.pt.link_id) return a.pt.link_id < b.pt.link_id;
    return a.pt.seq < b.pt.seq;
  });
  return out;
}

RoadNetwork densify_geometry(RoadNetwork net, double max_spacing_m) {
  for (Link& l : net.links) {
    std::vector<GeoPoint> dense;
    dense.reserve(l.geometry.size());
    for (size_t i = 0; i + 1 < l.geometry.size(); ++i) {
      const GeoPoint& a = l.geometry[i];
      const GeoPoint& b = l.geometry[i + 1];
      dense.push_back(a);
      double d = plane_distance(project(a, net.projection_ref), project(b, net.projection_ref));
      if (d > max_spacing_m) {
        int segments = static_cast<int>(std::ceil(d / max_spacing_m));
        for (int k = 1; k < segments; ++k) {
          double t = static_cast<double>(k) / segments;
          dense.push_back(GeoPoint{a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon)});
        }
      }
    }
    dense.push_back(l.geometry.back());
    l.geometry = std::move(dense);
  }
  return net;
}

SpacingStats node_spacing_stats(const RoadNetwork& net) {
  SpacingStats st;
  double total = 0.0;
  size_t within = 0;
  for (const Link& l : net.links) {
    for (size_t i = 0; i + 1 < l.geometry.size(); ++i) {
      double d = plane_distance(project(l.geometry[i], net.projection_ref),
                                project(l.geometry[i + 1], net.projection_ref));
      ++st.count;
      total += d;
      st.max_m = std::max(st.max_m, d);
      if (d <= 100.0) ++within;
    }
  }
  if (st.count > 0) {
    st.mean_m = total / static_cast<double>(st.count);
    st.share_within_100m = static_cast<double>(within) / static_cast<double>(st.count);
  }
  return st;
}

}  // namespace volpipe
