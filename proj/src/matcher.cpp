#include "volpipe/matcher.hpp"

#include <cmath>

#include "volpipe/errors.hpp"

namespace volpipe {

std::optional<double> travel_heading(const Sighting& a, const Sighting& b, const GeoPoint& ref) {
  PlanePoint pa = project(a.position, ref);
  PlanePoint pb = project(b.position, ref);
  double dx = pb.x - pa.x, dy = pb.y - pa.y;
  if (std::hypot(dx, dy) <= 1e-9) return std::nullopt;
  return heading_deg(dx, dy);
}

std::optional<std::pair<int64_t, double>> match_sighting(const PlanePoint& pos, double heading,
                                                         const SpatialIndex& idx,
                                                         const RoadNetwork& net,
                                                         const MatchParams& params) {
  auto hits = idx.radius_query(pos, params.radius_m);
  // hits are sorted by (distance, link_id), so the first candidate passing
  // the heading gate is the nearest qualifying link with the tie rule applied
  for (const QueryHit& h : hits) {
    int li = net.link_index(h.pt.link_id);
    if (li < 0) continue;
    auto dir = net.link_dir_deg(li);
    if (!dir) continue;
    if (angular_difference_deg(heading, *dir) < params.heading_gate_deg) {
      return std::make_pair(h.pt.link_id, h.dist);
    }
  }
  return std::nullopt;
}

MatchedTrajectory match_trajectory(const Trip& trip, const SpatialIndex& idx,
                                   const RoadNetwork& net, const MatchParams& params) {
  return match_trajectory_debug(trip, idx, net, params, nullptr);
}

MatchedTrajectory match_trajectory_debug(const Trip& trip, const SpatialIndex& idx,
                                         const RoadNetwork& net, const MatchParams& params,
                                         std::vector<MatchDebugRow>* debug) {
  MatchedTrajectory out;
  out.trip = trip;
  const auto& ss = trip.sightings;
  if (ss.size() < 2) return out;

  // Heading per sighting: toward the next sighting; coincident pairs carry
  // the previous heading; the final sighting reuses the last defined heading.
  std::vector<std::optional<double>> headings(ss.size());
  std::optional<double> prev;
  for (size_t i = 0; i + 1 < ss.size(); ++i) {
    auto h = travel_heading(ss[i], ss[i + 1], net.projection_ref);
    if (h) prev = h;
    headings[i] = h ? h : prev;
  }
  headings[ss.size() - 1] = prev;

  for (size_t i = 0; i < ss.size(); ++i) {
    MatchDebugRow dbg;
    dbg.sighting_index = static_cast<int>(i);
    dbg.heading_deg = headings[i];

    std::optional<std::pair<int64_t, double>> m;
    if (headings[i]) {
      PlanePoint pos = project(ss[i].position, net.projection_ref);
      if (debug) dbg.candidates = static_cast<int>(idx.radius_query(pos, params.radius_m).size());
      m = match_sighting(pos, *headings[i], idx, net, params);
    }
    if (m) {
      dbg.chosen_link = m->first;
      dbg.dist_m = m->second;
      int li = net.link_index(m->first);
      if (li >= 0 && net.link_dir_deg(li)) {
        dbg.heading_diff_deg = angular_difference_deg(*headings[i], *net.link_dir_deg(li));
      }
      if (!out.points.empty() && out.points.back().link_id == m->first) {
        // consecutive duplicate: keep the earliest sighting of the run
      } else {
        MatchedPoint p;
        p.sighting_index = static_cast<int>(i);
        p.t = ss[i].t;
        p.heading_deg = *headings[i];
        p.link_id = m->first;
        p.dist_to_link_node_m = m->second;
        out.points.push_back(p);
      }
    }
    if (debug) debug->push_back(dbg);
  }

  if (out.points.size() < 2) out.points.clear();  // trip contributes no volume
  return out;
}

}  // namespace volpipe
