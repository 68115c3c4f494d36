#include "volpipe/trips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volpipe/csv.hpp"
#include "volpipe/errors.hpp"

namespace volpipe {

std::string mode_name(ModeLabel m) {
  switch (m) {
    case ModeLabel::drive: return "drive";
    case ModeLabel::nonmotorized: return "nonmotorized";
    case ModeLabel::rail: return "rail";
    case ModeLabel::air: return "air";
    case ModeLabel::unknown: return "unknown";
  }
  return "unknown";
}

std::vector<Trip> identify_trips(const std::vector<Sighting>& stream, const TripParams& params) {
  std::vector<Trip> trips;
  if (stream.empty()) return trips;

  GeoPoint ref = stream.front().position;
  std::vector<PlanePoint> plane(stream.size());
  for (size_t i = 0; i < stream.size(); ++i) plane[i] = project(stream[i].position, ref);

  // Pass 1: mark sightings belonging to any dwell window. A window anchored
  // at i extends while every sighting stays within dwell_radius of i; it is a
  // dwell when it lasts at least dwell_time.
  std::vector<bool> stationary(stream.size(), false);
  for (size_t i = 0; i < stream.size(); ++i) {
    size_t j = i;
    while (j + 1 < stream.size() &&
           plane_distance(plane[i], plane[j + 1]) <= params.dwell_radius_m) {
      ++j;
    }
    if (stream[j].t - stream[i].t >= params.dwell_time_s) {
      for (size_t k = i; k <= j; ++k) stationary[k] = true;
    }
  }

  // Pass 2: contiguous non-stationary runs become candidate trips.
  int seq = 0;
  size_t i = 0;
  while (i < stream.size()) {
    if (stationary[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < stream.size() && !stationary[j + 1]) ++j;

    if (j > i) {
      double span = plane_distance(plane[i], plane[j]);
      if (span >= params.min_span_m && stream[j].t > stream[i].t) {
        Trip t;
        t.device_id = stream[i].device_id;
        t.seq = seq++;
        t.sightings.assign(stream.begin() + i, stream.begin() + j + 1);
        t.origin = stream[i].position;
        t.destination = stream[j].position;
        t.depart_t = stream[i].t;
        t.arrive_t = stream[j].t;
        trips.push_back(std::move(t));
      }
    }
    i = j + 1;
  }
  return trips;
}

double p95_segment_speed(const Trip& trip) {
  GeoPoint ref = trip.origin;
  std::vector<double> speeds;
  speeds.reserve(trip.sightings.size());
  for (size_t i = 0; i + 1 < trip.sightings.size(); ++i) {
    double dt = trip.sightings[i + 1].t - trip.sightings[i].t;
    if (dt <= 0) continue;
    double d = plane_distance(project(trip.sightings[i].position, ref),
                              project(trip.sightings[i + 1].position, ref));
    speeds.push_back(d / dt);
  }
  if (speeds.empty()) return 0.0;
  std::sort(speeds.begin(), speeds.end());
  size_t rank = static_cast<size_t>(std::ceil(0.95 * speeds.size()));
  if (rank == 0) rank = 1;
  return speeds[rank - 1];
}

namespace {

double point_segment_distance(const PlanePoint& p, const PlanePoint& a, const PlanePoint& b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double len2 = vx * vx + vy * vy;
  if (len2 <= 0) return plane_distance(p, a);
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

}  // namespace

ModeLabel impute_mode(const Trip& trip, const RailGeometry* rail, const ModeParams& params) {
  double p95 = p95_segment_speed(trip);
  if (p95 > params.air_p95_ms) return ModeLabel::air;
  if (p95 <= params.nonmotorized_p95_ms) return ModeLabel::nonmotorized;

  if (rail && !rail->polylines.empty() && !trip.sightings.empty()) {
    GeoPoint ref = trip.origin;
    size_t near = 0;
    for (const Sighting& s : trip.sightings) {
      PlanePoint p = project(s.position, ref);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& line : rail->polylines) {
        for (size_t i = 0; i + 1 < line.size(); ++i) {
          best = std::min(best, point_segment_distance(p, project(line[i], ref),
                                                       project(line[i + 1], ref)));
        }
      }
      if (best <= params.rail_dist_m) ++near;
    }
    if (static_cast<double>(near) >= params.rail_share * trip.sightings.size()) {
      return ModeLabel::rail;
    }
  }
  return ModeLabel::drive;
}

std::vector<Trip> filter_vehicle_trips(const std::vector<Trip>& trips,
                                       const std::vector<ModeLabel>& labels) {
  if (trips.size() != labels.size()) {
    throw InternalError("filter_vehicle_trips: trips/labels size mismatch");
  }
  std::vector<Trip> out;
  for (size_t i = 0; i < trips.size(); ++i) {
    if (labels[i] == ModeLabel::drive) out.push_back(trips[i]);
  }
  return out;
}

std::vector<Sighting> read_sightings_csv(const std::string& path) {
  CsvReader r(path);
  int c_dev = r.col("device_id");
  int c_t = r.col("timestamp");
  int c_lat = r.col("lat");
  int c_lon = r.col("lon");
  int c_acc = r.col("accuracy");
  if (c_dev < 0 || c_t < 0 || c_lat < 0 || c_lon < 0) {
    throw InputError("sightings file missing required columns (device_id, timestamp, lat, lon): " +
                     path);
  }
  std::vector<Sighting> out;
  std::vector<std::string> row;
  while (r.next(row)) {
    auto t = parse_double_opt(row[c_t]);
    auto lat = parse_double_opt(row[c_lat]);
    auto lon = parse_double_opt(row[c_lon]);
    if (!t || !lat || !lon) continue;  // skip unparsable rows
    Sighting s;
    s.device_id = row[c_dev];
    s.t = *t;
    s.position = GeoPoint{*lat, *lon};
    if (c_acc >= 0 && c_acc < static_cast<int>(row.size())) s.accuracy_m = parse_double_opt(row[c_acc]);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const Sighting& a, const Sighting& b) {
    if (a.device_id != b.device_id) return a.device_id < b.device_id;
    return a.t < b.t;
  });
  return out;
}

void write_sightings_csv(const std::vector<Sighting>& sightings, const std::string& path) {
  CsvWriter w(path);
  w.write_row({"device_id", "timestamp", "lat", "lon", "accuracy"});
  for (const Sighting& s : sightings) {
    w.write_row({s.device_id, fmt_double(s.t), fmt_double(s.position.lat),
                 fmt_double(s.position.lon), s.accuracy_m ? fmt_double(*s.accuracy_m) : ""});
  }
}

std::vector<std::pair<size_t, size_t>> device_ranges(const std::vector<Sighting>& sorted) {
  std::vector<std::pair<size_t, size_t>> ranges;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1].device_id == sorted[i].device_id) ++j;
    ranges.emplace_back(i, j + 1);
    i = j + 1;
  }
  return ranges;
}

}  // namespace volpipe
