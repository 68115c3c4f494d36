#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volpipe/geo.hpp"

namespace volpipe {

/// One timestamped device observation.
struct Sighting {
  std::string device_id;
  double t = 0.0;  // epoch seconds
  GeoPoint position;
  std::optional<double> accuracy_m;
};

struct Trip {
  std::string device_id;
  int seq = 0;  // per-device trip index, in time order
  std::vector<Sighting> sightings;
  GeoPoint origin;
  GeoPoint destination;
  double depart_t = 0.0;
  double arrive_t = 0.0;
};

enum class ModeLabel { drive, nonmotorized, rail, air, unknown };

std::string mode_name(ModeLabel m);

struct TripParams {
  double dwell_radius_m = 50.0;
  double dwell_time_s = 300.0;
  double min_span_m = 300.0;  // crow-fly origin->destination
};

/// Segments one device's time-sorted stream into trips. A trip ends when the
/// device stays within dwell_radius of an anchor sighting for at least
/// dwell_time; stationary periods never become trip sightings. Trips with
/// fewer than 2 sightings or a crow-fly span under min_span_m are dropped.
std::vector<Trip> identify_trips(const std::vector<Sighting>& stream,
                                 const TripParams& params = {});

struct RailGeometry {
  std::vector<std::vector<GeoPoint>> polylines;
};

struct ModeParams {
  double air_p95_ms = 90.0;
  double nonmotorized_p95_ms = 2.5;
  double rail_dist_m = 300.0;
  double rail_share = 0.8;
};

/// Rule-based mode labeling, applied in fixed order: air by p95 segment
/// speed, then nonmotorized, then rail proximity (when rail geometry is
/// given), otherwise drive.
ModeLabel impute_mode(const Trip& trip, const RailGeometry* rail = nullptr,
                      const ModeParams& params = {});

/// Trips labeled drive, input order preserved.
std::vector<Trip> filter_vehicle_trips(const std::vector<Trip>& trips,
                                       const std::vector<ModeLabel>& labels);

/// 95th percentile of consecutive-sighting plane speeds (nearest-rank).
/// Segments with zero time difference are skipped.
double p95_segment_speed(const Trip& trip);

/// Reads a sightings CSV (device_id, timestamp, lat, lon, accuracy);
/// gzip input accepted. Result is sorted by (device_id, t).
std::vector<Sighting> read_sightings_csv(const std::string& path);

void write_sightings_csv(const std::vector<Sighting>& sightings, const std::string& path);

/// Splits a (device, t)-sorted stream into per-device sub-ranges.
std::vector<std::pair<size_t, size_t>> device_ranges(const std::vector<Sighting>& sorted);

}  // namespace volpipe
