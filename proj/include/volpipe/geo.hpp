#pragma once

#include <cmath>

namespace volpipe {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMetersPerMile = 1609.344;

/// WGS84 coordinate in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

/// Local plane coordinate in meters (east = +x, north = +y).
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
};

inline bool geo_valid(const GeoPoint& p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

/// Equirectangular projection about `ref`, in meters.
PlanePoint project(const GeoPoint& p, const GeoPoint& ref);

/// Analytic inverse of project().
GeoPoint unproject(const PlanePoint& p, const GeoPoint& ref);

/// Angle of (dx, dy) counterclockwise from east, in [0, 360).
double heading_deg(double dx, double dy);

/// Circular distance between two angles in degrees, in [0, 180].
double angular_difference_deg(double a, double b);

inline double plane_distance(const PlanePoint& a, const PlanePoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace volpipe
