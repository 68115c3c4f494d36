#include "volpipe/geo.hpp"

namespace volpipe {

namespace {
constexpr double kDegToRad = kPi / 180.0;
}

PlanePoint project(const GeoPoint& p, const GeoPoint& ref) {
  PlanePoint out;
  out.x = kEarthRadiusM * std::cos(ref.lat * kDegToRad) * (p.lon - ref.lon) * kDegToRad;
  out.y = kEarthRadiusM * (p.lat - ref.lat) * kDegToRad;
  return out;
}

GeoPoint unproject(const PlanePoint& p, const GeoPoint& ref) {
  GeoPoint out;
  out.lat = ref.lat + p.y / (kEarthRadiusM * kDegToRad);
  out.lon = ref.lon + p.x / (kEarthRadiusM * std::cos(ref.lat * kDegToRad) * kDegToRad);
  return out;
}

double heading_deg(double dx, double dy) {
  double deg = std::atan2(dy, dx) / kDegToRad;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg = 0.0;
  return deg;
}

double angular_difference_deg(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace volpipe
