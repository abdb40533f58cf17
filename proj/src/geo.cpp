#include "itl/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace itl::geo {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double central_angle(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat_deg * kDegToRad;
  const double lat2 = b.lat_deg * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.lon_deg - a.lon_deg) * kDegToRad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h = std::clamp(s * s + std::cos(lat1) * std::cos(lat2) * t * t, 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(h));
}

double initial_bearing(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat_deg * kDegToRad;
  const double lat2 = b.lat_deg * kDegToRad;
  const double dlon = (b.lon_deg - a.lon_deg) * kDegToRad;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  return std::atan2(y, x);
}

bool on_segment_planar(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const double cross = (b.lon_deg - a.lon_deg) * (p.lat_deg - a.lat_deg) -
                       (b.lat_deg - a.lat_deg) * (p.lon_deg - a.lon_deg);
  if (std::abs(cross) > 1e-12) return false;
  return p.lon_deg >= std::min(a.lon_deg, b.lon_deg) - 1e-12 &&
         p.lon_deg <= std::max(a.lon_deg, b.lon_deg) + 1e-12 &&
         p.lat_deg >= std::min(a.lat_deg, b.lat_deg) - 1e-12 &&
         p.lat_deg <= std::max(a.lat_deg, b.lat_deg) + 1e-12;
}

}  // namespace

double distance_km(const GeoPoint& a, const GeoPoint& b) { return kEarthRadiusKm * central_angle(a, b); }

double distance_to_segment_km(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const double d_ab = central_angle(a, b);
  if (d_ab == 0.0) return distance_km(p, a);
  const double d_ap = central_angle(a, p);
  if (d_ap == 0.0) return 0.0;
  const double rel = initial_bearing(a, p) - initial_bearing(a, b);
  // Projection falls before `a`.
  if (std::cos(rel) <= 0.0) return distance_km(p, a);
  const double cross_track = std::asin(std::clamp(std::sin(d_ap) * std::sin(rel), -1.0, 1.0));
  const double cos_xt = std::cos(cross_track);
  const double along = cos_xt == 0.0 ? 0.0 : std::acos(std::clamp(std::cos(d_ap) / cos_xt, -1.0, 1.0));
  if (along >= d_ab) return distance_km(p, b);
  return kEarthRadiusKm * std::abs(cross_track);
}

bool contains(std::span<const GeoPoint> ring, const GeoPoint& p) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if (on_segment_planar(p, a, b)) return true;
    if ((a.lat_deg > p.lat_deg) != (b.lat_deg > p.lat_deg)) {
      const double x = (b.lon_deg - a.lon_deg) * (p.lat_deg - a.lat_deg) / (b.lat_deg - a.lat_deg) + a.lon_deg;
      if (p.lon_deg < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polygon_km(std::span<const GeoPoint> ring, const GeoPoint& p) {
  if (ring.empty()) return std::numeric_limits<double>::infinity();
  if (contains(ring, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, distance_to_segment_km(p, ring[i], ring[(i + 1) % n]));
  }
  return best;
}

}  // namespace itl::geo
