#pragma once

#include <span>

#include "itl/network.hpp"

namespace itl::geo {

/// Mean Earth radius (IUGG).
inline constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance by the haversine formula.
double distance_km(const GeoPoint& a, const GeoPoint& b);

/// Shortest great-circle distance from `p` to the arc between `a` and `b`.
double distance_to_segment_km(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b);

/// Ray-casting test in the lon/lat plane. The ring may or may not repeat its
/// first vertex at the end.
bool contains(std::span<const GeoPoint> ring, const GeoPoint& p);

/// 0 for points inside or on the ring, otherwise distance to the nearest edge.
double distance_to_polygon_km(std::span<const GeoPoint> ring, const GeoPoint& p);

}  // namespace itl::geo
