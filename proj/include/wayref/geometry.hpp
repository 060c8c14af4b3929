#pragma once

#include <cmath>
#include <numbers>

namespace wayref {

// Planar projected coordinates in meters (UTM-style). All points of one
// dataset share a single projection zone.
struct GeoPoint {
  double easting = 0.0;
  double northing = 0.0;
  int zone = 0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product; positive when b is counterclockwise of a.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? Vec2{a.x / n, a.y / n} : Vec2{0.0, 0.0};
}

// Unit normal pointing to the right of travel along `t`.
inline Vec2 right_normal(Vec2 t) { return {t.y, -t.x}; }

inline Vec2 to_vec(const GeoPoint& p) { return {p.easting, p.northing}; }
inline GeoPoint to_point(Vec2 v, int zone = 0) { return {v.x, v.y, zone}; }

inline double distance(const GeoPoint& a, const GeoPoint& b) {
  return std::hypot(b.easting - a.easting, b.northing - a.northing);
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Bearing of the segment a -> b in degrees clockwise from north, in [0, 360).
// A zero-length segment has bearing 0.
inline double bearing_deg(const GeoPoint& a, const GeoPoint& b) {
  const double de = b.easting - a.easting;
  const double dn = b.northing - a.northing;
  if (de == 0.0 && dn == 0.0) return 0.0;
  double deg = rad_to_deg(std::atan2(de, dn));
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

// Wraps an angle difference into (-180, 180].
inline double wrap_angle_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

// Unit vector for a north-referenced clockwise heading.
inline Vec2 heading_unit(double heading_deg) {
  const double r = deg_to_rad(heading_deg);
  return {std::sin(r), std::cos(r)};
}

}  // namespace wayref
