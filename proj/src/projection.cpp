#include "wayref/projection.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace wayref {

namespace {

constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kScale = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;

struct Series {
  double rectifying_radius;
  double ecc;
  std::array<double, 6> alpha;
};

Series make_series() {
  const double n = kFlattening / (2.0 - kFlattening);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  Series s{};
  s.rectifying_radius = kSemiMajor / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
  s.ecc = std::sqrt(kFlattening * (2.0 - kFlattening));
  s.alpha = {
      n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0 +
          7891.0 * n6 / 37800.0,
      13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0 -
          1983433.0 * n6 / 1935360.0,
      61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0 + 167603.0 * n6 / 181440.0,
      49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 + 6601661.0 * n6 / 7257600.0,
      34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0,
      212378941.0 * n6 / 319334400.0,
  };
  return s;
}

}  // namespace

int utm_zone_for(double lon_deg) {
  double lon = std::fmod(lon_deg + 180.0, 360.0);
  if (lon < 0.0) lon += 360.0;
  return static_cast<int>(lon / 6.0) % 60 + 1;
}

GeoPoint utm_forward(double lat_deg, double lon_deg, int zone) {
  if (!(std::abs(lat_deg) <= 84.0) || !std::isfinite(lon_deg))
    throw std::invalid_argument("utm_forward: latitude outside [-84, 84] or non-finite longitude");
  if (zone < 1 || zone > 60) throw std::invalid_argument("utm_forward: zone outside 1..60");
  static const Series s = make_series();

  const double central = (zone - 1) * 6.0 - 180.0 + 3.0;
  const double phi = deg_to_rad(lat_deg);
  const double lam = deg_to_rad(wrap_angle_deg(lon_deg - central));

  const double sin_phi = std::sin(phi);
  const double t = std::sinh(std::atanh(sin_phi) - s.ecc * std::atanh(s.ecc * sin_phi));
  const double xi_p = std::atan2(t, std::cos(lam));
  const double eta_p = std::atanh(std::sin(lam) / std::sqrt(1.0 + t * t));

  double xi = xi_p;
  double eta = eta_p;
  for (int j = 1; j <= 6; ++j) {
    const double a = s.alpha[j - 1];
    xi += a * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
    eta += a * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
  }

  GeoPoint p;
  p.easting = kFalseEasting + kScale * s.rectifying_radius * eta;
  p.northing = kScale * s.rectifying_radius * xi;
  if (lat_deg < 0.0) p.northing += kFalseNorthingSouth;
  p.zone = zone;
  return p;
}

}  // namespace wayref
