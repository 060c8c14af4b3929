#pragma once

#include "wayref/geometry.hpp"

namespace wayref {

// UTM zone (1..60) containing a longitude in degrees.
int utm_zone_for(double lon_deg);

// WGS84 transverse-Mercator forward projection into UTM `zone`
// (Krueger series to sixth order in the third flattening). Southern
// hemisphere points get the 10,000 km false northing.
GeoPoint utm_forward(double lat_deg, double lon_deg, int zone);

}  // namespace wayref
