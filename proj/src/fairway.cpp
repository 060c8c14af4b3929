#include "wayref/fairway.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wayref/errors.hpp"
#include "wayref/io.hpp"

namespace wayref {

namespace {
constexpr double kCoverageSlack = 1e-9;
}

BoundaryCurve::BoundaryCurve(Side side, QuadraticSpline easting, QuadraticSpline northing, int zone)
    : side_(side), east_(std::move(easting)), north_(std::move(northing)), zone_(zone) {}

bool BoundaryCurve::covers(double km) const {
  return km >= km_min() - kCoverageSlack && km <= km_max() + kCoverageSlack;
}

GeoPoint BoundaryCurve::operator()(double km) const {
  if (!covers(km))
    throw CoverageError(std::string(to_string(side_)) + " boundary queried at km " + format_double(km) +
                        " outside [" + format_double(km_min()) + ", " + format_double(km_max()) + "]");
  return {east_(km), north_(km), zone_};
}

BoundaryCurve fit_boundary(const BoundarySamples& samples) {
  validate(samples);
  if (samples.km.size() < 3)
    throw ValidationError("boundary fit needs at least 3 samples, got " +
                          std::to_string(samples.km.size()));
  std::vector<double> e, n;
  for (const auto& p : samples.points) {
    e.push_back(p.easting);
    n.push_back(p.northing);
  }
  return BoundaryCurve(samples.side, QuadraticSpline(samples.km, e), QuadraticSpline(samples.km, n),
                       samples.points.front().zone);
}

BoundaryCurve fit_boundary(const BoundarySamples& samples, const KmShiftMap& shift) {
  BoundarySamples internal = samples;
  for (double& km : internal.km) km = shift.to_internal(km);
  return fit_boundary(internal);
}

FairwayFrame fairway_frame(const BoundaryCurve& right, const BoundaryCurve& left, const GeoPoint& p,
                           double km) {
  FairwayFrame f;
  f.r_pt = right(km);
  f.l_pt = left(km);
  f.width = distance(f.r_pt, f.l_pt);
  if (!(f.width > 0.0)) throw ValidationError("fairway width is zero at km " + format_double(km));
  const double d_r = distance(f.r_pt, p);
  const double d_l = distance(f.l_pt, p);
  f.offset = (f.width < d_l && d_r < d_l) ? -d_r : d_r;
  f.rel = f.offset / f.width;
  return f;
}

Fairway Fairway::for_direction(const BoundaryCurve& file_right, const BoundaryCurve& file_left,
                               Direction direction) {
  if (direction == Direction::up) return {file_right, file_left};
  return {file_left, file_right};
}

double Fairway::km_min() const { return std::max(right.km_min(), left.km_min()); }
double Fairway::km_max() const { return std::min(right.km_max(), left.km_max()); }

}  // namespace wayref
