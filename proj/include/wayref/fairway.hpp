#pragma once

#include "wayref/domain.hpp"
#include "wayref/kilometerization.hpp"
#include "wayref/splines.hpp"

namespace wayref {

// Continuous fairway boundary km -> point; easting and northing are
// independent quadratic splines over the same knots.
class BoundaryCurve {
 public:
  BoundaryCurve() = default;
  BoundaryCurve(Side side, QuadraticSpline easting, QuadraticSpline northing, int zone);

  // Throws CoverageError outside [km_min, km_max].
  GeoPoint operator()(double km) const;
  Side side() const { return side_; }
  double km_min() const { return east_.x_min(); }
  double km_max() const { return east_.x_max(); }
  bool covers(double km) const;

 private:
  Side side_ = Side::right;
  QuadraticSpline east_, north_;
  int zone_ = 0;
};

// Fits a boundary over the sample kilometers as given. Use `fit_boundary(samples, shift)`
// to fit over internal kilometers.
BoundaryCurve fit_boundary(const BoundarySamples& samples);
BoundaryCurve fit_boundary(const BoundarySamples& samples, const KmShiftMap& shift);

struct FairwayFrame {
  GeoPoint r_pt;
  GeoPoint l_pt;
  double width = 0.0;  // ||r - l||
  double offset = 0.0;  // signed distance from the right boundary, positive towards the left
  double rel = 0.0;     // offset / width
};

// Offset of p against the boundary points at km: d_r = ||r(km)-p||,
// d_l = ||l(km)-p||, w = ||r(km)-l(km)||; the offset is -d_r when
// w < d_l and d_r < d_l (p right of the right boundary), else +d_r.
FairwayFrame fairway_frame(const BoundaryCurve& right, const BoundaryCurve& left, const GeoPoint& p,
                           double km);

// Right/left boundaries seen in one travel direction.
struct Fairway {
  BoundaryCurve right;
  BoundaryCurve left;

  // File sides are stated for travel towards increasing km; downstream swaps them.
  static Fairway for_direction(const BoundaryCurve& file_right, const BoundaryCurve& file_left,
                               Direction direction);

  FairwayFrame frame(const GeoPoint& p, double km) const { return fairway_frame(right, left, p, km); }
  double km_min() const;
  double km_max() const;
};

}  // namespace wayref
