#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wayref/domain.hpp"
#include "wayref/kdtree.hpp"
#include "wayref/splines.hpp"

namespace wayref {

// Piecewise-linear monotone map between official kilometer labels and the
// internal labels, which advance by exactly 0.1 per profile. Outside the label
// range both directions continue with slope 1.
class KmShiftMap {
 public:
  KmShiftMap() = default;
  explicit KmShiftMap(std::span<const double> official_labels);

  double to_internal(double official_km) const;
  double to_official(double internal_km) const;
  bool is_identity() const { return identity_; }
  const std::vector<double>& official_labels() const { return official_; }
  const std::vector<double>& internal_labels() const { return internal_; }

 private:
  std::vector<double> official_, internal_;
  bool identity_ = true;
};

struct IndexOptions {
  // Largest accepted distance from the axis in meters. Zero selects the
  // longest profile line of the axis.
  double max_lateral = 0.0;
};

struct KmFix {
  std::string waterway_id;
  double km = 0.0;           // internal (shifted) kilometers
  double official_km = 0.0;  // official label scale, for output only
  double axis_distance = 0.0;
  Side axis_side = Side::right;  // seen travelling towards increasing km
  double lateral = 0.0;          // signed axis offset, positive to the right
};

// Kilometerization of planar points against one waterway axis.
//
// Each profile is represented by the arc-length midpoint of its polyline. The
// axis between consecutive representatives is a cubic Hermite curve whose end
// tangents are perpendicular to the profile chords, so every profile line is
// the axis normal at its own kilometer. A point is assigned to the pair of
// profiles whose half-planes enclose it, then projected onto that axis piece;
// the kilometer is interpolated by arc length between the two labels.
class KilometerIndex {
 public:
  static KilometerIndex build(WaterwayAxis axis, const IndexOptions& options = {});

  KmFix kilometrize(const GeoPoint& p) const;

  // Point at internal km with a signed lateral offset (positive = right of
  // travel in `direction`).
  GeoPoint inverse_kilometrize(double km, double lateral_offset,
                               Direction direction = Direction::up) const;

  std::size_t nearest_profile(const GeoPoint& p) const;         // k-d tree
  std::size_t nearest_profile_linear(const GeoPoint& p) const;  // brute-force scan

  const WaterwayAxis& axis() const { return axis_; }
  const KmShiftMap& shift_map() const { return shift_; }
  const std::vector<double>& internal_labels() const { return shift_.internal_labels(); }
  std::span<const Vec2> representatives() const { return reps_; }
  const KdTree2& tree() const { return tree_; }
  double max_lateral() const { return max_lateral_; }
  double km_min() const { return internal_labels().front(); }
  double km_max() const { return internal_labels().back(); }
  int zone() const { return zone_; }

  // Unit axis tangent (towards increasing km) at internal km.
  Vec2 axis_tangent(double km) const;
  // Axis arc length in meters per internal kilometer around km.
  double meters_per_km(double km) const;

 private:
  KilometerIndex() = default;
  double side_of(std::size_t profile, Vec2 p) const;
  std::ptrdiff_t enclosing_segment(Vec2 p, std::size_t nearest) const;
  std::size_t segment_for_km(double km) const;

  WaterwayAxis axis_;
  KmShiftMap shift_;
  std::vector<Vec2> reps_;
  std::vector<double> rep_x_, rep_y_;
  std::vector<Vec2> tangents_;
  std::vector<HermiteSegment> segments_;
  std::vector<double> seg_length_;
  KdTree2 tree_;
  double max_lateral_ = 0.0;
  int zone_ = 0;
};

}  // namespace wayref
