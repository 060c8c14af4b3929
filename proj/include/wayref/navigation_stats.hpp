#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wayref/domain.hpp"
#include "wayref/fairway.hpp"
#include "wayref/kilometerization.hpp"
#include "wayref/savgol.hpp"
#include "wayref/splines.hpp"

namespace wayref {

struct ResampledTrack;

struct NavStatsParams {
  SavgolParams smoothing{};       // over decameter bins
  std::size_t max_gap_bins = 10;  // longer runs of empty bins split the coverage
  double straight_threshold = 1e-4;  // |curvature| below this [1/m] counts as straight
};

// Several channels interpolated over the same knots, valid on a set of
// disjoint kilometer intervals.
class CoveredSeries {
 public:
  struct Interval {
    std::vector<double> km;
    std::vector<std::vector<double>> channels;
  };

  CoveredSeries() = default;
  explicit CoveredSeries(std::vector<Interval> intervals);

  bool covers(double km) const;
  double value(std::size_t channel, double km) const;  // throws CoverageError outside
  double derivative(std::size_t channel, double km) const;
  const std::vector<Interval>& intervals() const { return intervals_; }
  std::vector<std::pair<double, double>> coverage() const;

 private:
  const std::vector<Pchip>& interval_for(double km) const;
  std::vector<Interval> intervals_;
  std::vector<std::vector<Pchip>> curves_;
};

struct KmRange {
  double from = 0.0;
  double to = 0.0;
};

// Direction-specific typical route q(km).
class TypicalRoute {
 public:
  struct Knot {
    double km;
    GeoPoint position;
  };

  TypicalRoute() = default;
  // Knots ordered by km; spacing above 1.5 decameters starts a new coverage interval.
  TypicalRoute(Direction direction, std::span<const Knot> knots, int zone = 0);

  GeoPoint operator()(double km) const;
  // Unit tangent pointing in the travel direction.
  Vec2 tangent(double km) const;
  bool covers(double km) const { return series_.covers(km); }
  Direction direction() const { return direction_; }
  std::vector<Knot> knots() const;
  std::vector<std::pair<double, double>> coverage() const { return series_.coverage(); }

  std::vector<KmRange> holes;  // coverage holes found during extraction
  std::size_t rejected_points = 0;

 private:
  Direction direction_ = Direction::up;
  CoveredSeries series_;  // channels: easting, northing
  int zone_ = 0;
};

// Direction-specific typical kilometer progress per minute z(km), > 0.
class SpeedProfile {
 public:
  struct Knot {
    double km;
    double z;
  };

  SpeedProfile() = default;
  SpeedProfile(Direction direction, std::span<const Knot> knots);

  double operator()(double km) const;
  bool covers(double km) const { return series_.covers(km); }
  Direction direction() const { return direction_; }
  std::vector<Knot> knots() const;
  std::vector<std::pair<double, double>> coverage() const { return series_.coverage(); }

  std::vector<KmRange> holes;
  std::size_t rejected_points = 0;

 private:
  Direction direction_ = Direction::up;
  CoveredSeries series_;
};

enum class Orientation { right = -1, straight = 0, left = 1 };

struct HectoContext {
  double km = 0.0;
  double curvature = 0.0;  // signed 1/m, positive for a left turn in travel direction
  Orientation orientation = Orientation::straight;
  double hecto_euclid = 0.0;  // ||q(km + 0.1) - q(km)|| along travel
  double f_nav = 0.0;         // fairway offset of the typical route
};

class RouteContext {
 public:
  RouteContext() = default;
  RouteContext(Direction direction, std::vector<HectoContext> entries, double straight_threshold);

  // Linear interpolation between hectometers, clamped to the first/last entry.
  HectoContext at(double km) const;
  const std::vector<HectoContext>& entries() const { return entries_; }
  Direction direction() const { return direction_; }

 private:
  Direction direction_ = Direction::up;
  std::vector<HectoContext> entries_;
  double straight_threshold_ = 1e-4;
};

double median(std::vector<double> values);

// Signed curvature of the circle through a, b, c (positive = counterclockwise turn).
double three_point_curvature(Vec2 a, Vec2 b, Vec2 c);

Orientation classify_orientation(double curvature, double straight_threshold);

TypicalRoute extract_typical_route(std::span<const Track> tracks, Direction direction,
                                   const KilometerIndex& index, const NavStatsParams& params = {});

SpeedProfile extract_speed_profile(std::span<const ResampledTrack> tracks, Direction direction,
                                   const KilometerIndex& index, const NavStatsParams& params = {});

RouteContext route_context(const TypicalRoute& route, const Fairway& fairway,
                           const NavStatsParams& params = {});

}  // namespace wayref
