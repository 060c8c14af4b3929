#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wayref/domain.hpp"
#include "wayref/fairway.hpp"
#include "wayref/kilometerization.hpp"
#include "wayref/navigation_stats.hpp"
#include "wayref/preprocess.hpp"

namespace wayref {

enum class System { glob, riv, nav };

std::string_view to_string(System s);
std::optional<System> parse_system(std::string_view s);

// Geometry of one travel direction.
struct DirectionalGeometry {
  Direction direction = Direction::up;
  Fairway fairway;
  TypicalRoute route;
  SpeedProfile speed;
  RouteContext context;
};

struct GeometryBundle {
  const KilometerIndex* index = nullptr;
  std::optional<DirectionalGeometry> up, down;

  const DirectionalGeometry& for_direction(Direction d) const;  // throws ValidationError if absent
};

// Kinematic state at the first encoded position.
struct Anchor {
  GeoPoint position;
  double heading = 0.0;  // incoming bearing, degrees
  double km = 0.0;       // internal km (riv, nav)
  double rel = 0.0;      // fairway offset / width (riv)
  double s = 0.0;        // signed distance from the typical route (nav)
};

struct FeatureStep {
  double lon = 0.0;
  double lat = 0.0;
};

// Units: glob (m, deg), riv (km, fraction of width), nav (km, m). Longitudinal
// kilometers are counted in the travel direction.
struct DislocationSeq {
  System system = System::glob;
  Direction direction = Direction::up;
  Anchor anchor;
  std::vector<FeatureStep> steps;
};

// Per-position state used by the encoders; exposed for the baseline and tests.
struct NavState {
  double km = 0.0;
  double s = 0.0;
  double f = 0.0;
  double f_nav = 0.0;
};
NavState nav_state(const GeoPoint& p, const GeometryBundle& g, Direction direction);

// Complete anchor (position, heading, km, rel, s) regardless of system.
Anchor full_anchor(const GeoPoint& p, double heading, const GeometryBundle& g, Direction direction);

// Encodes the transitions positions[0] -> positions[1] -> ... . `initial_heading`
// is the bearing of the motion that arrived at positions[0] (glob only).
// Throws CoverageError naming the offending position.
DislocationSeq encode(System system, std::span<const GeoPoint> positions, const GeometryBundle& g,
                      Direction direction, double initial_heading = 0.0);

struct DecodeResult {
  std::vector<GeoPoint> positions;  // one per decoded step
  bool truncated = false;           // decoding left the covered kilometers
};

DecodeResult decode(const DislocationSeq& seq, const GeometryBundle& g);

// Point at distance s from the typical route towards the travel-left side,
// along the axis normal at km.
GeoPoint nav_position(double km, double s, const DirectionalGeometry& d, const KilometerIndex& index);

// --- class discretization -------------------------------------------------

struct AxisCode {
  double resolution = 1.0;
  std::int64_t min_class = 0;
  std::int64_t max_class = 0;
};

struct Codebook {
  System system = System::glob;
  AxisCode lon, lat;

  static FeatureStep default_resolution(System system);
  // Class ranges cover the observed values extended by `margin` classes each side.
  static Codebook fit(System system, std::span<const DislocationSeq> training, FeatureStep resolution,
                      std::int64_t margin = 3);
  static Codebook fit(System system, std::span<const DislocationSeq> training) {
    return fit(system, training, default_resolution(system));
  }
};

struct ClassStep {
  std::int64_t lon = 0;
  std::int64_t lat = 0;
};

struct ClassSeq {
  System system = System::glob;
  Direction direction = Direction::up;
  Anchor anchor;
  std::vector<ClassStep> steps;
};

// Counts values that had to be clamped into the codebook range.
struct SaturationCounter {
  std::size_t count = 0;
};

ClassSeq discretize(const DislocationSeq& seq, const Codebook& codebook, SaturationCounter* saturation = nullptr);
DislocationSeq undiscretize(const ClassSeq& cs, const Codebook& codebook);

// --- samples ----------------------------------------------------------------

struct EncodedSample {
  DislocationSeq observed;  // kObservedSteps steps ending at the last observed position
  DislocationSeq future;    // kFutureSteps steps anchored at the last observed position (full anchor)
  std::vector<double> context;
};

// The first observed step starts from a virtual lead-in point 2*P0 - P1 so
// that five observed positions give five features.
EncodedSample encode_sample(System system, const SequenceSample& sample, const GeometryBundle& g);

// glob: curvature; riv: curvature, orientation; nav: curvature, orientation, hecto_euclid.
std::vector<double> context_vector(System system, const HectoContext& c);

// Mean over samples of the distance between the last true position and the
// position decoded from the discretized future features.
double measure_discretization_error(std::span<const SequenceSample> samples, System system,
                                    const GeometryBundle& g, const Codebook& codebook);

}  // namespace wayref
