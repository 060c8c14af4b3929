#pragma once

// Shared fixtures: analytic rivers with an exactly known typical route and
// speed profile, so codec and baseline tests do not depend on extraction.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wayref/features.hpp"
#include "wayref/kilometerization.hpp"
#include "wayref/pipeline.hpp"
#include "wayref/synthetic.hpp"

namespace wayref::test {

inline RiverSpec straight_spec() {
  RiverSpec s;
  s.centerline = Centerline::straight;
  s.length_km = 2.0;
  return s;
}

inline RiverSpec arc_spec(double radius = 500.0, double length_km = 1.5) {
  RiverSpec s;
  s.centerline = Centerline::arc;
  s.radius = radius;
  s.length_km = length_km;
  return s;
}

inline RiverSpec sinusoid_spec() {
  RiverSpec s;
  s.centerline = Centerline::sinusoid;
  s.amplitude = 50.0;
  s.wavelength = 2000.0;
  s.length_km = 3.0;
  return s;
}

// River, index and a geometry bundle whose typical route runs at a constant
// right-of-travel offset with constant km progress z in both directions.
class RiverFixture {
 public:
  explicit RiverFixture(const RiverSpec& spec, double route_offset = 0.0, double z = 0.25)
      : river_(gen_river(spec)), index_(KilometerIndex::build(river_.axis())), z_(z) {
    boundaries_.right = fit_boundary(river_.right(), index_.shift_map());
    boundaries_.left = fit_boundary(river_.left(), index_.shift_map());
    bundle_.index = &index_;
    bundle_.up = directional(Direction::up, route_offset);
    bundle_.down = directional(Direction::down, route_offset);
  }
  RiverFixture(const RiverFixture&) = delete;
  RiverFixture& operator=(const RiverFixture&) = delete;

  const SyntheticRiver& river() const { return river_; }
  const KilometerIndex& index() const { return index_; }
  const GeometryBundle& bundle() const { return bundle_; }
  const BoundaryPair& boundaries() const { return boundaries_; }
  double z() const { return z_; }

  // Point at internal km, `offset` meters right of travel in `dir`.
  GeoPoint travel_point(double km, double offset, Direction dir) const {
    return river_.point(km, direction_sense(dir) * offset);
  }

 private:
  DirectionalGeometry directional(Direction dir, double offset) const {
    std::vector<TypicalRoute::Knot> rk;
    std::vector<SpeedProfile::Knot> sk;
    const double lo = river_.km_min(), hi = river_.km_max();
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / 0.01));
    for (std::size_t i = 0; i <= n; ++i) {
      const double km = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
      rk.push_back({km, travel_point(km, offset, dir)});
      sk.push_back({km, z_});
    }
    return make_directional(dir, boundaries_, TypicalRoute(dir, rk, river_.spec().zone), SpeedProfile(dir, sk), {});
  }

  SyntheticRiver river_;
  KilometerIndex index_;
  BoundaryPair boundaries_;
  GeometryBundle bundle_;
  double z_;
};

// Fresh empty directory below the system temp directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wayref_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace wayref::test
