#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wayref/config.hpp"
#include "wayref/domain.hpp"
#include "wayref/kilometerization.hpp"

namespace wayref {

enum class Centerline { straight, arc, sinusoid };

// A label jump: after `at_km` of river length (from the start) the official
// labels advance by an extra `size_km`.
struct KmGap {
  double at_km = 0.0;
  double size_km = 0.0;
};

struct RiverSpec {
  Centerline centerline = Centerline::straight;
  double radius = 500.0;       // arc; positive turns left (counterclockwise)
  double amplitude = 50.0;     // sinusoid x = A sin(2 pi y / wavelength)
  double wavelength = 2000.0;
  double length_km = 2.0;      // centerline length
  double width = 100.0;        // fairway width, boundaries at +-width/2
  double profile_spacing = 100.0;
  double profile_half_length = 0.0;  // 0 = width
  double boundary_spacing = 20.0;
  double start_km = 10.0;
  std::vector<KmGap> gaps;
  std::string waterway_id = "SYN";
  Vec2 origin{0.0, 0.0};  // start of the centerline; the river starts heading north
  int zone = 32;
};

struct OracleFix {
  double km = 0.0;           // internal
  double official_km = 0.0;
  double lateral = 0.0;      // right of increasing km is positive
  double arc_length = 0.0;   // meters from the start
};

class SyntheticRiver {
 public:
  explicit SyntheticRiver(RiverSpec spec);

  const RiverSpec& spec() const { return spec_; }
  const WaterwayAxis& axis() const { return axis_; }
  const BoundarySamples& right() const { return right_; }
  const BoundarySamples& left() const { return left_; }
  const KmShiftMap& shift_map() const { return shift_; }
  double length_m() const { return length_; }
  double km_min() const { return spec_.start_km; }
  double km_max() const;

  Vec2 center(double s) const;
  Vec2 tangent(double s) const;  // unit, towards increasing km
  double internal_km(double s) const;
  double arc_length(double internal_km) const;

  // Exact chainage of a corridor point.
  OracleFix oracle(const GeoPoint& p) const;
  // Point at internal km with a lateral offset (right of increasing km positive).
  GeoPoint point(double internal_km, double lateral) const;

 private:
  double sin_x(double y) const;
  double sin_dx(double y) const;
  double sin_ddx(double y) const;
  double sin_length_to(double y) const;
  double sin_y_at(double s) const;

  RiverSpec spec_;
  double length_ = 0.0;
  std::vector<double> panel_y_, panel_s_;  // sinusoid arc-length table
  WaterwayAxis axis_;
  BoundarySamples right_, left_;
  KmShiftMap shift_;
};

// Throws ValidationError for an inconsistent spec.
SyntheticRiver gen_river(const RiverSpec& spec);

struct TrafficSpec {
  std::size_t vessels = 40;
  double offset_mean = 0.0;  // m, right of travel positive
  double offset_std = 0.0;
  double speed = 0.25;       // internal km per minute
  double speed_dev_mean = 0.0;
  double speed_dev_std = 0.0;
  double ais_interval = 10.0;  // s
  double jitter = 2.0;         // s, uniform +-
  double noise_std = 0.0;      // m, per coordinate
  double up_fraction = 0.5;
  double start_time = 1.7e9;
  double departure_spacing = 120.0;  // s between departures
  double margin_km = 0.05;           // distance kept from the axis ends
};

// Deterministic 64-bit generator shared by all synthetic fixtures:
// mt19937_64, uniform = top 53 bits / 2^53, normal by Box-Muller.
class SyntheticRng {
 public:
  explicit SyntheticRng(std::uint64_t seed);
  double uniform();
  double normal(double mean, double stddev);
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Vessels travel the whole river at a constant offset and constant km rate.
std::vector<Track> gen_traffic(const SyntheticRiver& river, const TrafficSpec& spec, std::uint64_t seed);

RiverSpec river_spec_from(const Config& c);
TrafficSpec traffic_spec_from(const Config& c);

// Writes axis.csv, boundaries.csv and ais.csv into dir.
void write_dataset(const std::filesystem::path& dir, const SyntheticRiver& river, const std::vector<Track>& tracks);

}  // namespace wayref
