#include "wayref/domain.hpp"

#include <cmath>
#include <string>

#include "wayref/errors.hpp"

namespace wayref {

std::string_view to_string(Side s) { return s == Side::right ? "right" : "left"; }

std::string_view to_string(Direction d) { return d == Direction::up ? "up" : "down"; }

std::optional<Side> parse_side(std::string_view s) {
  if (s == "right") return Side::right;
  if (s == "left") return Side::left;
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "up" || s == "upstream") return Direction::up;
  if (s == "down" || s == "downstream") return Direction::down;
  return std::nullopt;
}

namespace {

bool finite(const GeoPoint& p) { return std::isfinite(p.easting) && std::isfinite(p.northing); }

}  // namespace

void validate(const WaterwayAxis& axis) {
  if (axis.profiles.empty()) throw ValidationError("axis '" + axis.waterway_id + "' has no profiles");
  for (std::size_t i = 0; i < axis.profiles.size(); ++i) {
    const ProfileLine& prof = axis.profiles[i];
    const std::string tag = "profile km " + std::to_string(prof.km);
    if (!std::isfinite(prof.km)) throw ValidationError("non-finite profile km");
    if (prof.points.size() < 2) throw ValidationError(tag + " has fewer than 2 points");
    for (std::size_t j = 0; j < prof.points.size(); ++j) {
      if (!finite(prof.points[j])) throw ValidationError(tag + " has a non-finite point");
      if (j > 0 && prof.points[j] == prof.points[j - 1])
        throw ValidationError(tag + " has coincident consecutive points");
      if (prof.points[j].zone != prof.points[0].zone)
        throw ValidationError(tag + " mixes projection zones");
    }
    if (i > 0 && !(prof.km > axis.profiles[i - 1].km))
      throw ValidationError("profile km labels not strictly increasing at " + tag);
  }
}

void validate(const BoundarySamples& samples) {
  if (samples.km.size() != samples.points.size())
    throw ValidationError("boundary km/point count mismatch");
  for (std::size_t i = 0; i < samples.km.size(); ++i) {
    if (!std::isfinite(samples.km[i]) || !finite(samples.points[i]))
      throw ValidationError("non-finite boundary sample");
    if (i > 0 && !(samples.km[i] > samples.km[i - 1]))
      throw ValidationError("boundary km not strictly increasing at km " +
                            std::to_string(samples.km[i]));
  }
}

void validate(const Track& track) {
  for (std::size_t i = 0; i < track.records.size(); ++i) {
    const AisRecord& r = track.records[i];
    if (r.vessel_id != track.vessel_id || r.direction != track.direction)
      throw ValidationError("track " + track.vessel_id + " mixes vessels or directions");
    if (i > 0 && !(r.timestamp > track.records[i - 1].timestamp))
      throw ValidationError("track " + track.vessel_id + " timestamps not strictly increasing");
    if (!(r.cog >= 0.0 && r.cog < 360.0))
      throw ValidationError("track " + track.vessel_id + " cog out of range");
  }
}

}  // namespace wayref
