#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wayref/geometry.hpp"

namespace wayref {

// Lateral side in navigation-direction perspective.
enum class Side { right, left };

// Travel direction. `up` travels towards increasing waterway kilometers.
enum class Direction { up, down };

inline double direction_sense(Direction d) { return d == Direction::up ? 1.0 : -1.0; }

std::string_view to_string(Side s);
std::string_view to_string(Direction d);
std::optional<Side> parse_side(std::string_view s);
// Accepts "up"/"down" (file form) as well as "upstream"/"downstream".
std::optional<Direction> parse_direction(std::string_view s);

struct ProfileLine {
  double km = 0.0;  // official label
  std::vector<GeoPoint> points;
};

struct WaterwayAxis {
  std::string waterway_id;
  std::vector<ProfileLine> profiles;  // strictly increasing km
};

// Fairway boundary samples. The side is stated for travel towards increasing km;
// downstream geometry swaps the two sides.
struct BoundarySamples {
  Side side = Side::right;
  std::vector<double> km;  // official labels, strictly increasing
  std::vector<GeoPoint> points;
};

struct AisRecord {
  std::string vessel_id;
  double timestamp = 0.0;  // epoch seconds
  GeoPoint position;
  double cog = 0.0;  // degrees clockwise from north, [0, 360)
  std::optional<double> sog;  // meters per second
  Direction direction = Direction::up;
};

struct Track {
  std::string vessel_id;
  Direction direction = Direction::up;
  std::vector<AisRecord> records;  // strictly increasing timestamps
};

// Throws ValidationError on the first violated invariant.
void validate(const WaterwayAxis& axis);
void validate(const BoundarySamples& samples);
void validate(const Track& track);

}  // namespace wayref
