#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wayref/domain.hpp"

namespace wayref {

// Rows rejected during ingestion. Only the first ten line numbers are kept.
struct RejectLog {
  std::size_t count = 0;
  std::vector<std::size_t> first_lines;
  void add(std::size_t line) {
    ++count;
    if (first_lines.size() < 10) first_lines.push_back(line);
  }
};

struct AisLoadResult {
  std::vector<Track> tracks;  // ordered by (vessel_id, direction)
  RejectLog rejected;         // out-of-range cog, bad timestamp, bad direction, ...
  std::size_t duplicates_dropped = 0;
};

struct AisLoadOptions {
  // Zone used when the file carries lat/lon instead of easting/northing.
  // 0 selects the zone of the first record's longitude.
  int utm_zone = 0;
  // Zone tag stored in every projected point of a planar file.
  int zone_tag = 0;
};

// Profile CSV: waterway_id,km,point_index,easting,northing
WaterwayAxis load_axis(const std::filesystem::path& path);
WaterwayAxis read_axis(std::istream& in);
void write_axis(std::ostream& out, const WaterwayAxis& axis);

// Boundary CSV: side,km,easting,northing. Returns the rows of one side.
BoundarySamples load_boundaries(const std::filesystem::path& path, Side side);
BoundarySamples read_boundaries(std::istream& in, Side side);
void write_boundaries(std::ostream& out, const std::vector<BoundarySamples>& sides);

// AIS CSV: vessel_id,timestamp,easting,northing,cog,sog,direction
// (lat,lon may replace easting,northing; they are projected to UTM).
AisLoadResult load_ais(const std::filesystem::path& path, const AisLoadOptions& options = {});
AisLoadResult read_ais(std::istream& in, const AisLoadOptions& options = {});
void write_ais(std::ostream& out, const std::vector<Track>& tracks);

// Parses epoch seconds or ISO-8601 UTC ("2021-03-04T05:06:07Z", fractional seconds allowed).
bool parse_timestamp(std::string_view text, double& out);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace wayref
