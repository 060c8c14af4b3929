#include "wayref/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "wayref/errors.hpp"
#include "wayref/projection.hpp"

namespace wayref {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_int(std::string_view text, long long& out) {
  text = trim(text);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && ec == std::errc{} && ptr == text.data() + text.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path.string());
  return in;
}

// Reads the header line and returns the column names. Throws on an empty stream.
std::vector<std::string> read_header(std::istream& in, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    std::vector<std::string> names;
    for (auto f : split_csv_line(line)) names.emplace_back(trim(f));
    return names;
  }
  throw ParseError("empty file: header row missing");
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want,
                   std::size_t line_no) {
  if (got != want) {
    std::string joined;
    for (const auto& w : want) joined += (joined.empty() ? "" : ",") + w;
    throw ParseError("unexpected header, expected '" + joined + "'", line_no);
  }
}

}  // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool parse_timestamp(std::string_view text, double& out) {
  text = trim(text);
  if (parse_double(text, out)) return true;
  // YYYY-MM-DDTHH:MM:SS[.fff][Z]
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    return false;
  long long y, mo, d, h, mi;
  double sec;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
      !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
      !parse_int(text.substr(14, 2), mi))
    return false;
  std::string_view rest = text.substr(17);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (!parse_double(rest, sec)) return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec < 0.0 || sec >= 61.0)
    return false;
  const std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(y)),
                                        std::chrono::month(static_cast<unsigned>(mo)),
                                        std::chrono::day(static_cast<unsigned>(d))};
  if (!ymd.ok()) return false;
  const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
  out = static_cast<double>(days) * 86400.0 + static_cast<double>(h * 3600 + mi * 60) + sec;
  return true;
}

// ---------------------------------------------------------------------------
// Profiles

WaterwayAxis read_axis(std::istream& in) {
  std::size_t line_no = 0;
  expect_header(read_header(in, line_no), {"waterway_id", "km", "point_index", "easting", "northing"},
                line_no);

  WaterwayAxis axis;
  std::vector<std::pair<long long, GeoPoint>> pending;
  double current_km = std::nan("");

  auto flush = [&]() {
    if (pending.empty()) return;
    std::sort(pending.begin(), pending.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    ProfileLine prof;
    prof.km = current_km;
    for (const auto& [idx, pt] : pending) prof.points.push_back(pt);
    axis.profiles.push_back(std::move(prof));
    pending.clear();
  };

  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw ParseError("expected 5 fields", line_no);
    double km, e, n;
    long long idx;
    if (f[0].empty()) throw ParseError("empty waterway_id", line_no);
    if (!parse_double(f[1], km)) throw ParseError("bad km value", line_no);
    if (!parse_int(f[2], idx)) throw ParseError("bad point_index", line_no);
    if (!parse_double(f[3], e) || !parse_double(f[4], n)) throw ParseError("bad coordinate", line_no);
    ++rows;
    if (axis.waterway_id.empty()) {
      axis.waterway_id = std::string(f[0]);
    } else if (axis.waterway_id != f[0]) {
      throw ValidationError("multiple waterway ids in one profile file ('" + axis.waterway_id +
                            "' and '" + std::string(f[0]) + "', line " + std::to_string(line_no) + ")");
    }
    if (km != current_km) {
      if (!std::isnan(current_km) && !(km > current_km))
        throw ValidationError("profile km not increasing: " + format_double(km) + " after " +
                              format_double(current_km) + " (line " + std::to_string(line_no) + ")");
      flush();
      current_km = km;
    }
    for (const auto& [i, pt] : pending)
      if (i == idx) throw ParseError("duplicate point_index in profile", line_no);
    pending.emplace_back(idx, GeoPoint{e, n, 0});
  }
  if (rows == 0) throw ParseError("profile file has no data rows");
  flush();
  validate(axis);
  return axis;
}

WaterwayAxis load_axis(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_axis(in);
}

void write_axis(std::ostream& out, const WaterwayAxis& axis) {
  out << "waterway_id,km,point_index,easting,northing\n";
  for (const auto& prof : axis.profiles)
    for (std::size_t i = 0; i < prof.points.size(); ++i)
      out << axis.waterway_id << ',' << format_double(prof.km) << ',' << i << ','
          << format_double(prof.points[i].easting) << ',' << format_double(prof.points[i].northing)
          << '\n';
}

// ---------------------------------------------------------------------------
// Boundaries

BoundarySamples read_boundaries(std::istream& in, Side side) {
  std::size_t line_no = 0;
  expect_header(read_header(in, line_no), {"side", "km", "easting", "northing"}, line_no);
  BoundarySamples out;
  out.side = side;
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw ParseError("expected 4 fields", line_no);
    const auto s = parse_side(f[0]);
    if (!s) throw ParseError("side must be 'right' or 'left'", line_no);
    double km, e, n;
    if (!parse_double(f[1], km)) throw ParseError("bad km value", line_no);
    if (!parse_double(f[2], e) || !parse_double(f[3], n)) throw ParseError("bad coordinate", line_no);
    ++rows;
    if (*s != side) continue;
    if (!out.km.empty() && !(km > out.km.back()))
      throw ValidationError("boundary km not increasing: " + format_double(km) + " after " +
                            format_double(out.km.back()) + " (line " + std::to_string(line_no) + ")");
    out.km.push_back(km);
    out.points.push_back({e, n, 0});
  }
  if (rows == 0) throw ParseError("boundary file has no data rows");
  if (out.km.empty())
    throw ValidationError("boundary file has no rows for side '" + std::string(to_string(side)) + "'");
  validate(out);
  return out;
}

BoundarySamples load_boundaries(const std::filesystem::path& path, Side side) {
  auto in = open_input(path);
  return read_boundaries(in, side);
}

void write_boundaries(std::ostream& out, const std::vector<BoundarySamples>& sides) {
  out << "side,km,easting,northing\n";
  for (const auto& b : sides)
    for (std::size_t i = 0; i < b.km.size(); ++i)
      out << to_string(b.side) << ',' << format_double(b.km[i]) << ','
          << format_double(b.points[i].easting) << ',' << format_double(b.points[i].northing) << '\n';
}

// ---------------------------------------------------------------------------
// AIS

AisLoadResult read_ais(std::istream& in, const AisLoadOptions& options) {
  std::size_t line_no = 0;
  const auto header = read_header(in, line_no);
  auto column = [&](std::string_view name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int c_id = column("vessel_id"), c_ts = column("timestamp"), c_cog = column("cog"),
            c_sog = column("sog"), c_dir = column("direction");
  int c_x = column("easting"), c_y = column("northing");
  bool geographic = false;
  if (c_x < 0 && c_y < 0) {
    c_y = column("lat");
    c_x = column("lon");
    geographic = c_x >= 0 && c_y >= 0;
  }
  if (c_id < 0 || c_ts < 0 || c_cog < 0 || c_dir < 0 || c_x < 0 || c_y < 0)
    throw ParseError(
        "AIS header must contain vessel_id,timestamp,easting,northing (or lat,lon),cog,direction",
        line_no);

  struct Row {
    AisRecord rec;
    std::size_t order;
  };
  std::vector<Row> rows;
  AisLoadResult result;
  int zone = options.utm_zone;

  std::string line;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++data_rows;
    const auto f = split_csv_line(line);
    if (f.size() != header.size() || f[c_id].empty()) {
      result.rejected.add(line_no);
      continue;
    }
    AisRecord rec;
    rec.vessel_id = std::string(f[c_id]);
    double x, y;
    const auto dir = parse_direction(f[c_dir]);
    if (!parse_timestamp(f[c_ts], rec.timestamp) || !parse_double(f[c_x], x) ||
        !parse_double(f[c_y], y) || !parse_double(f[c_cog], rec.cog) || !dir ||
        !(rec.cog >= 0.0 && rec.cog < 360.0)) {
      result.rejected.add(line_no);
      continue;
    }
    rec.direction = *dir;
    if (c_sog >= 0 && !f[c_sog].empty()) {
      double sog;
      if (!parse_double(f[c_sog], sog) || sog < 0.0) {
        result.rejected.add(line_no);
        continue;
      }
      rec.sog = sog;
    }
    if (geographic) {
      if (std::abs(y) > 84.0) {
        result.rejected.add(line_no);
        continue;
      }
      if (zone == 0) zone = utm_zone_for(x);
      rec.position = utm_forward(y, x, zone);
    } else {
      rec.position = {x, y, options.zone_tag};
    }
    rows.push_back({std::move(rec), rows.size()});
  }
  if (data_rows == 0) throw ParseError("AIS file has no data rows");

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.rec.vessel_id != b.rec.vessel_id) return a.rec.vessel_id < b.rec.vessel_id;
    return a.rec.timestamp < b.rec.timestamp;
  });

  std::map<std::pair<std::string, int>, Track> grouped;
  const Row* prev = nullptr;
  for (const Row& row : rows) {
    if (prev && prev->rec.vessel_id == row.rec.vessel_id && prev->rec.timestamp == row.rec.timestamp) {
      ++result.duplicates_dropped;  // stable sort keeps the first file occurrence in front
      continue;
    }
    prev = &row;
    auto& track = grouped[{row.rec.vessel_id, static_cast<int>(row.rec.direction)}];
    track.vessel_id = row.rec.vessel_id;
    track.direction = row.rec.direction;
    track.records.push_back(row.rec);
  }
  for (auto& [key, track] : grouped) result.tracks.push_back(std::move(track));
  return result;
}

AisLoadResult load_ais(const std::filesystem::path& path, const AisLoadOptions& options) {
  auto in = open_input(path);
  return read_ais(in, options);
}

void write_ais(std::ostream& out, const std::vector<Track>& tracks) {
  out << "vessel_id,timestamp,easting,northing,cog,sog,direction\n";
  for (const auto& t : tracks)
    for (const auto& r : t.records) {
      out << r.vessel_id << ',' << format_double(r.timestamp) << ','
          << format_double(r.position.easting) << ',' << format_double(r.position.northing) << ','
          << format_double(r.cog) << ',' << (r.sog ? format_double(*r.sog) : std::string()) << ','
          << to_string(r.direction) << '\n';
    }
}

}  // namespace wayref
