#include "wayref/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wayref/errors.hpp"
#include "wayref/io.hpp"
#include "wayref/splines.hpp"

namespace wayref {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double round_label(double km) { return std::round(km * 1e6) / 1e6; }

}  // namespace

SyntheticRiver::SyntheticRiver(RiverSpec spec) : spec_(std::move(spec)) {
  const RiverSpec& s = spec_;
  if (!(s.length_km > 0.0) || !(s.width > 0.0) || !(s.profile_spacing > 0.0) || !(s.boundary_spacing > 0.0))
    throw ValidationError("river spec: length, width and spacings must be positive");
  length_ = s.length_km * 1000.0;
  const double profiles = length_ / s.profile_spacing;
  if (std::abs(profiles - std::round(profiles)) > 1e-9)
    throw ValidationError("river spec: profile spacing must divide the length");
  if (spec_.profile_half_length <= 0.0) spec_.profile_half_length = s.width;
  const double corridor = spec_.profile_half_length;
  if (corridor < 0.5 * s.width) throw ValidationError("river spec: profiles shorter than the fairway");

  switch (s.centerline) {
    case Centerline::straight: break;
    case Centerline::arc:
      if (!(std::abs(s.radius) > corridor))
        throw ValidationError("river spec: arc radius must exceed the profile half length");
      if (length_ / std::abs(s.radius) > std::numbers::pi)
        throw ValidationError("river spec: arc longer than a half circle");
      break;
    case Centerline::sinusoid: {
      if (!(s.wavelength > 0.0) || !(s.amplitude >= 0.0))
        throw ValidationError("river spec: sinusoid needs positive wavelength and amplitude >= 0");
      const double k = kTwoPi / s.wavelength;
      if (s.amplitude > 0.0 && !(1.0 / (s.amplitude * k * k) > corridor))
        throw ValidationError("river spec: sinusoid bends tighter than the profile half length");
      // arc-length table over panels of wavelength/200 in y
      const double dy = s.wavelength / 200.0;
      const auto& gl = gauss_legendre16();
      panel_y_.push_back(0.0);
      panel_s_.push_back(0.0);
      while (panel_s_.back() < length_ + 2.0 * s.profile_spacing) {
        const double y0 = panel_y_.back();
        double acc = 0.0;
        for (int i = 0; i < 16; ++i) acc += gl.w[i] * std::hypot(1.0, sin_dx(y0 + gl.x[i] * dy));
        panel_y_.push_back(y0 + dy);
        panel_s_.push_back(panel_s_.back() + acc * dy);
      }
      break;
    }
  }

  // profiles and official labels
  const auto n_profiles = static_cast<std::size_t>(std::llround(profiles)) + 1;
  axis_.waterway_id = s.waterway_id;
  std::vector<double> labels;
  for (std::size_t i = 0; i < n_profiles; ++i) {
    const double along = static_cast<double>(i) * s.profile_spacing;
    double label = s.start_km + along / 1000.0;
    for (const KmGap& g : s.gaps)
      if (g.at_km * 1000.0 <= along + 1e-6) label += g.size_km;
    labels.push_back(round_label(label));
    const Vec2 c = center(along), rn = right_normal(tangent(along));
    ProfileLine prof;
    prof.km = labels.back();
    for (const double off : {corridor, 0.0, -corridor}) prof.points.push_back(to_point(c + off * rn, s.zone));
    axis_.profiles.push_back(std::move(prof));
  }
  shift_ = KmShiftMap(labels);

  right_.side = Side::right;
  left_.side = Side::left;
  const auto n_samples = static_cast<std::size_t>(std::floor(length_ / s.boundary_spacing + 1e-9));
  for (std::size_t j = 0; j <= n_samples; ++j) {
    double along = static_cast<double>(j) * s.boundary_spacing;
    if (j == n_samples) along = length_;
    if (j > 0 && along <= static_cast<double>(j - 1) * s.boundary_spacing) continue;
    const double km = shift_.to_official(internal_km(along));
    const Vec2 c = center(along), rn = right_normal(tangent(along));
    right_.km.push_back(km);
    right_.points.push_back(to_point(c + (0.5 * s.width) * rn, s.zone));
    left_.km.push_back(km);
    left_.points.push_back(to_point(c - (0.5 * s.width) * rn, s.zone));
  }
}

double SyntheticRiver::km_max() const { return internal_km(length_); }

double SyntheticRiver::internal_km(double s) const {
  return spec_.start_km + 0.1 * s / spec_.profile_spacing;
}

double SyntheticRiver::arc_length(double km) const {
  return (km - spec_.start_km) / 0.1 * spec_.profile_spacing;
}

double SyntheticRiver::sin_x(double y) const {
  return spec_.amplitude * std::sin(kTwoPi * y / spec_.wavelength);
}
double SyntheticRiver::sin_dx(double y) const {
  const double k = kTwoPi / spec_.wavelength;
  return spec_.amplitude * k * std::cos(k * y);
}
double SyntheticRiver::sin_ddx(double y) const {
  const double k = kTwoPi / spec_.wavelength;
  return -spec_.amplitude * k * k * std::sin(k * y);
}

double SyntheticRiver::sin_length_to(double y) const {
  const double dy = spec_.wavelength / 200.0;
  const auto panel = static_cast<std::size_t>(
      std::clamp(std::floor(y / dy), 0.0, static_cast<double>(panel_y_.size() - 2)));
  const double y0 = panel_y_[panel];
  const double h = y - y0;
  const auto& gl = gauss_legendre16();
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) acc += gl.w[i] * std::hypot(1.0, sin_dx(y0 + gl.x[i] * h));
  return panel_s_[panel] + acc * h;
}

double SyntheticRiver::sin_y_at(double s) const {
  const auto it = std::upper_bound(panel_s_.begin(), panel_s_.end(), s);
  const std::size_t panel = std::min<std::size_t>(
      static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - panel_s_.begin() - 1, 0)), panel_s_.size() - 2);
  double y = panel_y_[panel] + (s - panel_s_[panel]) / std::hypot(1.0, sin_dx(panel_y_[panel]));
  for (int iter = 0; iter < 30; ++iter) {
    const double step = (sin_length_to(y) - s) / std::hypot(1.0, sin_dx(y));
    y -= step;
    if (std::abs(step) < 1e-13) break;
  }
  return y;
}

Vec2 SyntheticRiver::center(double s) const {
  const Vec2 o = spec_.origin;
  switch (spec_.centerline) {
    case Centerline::straight: return {o.x, o.y + s};
    case Centerline::arc: {
      const double r = spec_.radius;
      const Vec2 c{o.x - r, o.y};
      return {c.x + r * std::cos(s / r), c.y + r * std::sin(s / r)};
    }
    case Centerline::sinusoid: {
      if (s < 0.0) return center(0.0) + s * tangent(0.0);
      const double y = sin_y_at(s);
      return {o.x + sin_x(y), o.y + y};
    }
  }
  return o;
}

Vec2 SyntheticRiver::tangent(double s) const {
  switch (spec_.centerline) {
    case Centerline::straight: return {0.0, 1.0};
    case Centerline::arc: {
      const double r = spec_.radius;
      return {-std::sin(s / r), std::cos(s / r)};
    }
    case Centerline::sinusoid: {
      const double y = sin_y_at(std::max(s, 0.0));
      return normalized(Vec2{sin_dx(y), 1.0});
    }
  }
  return {0.0, 1.0};
}

OracleFix SyntheticRiver::oracle(const GeoPoint& gp) const {
  const Vec2 p = to_vec(gp) - spec_.origin;
  OracleFix fix;
  switch (spec_.centerline) {
    case Centerline::straight:
      fix.arc_length = p.y;
      fix.lateral = p.x;
      break;
    case Centerline::arc: {
      const double r = spec_.radius;
      const Vec2 v{p.x + r, p.y};  // relative to the circle centre
      const double ar = std::abs(r);
      const double theta = r > 0.0 ? std::atan2(v.y, v.x) : std::atan2(v.y, -v.x);
      fix.arc_length = ar * theta;
      fix.lateral = (r > 0.0 ? 1.0 : -1.0) * (norm(v) - ar);
      break;
    }
    case Centerline::sinusoid: {
      // global minimum of the squared distance by a scan, refined by Newton
      const double reach = spec_.amplitude + spec_.profile_half_length + spec_.wavelength / 100.0;
      const double step = spec_.wavelength / 2000.0;
      double best_y = p.y, best_d = std::numeric_limits<double>::infinity();
      for (double y = p.y - reach; y <= p.y + reach; y += step) {
        const double d = std::hypot(sin_x(y) - p.x, y - p.y);
        if (d < best_d) {
          best_d = d;
          best_y = y;
        }
      }
      double y = best_y;
      for (int iter = 0; iter < 50; ++iter) {
        const double dx = sin_x(y) - p.x;
        const double g = dx * sin_dx(y) + (y - p.y);
        const double dg = sin_dx(y) * sin_dx(y) + dx * sin_ddx(y) + 1.0;
        const double delta = g / dg;
        y -= delta;
        if (std::abs(delta) < 1e-14) break;
      }
      const Vec2 foot{sin_x(y), y};
      const Vec2 t = normalized(Vec2{sin_dx(y), 1.0});
      fix.arc_length = y >= 0.0 ? sin_length_to(y) : y * std::hypot(1.0, sin_dx(0.0));
      fix.lateral = -cross(t, p - foot);
      break;
    }
  }
  fix.km = internal_km(fix.arc_length);
  fix.official_km = shift_.to_official(fix.km);
  return fix;
}

GeoPoint SyntheticRiver::point(double km, double lateral) const {
  const double s = arc_length(km);
  return to_point(center(s) + lateral * right_normal(tangent(s)), spec_.zone);
}

SyntheticRiver gen_river(const RiverSpec& spec) { return SyntheticRiver(spec); }

// ---------------------------------------------------------------------------

SyntheticRng::SyntheticRng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t SyntheticRng::next() { return engine_(); }

double SyntheticRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SyntheticRng::normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return mean + stddev * r * std::cos(kTwoPi * u2);
}

std::vector<Track> gen_traffic(const SyntheticRiver& river, const TrafficSpec& spec, std::uint64_t seed) {
  if (spec.offset_std < 0.0 || spec.speed_dev_std < 0.0 || spec.noise_std < 0.0 || spec.jitter < 0.0)
    throw ValidationError("traffic spec: standard deviations must be nonnegative");
  if (!(spec.speed > 0.0) || !(spec.ais_interval >= 1.0))
    throw ValidationError("traffic spec: speed must be positive and the AIS interval at least 1 s");
  SyntheticRng rng(seed);
  const double lo = river.km_min() + spec.margin_km, hi = river.km_max() - spec.margin_km;
  if (!(hi > lo)) throw ValidationError("traffic spec: margin leaves no river to travel");
  const double m_per_km = river.spec().profile_spacing / 0.1;
  const int zone = river.spec().zone;

  std::vector<Track> tracks;
  for (std::size_t v = 0; v < spec.vessels; ++v) {
    const Direction dir = rng.uniform() < spec.up_fraction ? Direction::up : Direction::down;
    const double sense = direction_sense(dir);
    const double offset = rng.normal(spec.offset_mean, spec.offset_std);
    const double speed = std::max(rng.normal(spec.speed + spec.speed_dev_mean, spec.speed_dev_std), 0.1 * spec.speed);
    const double t_start = std::round(spec.start_time + static_cast<double>(v) * spec.departure_spacing);
    const double km_start = dir == Direction::up ? lo : hi;
    const double duration = (hi - lo) / speed * 60.0;

    Track track;
    char id[32];
    std::snprintf(id, sizeof id, "V%04zu", v);
    track.vessel_id = id;
    track.direction = dir;
    double prev_t = -1.0;
    for (std::size_t k = 0;; ++k) {
      const double nominal = static_cast<double>(k) * spec.ais_interval;
      if (nominal > duration) break;
      double t = t_start + nominal + std::round(spec.jitter * (2.0 * rng.uniform() - 1.0));
      if (k == 0) t = t_start;
      if (t <= prev_t) t = prev_t + 1.0;
      const double elapsed = std::min(t - t_start, duration);
      prev_t = t;
      const double km = km_start + sense * speed * elapsed / 60.0;
      GeoPoint p = river.point(km, sense * offset);
      p.easting += rng.normal(0.0, spec.noise_std);
      p.northing += rng.normal(0.0, spec.noise_std);
      const Vec2 travel = sense * river.tangent(river.arc_length(km));
      AisRecord r;
      r.vessel_id = track.vessel_id;
      r.timestamp = t;
      r.position = {p.easting, p.northing, zone};
      r.cog = bearing_deg({0.0, 0.0, zone}, to_point(travel, zone));
      r.sog = speed * m_per_km / 60.0;
      r.direction = dir;
      track.records.push_back(r);
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

// ---------------------------------------------------------------------------

RiverSpec river_spec_from(const Config& c) {
  RiverSpec s;
  const std::string kind = c.get_string("river.centerline", "straight");
  if (kind == "straight")
    s.centerline = Centerline::straight;
  else if (kind == "arc")
    s.centerline = Centerline::arc;
  else if (kind == "sinusoid")
    s.centerline = Centerline::sinusoid;
  else
    throw ValidationError("river.centerline must be straight, arc or sinusoid, got '" + kind + "'");
  s.radius = c.get_double("river.radius", s.radius);
  s.amplitude = c.get_double("river.amplitude", s.amplitude);
  s.wavelength = c.get_double("river.wavelength", s.wavelength);
  s.length_km = c.get_double("river.length_km", s.length_km);
  s.width = c.get_double("river.width", s.width);
  s.profile_spacing = c.get_double("river.profile_spacing", s.profile_spacing);
  s.profile_half_length = c.get_double("river.profile_half_length", s.profile_half_length);
  s.boundary_spacing = c.get_double("river.boundary_spacing", s.boundary_spacing);
  s.start_km = c.get_double("river.start_km", s.start_km);
  s.waterway_id = c.get_string("river.waterway_id", s.waterway_id);
  s.origin.x = c.get_double("river.origin_easting", s.origin.x);
  s.origin.y = c.get_double("river.origin_northing", s.origin.y);
  s.zone = static_cast<int>(c.get_int("river.zone", s.zone));
  // gaps = at:size, at:size
  std::stringstream gaps(c.get_string("river.gaps", ""));
  std::string item;
  while (std::getline(gaps, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("river.gaps entries must be at_km:size_km");
    auto number = [&](std::string v) {
      v.erase(0, v.find_first_not_of(" \t"));
      v.erase(v.find_last_not_of(" \t") + 1);
      double out = 0.0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
      if (ec != std::errc() || ptr != v.data() + v.size())
        throw ValidationError("river.gaps: '" + v + "' is not a number");
      return out;
    };
    s.gaps.push_back({number(item.substr(0, colon)), number(item.substr(colon + 1))});
  }
  return s;
}

TrafficSpec traffic_spec_from(const Config& c) {
  TrafficSpec t;
  t.vessels = static_cast<std::size_t>(c.get_int("traffic.vessels", static_cast<long long>(t.vessels)));
  t.offset_mean = c.get_double("traffic.offset_mean", t.offset_mean);
  t.offset_std = c.get_double("traffic.offset_std", t.offset_std);
  t.speed = c.get_double("traffic.speed", t.speed);
  t.speed_dev_mean = c.get_double("traffic.speed_dev_mean", t.speed_dev_mean);
  t.speed_dev_std = c.get_double("traffic.speed_dev_std", t.speed_dev_std);
  t.ais_interval = c.get_double("traffic.ais_interval", t.ais_interval);
  t.jitter = c.get_double("traffic.jitter", t.jitter);
  t.noise_std = c.get_double("traffic.noise_std", t.noise_std);
  t.up_fraction = c.get_double("traffic.up_fraction", t.up_fraction);
  t.start_time = c.get_double("traffic.start_time", t.start_time);
  t.departure_spacing = c.get_double("traffic.departure_spacing", t.departure_spacing);
  t.margin_km = c.get_double("traffic.margin_km", t.margin_km);
  return t;
}

void write_dataset(const std::filesystem::path& dir, const SyntheticRiver& river, const std::vector<Track>& tracks) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("axis.csv");
    write_axis(out, river.axis());
  }
  {
    auto out = open("boundaries.csv");
    write_boundaries(out, {river.right(), river.left()});
  }
  {
    auto out = open("ais.csv");
    write_ais(out, tracks);
  }
}

}  // namespace wayref
