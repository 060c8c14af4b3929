#include "wayref/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wayref/errors.hpp"
#include "wayref/io.hpp"
#include "wayref/kernels.hpp"

namespace wayref {

std::string_view to_string(System s) {
  switch (s) {
    case System::glob: return "glob";
    case System::riv: return "riv";
    case System::nav: return "nav";
  }
  return "glob";
}

std::optional<System> parse_system(std::string_view s) {
  if (s == "glob") return System::glob;
  if (s == "riv") return System::riv;
  if (s == "nav") return System::nav;
  return std::nullopt;
}

const DirectionalGeometry& GeometryBundle::for_direction(Direction d) const {
  const auto& g = d == Direction::up ? up : down;
  if (!g) throw ValidationError("no geometry for direction " + std::string(to_string(d)));
  return *g;
}

namespace {

double normalize_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

// Bearing of a -> b, or `previous` when the vessel did not move.
double next_heading(const GeoPoint& a, const GeoPoint& b, double previous) {
  if (a.easting == b.easting && a.northing == b.northing) return previous;
  return bearing_deg(a, b);
}

const KilometerIndex& index_of(const GeometryBundle& g) {
  if (!g.index) throw ValidationError("geometry bundle has no kilometer index");
  return *g.index;
}

template <class F>
auto at_position(std::size_t t, F&& f) {
  try {
    return f();
  } catch (const CoverageError& e) {
    throw CoverageError("position " + std::to_string(t) + ": " + e.what());
  }
}

std::int64_t round_class(double v) {
  const double r = std::round(v);
  constexpr double lim = 9.0e18;
  if (!(r < lim)) return static_cast<std::int64_t>(lim);
  if (!(r > -lim)) return static_cast<std::int64_t>(-lim);
  return static_cast<std::int64_t>(r);
}

}  // namespace

NavState nav_state(const GeoPoint& p, const GeometryBundle& g, Direction direction) {
  const DirectionalGeometry& d = g.for_direction(direction);
  NavState st;
  st.km = index_of(g).kilometrize(p).km;
  st.f = d.fairway.frame(p, st.km).offset;
  const GeoPoint q = d.route(st.km);
  st.f_nav = d.fairway.frame(q, st.km).offset;
  const double dsp = distance(q, p);
  st.s = st.f > st.f_nav ? dsp : -dsp;
  return st;
}

Anchor full_anchor(const GeoPoint& p, double heading, const GeometryBundle& g, Direction direction) {
  const NavState st = nav_state(p, g, direction);
  Anchor a;
  a.position = p;
  a.heading = normalize_heading(heading);
  a.km = st.km;
  a.rel = g.for_direction(direction).fairway.frame(p, st.km).rel;
  a.s = st.s;
  return a;
}

GeoPoint nav_position(double km, double s, const DirectionalGeometry& d, const KilometerIndex& index) {
  const Vec2 left = (-direction_sense(d.direction)) * right_normal(index.axis_tangent(km));
  return to_point(to_vec(d.route(km)) + s * left, index.zone());
}

DislocationSeq encode(System system, std::span<const GeoPoint> positions, const GeometryBundle& g,
                      Direction direction, double initial_heading) {
  if (positions.empty()) throw ValidationError("encode needs at least one position");
  DislocationSeq seq;
  seq.system = system;
  seq.direction = direction;
  seq.anchor.position = positions.front();
  seq.anchor.heading = normalize_heading(initial_heading);
  const double sense = direction_sense(direction);

  switch (system) {
    case System::glob: {
      double heading = seq.anchor.heading;
      for (std::size_t t = 0; t + 1 < positions.size(); ++t) {
        const double next = next_heading(positions[t], positions[t + 1], heading);
        seq.steps.push_back({distance(positions[t], positions[t + 1]), wrap_angle_deg(next - heading)});
        heading = next;
      }
      break;
    }
    case System::riv: {
      const DirectionalGeometry& d = g.for_direction(direction);
      const KilometerIndex& index = index_of(g);
      std::vector<double> km(positions.size()), rel(positions.size());
      for (std::size_t t = 0; t < positions.size(); ++t)
        at_position(t, [&] {
          km[t] = index.kilometrize(positions[t]).km;
          rel[t] = d.fairway.frame(positions[t], km[t]).rel;
          return 0;
        });
      seq.anchor.km = km[0];
      seq.anchor.rel = rel[0];
      for (std::size_t t = 0; t + 1 < positions.size(); ++t)
        seq.steps.push_back({sense * (km[t + 1] - km[t]), rel[t + 1] - rel[t]});
      break;
    }
    case System::nav: {
      const DirectionalGeometry& d = g.for_direction(direction);
      std::vector<NavState> st(positions.size());
      for (std::size_t t = 0; t < positions.size(); ++t)
        st[t] = at_position(t, [&] { return nav_state(positions[t], g, direction); });
      seq.anchor.km = st[0].km;
      seq.anchor.s = st[0].s;
      for (std::size_t t = 0; t + 1 < positions.size(); ++t) {
        const double z = at_position(t, [&] { return d.speed(st[t].km); });
        seq.steps.push_back({sense * (st[t + 1].km - st[t].km) - z, st[t + 1].s - st[t].s});
      }
      break;
    }
  }
  return seq;
}

DecodeResult decode(const DislocationSeq& seq, const GeometryBundle& g) {
  DecodeResult out;
  const double sense = direction_sense(seq.direction);
  try {
    switch (seq.system) {
      case System::glob: {
        double heading = seq.anchor.heading;
        Vec2 p = to_vec(seq.anchor.position);
        for (const FeatureStep& st : seq.steps) {
          heading = normalize_heading(heading + st.lat);
          p = p + st.lon * heading_unit(heading);
          out.positions.push_back(to_point(p, seq.anchor.position.zone));
        }
        break;
      }
      case System::riv: {
        const DirectionalGeometry& d = g.for_direction(seq.direction);
        double km = seq.anchor.km, rel = seq.anchor.rel;
        for (const FeatureStep& st : seq.steps) {
          km += sense * st.lon;
          rel += st.lat;
          const Vec2 r = to_vec(d.fairway.right(km));
          const Vec2 l = to_vec(d.fairway.left(km));
          out.positions.push_back(to_point(r + rel * (l - r), index_of(g).zone()));
        }
        break;
      }
      case System::nav: {
        const DirectionalGeometry& d = g.for_direction(seq.direction);
        const KilometerIndex& index = index_of(g);
        double km = seq.anchor.km, s = seq.anchor.s;
        for (const FeatureStep& st : seq.steps) {
          km += sense * (st.lon + d.speed(km));
          s += st.lat;
          out.positions.push_back(nav_position(km, s, d, index));
        }
        break;
      }
    }
  } catch (const CoverageError&) {
    out.truncated = true;
  }
  return out;
}

// ---------------------------------------------------------------------------

FeatureStep Codebook::default_resolution(System system) {
  switch (system) {
    case System::glob: return {1.0, 0.5};
    case System::riv: return {0.001, 0.005};
    case System::nav: return {0.001, 1.0};
  }
  return {1.0, 1.0};
}

Codebook Codebook::fit(System system, std::span<const DislocationSeq> training, FeatureStep resolution,
                       std::int64_t margin) {
  if (!(resolution.lon > 0.0) || !(resolution.lat > 0.0))
    throw ValidationError("codebook resolutions must be positive");
  double lon_min = std::numeric_limits<double>::infinity(), lon_max = -lon_min;
  double lat_min = lon_min, lat_max = -lon_min;
  for (const DislocationSeq& seq : training)
    for (const FeatureStep& st : seq.steps) {
      lon_min = std::min(lon_min, st.lon);
      lon_max = std::max(lon_max, st.lon);
      lat_min = std::min(lat_min, st.lat);
      lat_max = std::max(lat_max, st.lat);
    }
  if (!std::isfinite(lon_min)) throw ValidationError("codebook needs at least one training step");
  Codebook cb;
  cb.system = system;
  cb.lon = {resolution.lon, round_class(lon_min / resolution.lon) - margin,
            round_class(lon_max / resolution.lon) + margin};
  cb.lat = {resolution.lat, round_class(lat_min / resolution.lat) - margin,
            round_class(lat_max / resolution.lat) + margin};
  return cb;
}

ClassSeq discretize(const DislocationSeq& seq, const Codebook& codebook, SaturationCounter* saturation) {
  const std::size_t n = seq.steps.size();
  std::vector<double> lon(n), lat(n);
  for (std::size_t i = 0; i < n; ++i) {
    lon[i] = seq.steps[i].lon;
    lat[i] = seq.steps[i].lat;
  }
  std::vector<std::int64_t> lon_c(n), lat_c(n);
  std::size_t clamped = kernels::quantize(lon, codebook.lon.resolution, codebook.lon.min_class,
                                          codebook.lon.max_class, lon_c);
  clamped += kernels::quantize(lat, codebook.lat.resolution, codebook.lat.min_class, codebook.lat.max_class,
                               lat_c);
  if (saturation) saturation->count += clamped;
  ClassSeq cs;
  cs.system = seq.system;
  cs.direction = seq.direction;
  cs.anchor = seq.anchor;
  for (std::size_t i = 0; i < n; ++i) cs.steps.push_back({lon_c[i], lat_c[i]});
  return cs;
}

DislocationSeq undiscretize(const ClassSeq& cs, const Codebook& codebook) {
  DislocationSeq seq;
  seq.system = cs.system;
  seq.direction = cs.direction;
  seq.anchor = cs.anchor;
  for (const ClassStep& c : cs.steps)
    seq.steps.push_back({static_cast<double>(c.lon) * codebook.lon.resolution,
                         static_cast<double>(c.lat) * codebook.lat.resolution});
  return seq;
}

// ---------------------------------------------------------------------------

std::vector<double> context_vector(System system, const HectoContext& c) {
  const double orient = static_cast<double>(static_cast<int>(c.orientation));
  switch (system) {
    case System::glob: return {c.curvature};
    case System::riv: return {c.curvature, orient};
    case System::nav: return {c.curvature, orient, c.hecto_euclid};
  }
  return {};
}

EncodedSample encode_sample(System system, const SequenceSample& sample, const GeometryBundle& g) {
  const auto& P = sample.positions;
  if (P.size() != kWindowSteps)
    throw ValidationError("sample " + sample.id + " has " + std::to_string(P.size()) + " positions");
  const GeoPoint lead{2.0 * P[0].easting - P[1].easting, 2.0 * P[0].northing - P[1].northing, P[0].zone};

  std::vector<GeoPoint> observed{lead};
  observed.insert(observed.end(), P.begin(), P.begin() + kObservedSteps);
  const double h0 = next_heading(lead, P[0], 0.0);
  EncodedSample out;
  out.observed = encode(system, observed, g, sample.direction, h0);

  double heading = h0;
  for (std::size_t t = 0; t + 1 < kObservedSteps; ++t) heading = next_heading(P[t], P[t + 1], heading);
  const std::span<const GeoPoint> tail(P.data() + kObservedSteps - 1, kFutureSteps + 1);
  out.future = encode(system, tail, g, sample.direction, heading);
  out.future.anchor = full_anchor(tail.front(), heading, g, sample.direction);
  out.context = context_vector(system, g.for_direction(sample.direction).context.at(out.future.anchor.km));
  return out;
}

double measure_discretization_error(std::span<const SequenceSample> samples, System system,
                                    const GeometryBundle& g, const Codebook& codebook) {
  if (samples.empty()) throw ValidationError("discretization error needs at least one sample");
  double total = 0.0;
  std::size_t used = 0;
  for (const SequenceSample& sample : samples) {
    const EncodedSample enc = encode_sample(system, sample, g);
    const DecodeResult dec = decode(undiscretize(discretize(enc.future, codebook), codebook), g);
    if (dec.truncated || dec.positions.size() != kFutureSteps) continue;
    total += distance(dec.positions.back(), sample.positions.back());
    ++used;
  }
  if (used == 0) throw ValidationError("every sample left the covered kilometers while decoding");
  return total / static_cast<double>(used);
}

}  // namespace wayref
